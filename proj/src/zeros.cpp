#include "rtpz/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rtpz::zeros {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double zero_density_per_unit(const TrigPolynomial& p, EvalMode mode) {
    // ~ n/(pi sqrt 3) zeros per unit argument, rescaled mode stretches by n.
    const double base = 1.0 / (std::numbers::pi * std::numbers::sqrt3);
    return mode == EvalMode::Rescaled ? base : base * p.degree();
}

long derive_initial_cells(const TrigPolynomial& p, Interval iv, EvalMode mode, long requested) {
    if (requested > 0) return requested;
    return default_initial_cells(p, iv, mode);
}

long derive_max_cells(long initial, long requested) {
    if (requested > 0) return requested;
    return std::max<long>(initial * 512, 1L << 15);
}

struct LevelFun {
    const TrigPolynomial& p;
    EvalMode mode;
    double offset;
    double value(double t) const { return p.eval(t, 0, mode) - offset; }
    void pair(double t, double& f, double& s) const {
        p.eval_pair(t, mode, f, s);
        f -= offset;
    }
    double curv(double t) const { return p.eval(t, 2, mode); }
};

struct Cell {
    double lo, hi, flo, fhi, slo, shi;
    int depth;
};

// One isolated simple crossing of the level: contained in (lo,hi), certified
// unique there by the slope certificate; dir = sign of f' at the crossing.
struct Crossing {
    double lo, hi;
    int dir;
};

struct Isolation {
    std::vector<Crossing> crossings;
    bool certified = true;
    long cells_used = 0;
};

// Splits cells until every same-sign cell is provably level-free and every
// sign-change cell provably brackets a single monotone crossing.  Both
// certificates use the local Lipschitz constant built from the endpoint
// derivative values plus h times the global bound on the next derivative
// (M2 = sup|f''|, M3 = sup|f'''|): a zero of f inside the cell would force
// |f(lo)| + |f(hi)| <= h * sup|f'|, and likewise for f'.
Isolation isolate_crossings(const LevelFun& F, Interval iv, double M2, double M3,
                            long initial_cells, long max_cells, int max_depth) {
    Isolation out;
    std::vector<Cell> stack;
    stack.reserve(256);

    const double h0 = (iv.hi - iv.lo) / static_cast<double>(initial_cells);
    {
        double prev_t = iv.lo, prev_f, prev_s;
        F.pair(prev_t, prev_f, prev_s);
        for (long i = 1; i <= initial_cells; ++i) {
            double t = i == initial_cells ? iv.hi : iv.lo + h0 * static_cast<double>(i);
            double f, s;
            F.pair(t, f, s);
            if (f == 0.0) { // dodge exact hits so signs stay well-defined
                t += h0 * 0x1p-20;
                F.pair(t, f, s);
            }
            stack.push_back({prev_t, t, prev_f, f, prev_s, s, 0});
            prev_t = t;
            prev_f = f;
            prev_s = s;
        }
    }

    while (!stack.empty()) {
        Cell c = stack.back();
        stack.pop_back();
        ++out.cells_used;
        if (out.cells_used > max_cells) {
            out.certified = false;
            // best effort: record remaining sign changes without certificates
            if (c.flo * c.fhi < 0.0) out.crossings.push_back({c.lo, c.hi, c.fhi > c.flo ? 1 : -1});
            for (const Cell& r : stack)
                if (r.flo * r.fhi < 0.0) out.crossings.push_back({r.lo, r.hi, r.fhi > r.flo ? 1 : -1});
            break;
        }
        const double h = c.hi - c.lo;
        const bool opposite = c.flo * c.fhi < 0.0;
        if (!opposite) {
            const double L1 = std::max(std::abs(c.slo), std::abs(c.shi)) + h * M2;
            if (std::abs(c.flo) + std::abs(c.fhi) > h * L1) continue; // level-free
        } else if (c.slo * c.shi > 0.0) {
            const double L2 = std::max(std::abs(F.curv(c.lo)), std::abs(F.curv(c.hi))) + h * M3;
            if (std::abs(c.slo) + std::abs(c.shi) > h * L2) {
                const int dir = c.slo > 0.0 ? 1 : -1;
                // slope direction must match the endpoint values of a single crossing
                if ((dir > 0) == (c.fhi > c.flo)) {
                    out.crossings.push_back({c.lo, c.hi, dir});
                    continue;
                }
            }
        }
        if (c.depth >= max_depth) {
            out.certified = false;
            if (opposite) out.crossings.push_back({c.lo, c.hi, c.fhi > c.flo ? 1 : -1});
            continue;
        }
        double mid = 0.5 * (c.lo + c.hi);
        double fmid, smid;
        F.pair(mid, fmid, smid);
        if (fmid == 0.0) {
            mid = c.lo + (c.hi - c.lo) * 0.49993896484375;
            F.pair(mid, fmid, smid);
            if (fmid == 0.0) {
                out.certified = false;
                if (opposite) out.crossings.push_back({c.lo, c.hi, c.fhi > c.flo ? 1 : -1});
                continue;
            }
        }
        stack.push_back({c.lo, mid, c.flo, fmid, c.slo, smid, c.depth + 1});
        stack.push_back({mid, c.hi, fmid, c.fhi, smid, c.shi, c.depth + 1});
    }

    std::sort(out.crossings.begin(), out.crossings.end(),
              [](const Crossing& a, const Crossing& b) { return a.lo < b.lo; });
    return out;
}

// Shrinks the bracket around a certified crossing to the requested width.
Crossing refine_crossing(const LevelFun& F, Crossing c, double width) {
    double lo = c.lo, hi = c.hi;
    double flo = F.value(lo);
    for (int i = 0; i < 200 && hi - lo > width; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = F.value(mid);
        if (fmid == 0.0) {
            lo = mid - 0.25 * (hi - lo);
            hi = mid + 0.25 * (hi - lo);
            break;
        }
        if ((flo < 0.0) == (fmid < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return {lo, hi, c.dir};
}

double bisect_root(const LevelFun& F, double lo, double hi, double tol) {
    double flo = F.value(lo);
    for (int i = 0; i < 200 && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = F.value(mid);
        if (fmid == 0.0) return mid;
        if ((flo < 0.0) == (fmid < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

constexpr int kGL = 16;
constexpr double gl_x[kGL] = {
    0.0483076656877383162, 0.1444719615827964934, 0.2392873622521370745, 0.3318686022821276498,
    0.4213512761306353454, 0.5068999089322293900, 0.5877157572407623290, 0.6630442669302152010,
    0.7321821187402896804, 0.7944837959679424069, 0.8493676137325699701, 0.8963211557660521240,
    0.9349060759377396891, 0.9647622555875064307, 0.9856115115452683354, 0.9972638618494815635};
constexpr double gl_w[kGL] = {
    0.0965400885147278006, 0.0956387200792748594, 0.0938443990808045654, 0.0911738786957638847,
    0.0876520930044038111, 0.0833119242269467552, 0.0781938957870703065, 0.0723457941088485062,
    0.0658222227763618468, 0.0586840934785355471, 0.0509980592623761762, 0.0428358980222266807,
    0.0342738629130214331, 0.0253920653092620595, 0.0162743947309056706, 0.0070186100094700966};

double integrate_abs_slope(const TrigPolynomial& p, EvalMode mode, double a, double b, int panels) {
    double total = 0.0;
    const double w = (b - a) / panels;
    for (int j = 0; j < panels; ++j) {
        const double mid = a + w * (j + 0.5), half = 0.5 * w;
        double acc = 0.0;
        for (int i = 0; i < kGL; ++i)
            acc += gl_w[i] * (std::abs(p.eval(mid + half * gl_x[i], 1, mode)) +
                              std::abs(p.eval(mid - half * gl_x[i], 1, mode)));
        total += half * acc;
    }
    return total;
}

struct Event {
    double pos;
    int level; // +1: crossing of +delta, -1: crossing of -delta
    int dir;   // sign of f' at the crossing
};

} // namespace

long default_initial_cells(const TrigPolynomial& p, Interval iv, EvalMode mode) {
    const double len = iv.hi - iv.lo;
    const double dens = zero_density_per_unit(p, mode);
    const long cells = static_cast<long>(std::ceil(len * dens * 6.0)) + 16;
    return std::min<long>(cells, 1L << 21);
}

long zero_budget(const TrigPolynomial& p, Interval iv, EvalMode mode) {
    const double stretch = mode == EvalMode::Rescaled ? static_cast<double>(p.degree()) : 1.0;
    const double periods = (iv.hi - iv.lo) / (two_pi * stretch);
    return static_cast<long>(std::ceil((periods + 1.0) * 2.0 * p.degree()));
}

Interval nudge_endpoints(const TrigPolynomial& p, Interval iv, EvalMode mode,
                         bool& nudged, double& amount) {
    nudged = false;
    amount = 0.0;
    Interval out = iv;
    double step = 1e-9;
    for (int i = 0; i < 4 && std::abs(p.eval(out.lo, 0, mode)) < 1e-14; ++i) {
        out.lo += step;
        amount += step;
        nudged = true;
        step *= 2.0;
    }
    step = 1e-9;
    for (int i = 0; i < 4 && std::abs(p.eval(out.hi, 0, mode)) < 1e-14; ++i) {
        out.hi -= step;
        amount += step;
        nudged = true;
        step *= 2.0;
    }
    return out;
}

ThresholdReport estimate_threshold(const TrigPolynomial& p, Interval iv, EvalMode mode, long grid_m) {
    if (!(iv.lo < iv.hi)) throw std::invalid_argument("zeros: interval requires lo < hi");
    if (grid_m < 16) throw std::invalid_argument("zeros: threshold grid must have at least 16 cells");
    ThresholdReport rep;
    rep.lipschitz = p.sup_bound(1, mode) + p.sup_bound(2, mode);
    rep.grid_step = (iv.hi - iv.lo) / static_cast<double>(grid_m);
    rep.cells = grid_m;
    double ming = std::numeric_limits<double>::infinity();
    for (long i = 0; i <= grid_m; ++i) {
        const double t = i == grid_m ? iv.hi : iv.lo + rep.grid_step * static_cast<double>(i);
        double f, fp;
        p.eval_pair(t, mode, f, fp);
        ming = std::min(ming, std::abs(f) + std::abs(fp));
        if (i == 0) rep.f_at_a = f;
        if (i == grid_m) rep.f_at_b = f;
    }
    rep.omega_upper = ming;
    rep.omega_lower = std::max(0.0, ming - rep.grid_step * rep.lipschitz);
    rep.delta_max = std::min({rep.omega_lower, std::abs(rep.f_at_a), std::abs(rep.f_at_b)});
    return rep;
}

ThresholdReport certify_threshold_adaptive(const TrigPolynomial& p, Interval iv, EvalMode mode,
                                           const AdaptiveOptions& opt) {
    if (!(iv.lo < iv.hi)) throw std::invalid_argument("zeros: interval requires lo < hi");
    ThresholdReport rep;
    rep.lipschitz = p.sup_bound(1, mode) + p.sup_bound(2, mode);
    const double M23 = p.sup_bound(2, mode) + p.sup_bound(3, mode);

    const long initial = derive_initial_cells(p, iv, mode, opt.initial_cells);
    const long max_cells = derive_max_cells(initial, opt.max_cells);
    rep.grid_step = (iv.hi - iv.lo) / static_cast<double>(initial);

    // g = |f| + |f'| carries d = |f'| + |f''| alongside: the cell Lipschitz
    // constant max(d_lo, d_hi) + h*M23 dominates sup_cell |g'|.
    struct GCell {
        double lo, hi, glo, ghi, dlo, dhi;
        int depth;
    };
    double min_observed = std::numeric_limits<double>::infinity();
    auto gd = [&](double t, double& g, double& d) {
        double f, fp, fpp;
        p.eval_triple(t, mode, f, fp, fpp);
        g = std::abs(f) + std::abs(fp);
        d = std::abs(fp) + std::abs(fpp);
        min_observed = std::min(min_observed, g);
        return f;
    };
    auto local_bound = [M23](const GCell& c) {
        const double h = c.hi - c.lo;
        const double L = std::max(c.dlo, c.dhi) + h * M23;
        return 0.5 * (c.glo + c.ghi - h * L);
    };

    std::vector<GCell> stack;
    stack.reserve(1024);
    {
        double prev_t = iv.lo, prev_g, prev_d;
        rep.f_at_a = gd(prev_t, prev_g, prev_d);
        for (long i = 1; i <= initial; ++i) {
            const double t = i == initial ? iv.hi : iv.lo + rep.grid_step * static_cast<double>(i);
            double g, d;
            const double f = gd(t, g, d);
            if (i == initial) rep.f_at_b = f;
            stack.push_back({prev_t, t, prev_g, g, prev_d, d, 0});
            prev_t = t;
            prev_g = g;
            prev_d = d;
        }
    }

    double certified_min = std::numeric_limits<double>::infinity();
    long used = 0;
    while (!stack.empty()) {
        GCell c = stack.back();
        stack.pop_back();
        ++used;
        const double h = c.hi - c.lo;
        const double L = std::max(c.dlo, c.dhi) + h * M23;
        const double bound = 0.5 * (c.glo + c.ghi - h * L);
        const double ming = std::min(c.glo, c.ghi);
        bool finished = opt.target > 0.0 ? bound >= opt.target : bound >= 0.5 * ming;
        // a cell provably below the target can never certify it; abandon it
        if (opt.target > 0.0 && 0.5 * (c.glo + c.ghi + h * L) < opt.target) finished = true;
        if (finished || c.depth >= opt.max_depth || used > max_cells) {
            certified_min = std::min(certified_min, bound);
            if (used > max_cells) {
                // remaining cells are accepted at their current bounds
                for (const GCell& r : stack)
                    certified_min = std::min(certified_min, local_bound(r));
                break;
            }
            continue;
        }
        const double mid = 0.5 * (c.lo + c.hi);
        double gm, dm;
        gd(mid, gm, dm);
        stack.push_back({c.lo, mid, c.glo, gm, c.dlo, dm, c.depth + 1});
        stack.push_back({mid, c.hi, gm, c.ghi, dm, c.dhi, c.depth + 1});
    }

    rep.cells = used;
    rep.omega_lower = std::max(0.0, certified_min);
    rep.omega_upper = min_observed;
    rep.delta_max = std::min({rep.omega_lower, std::abs(rep.f_at_a), std::abs(rep.f_at_b)});
    return rep;
}

ZeroCount count_sign_changes(const TrigPolynomial& p, Interval iv, EvalMode mode,
                             const AdaptiveOptions& opt, bool refine_roots) {
    ZeroCount zc;
    zc.method = CountMethod::SignChanges;
    Interval work = nudge_endpoints(p, iv, mode, zc.endpoint_nudged, zc.nudge);
    if (!(work.lo < work.hi)) throw std::invalid_argument("zeros: interval requires lo < hi");

    const double M2 = p.sup_bound(2, mode);
    const double M3 = p.sup_bound(3, mode);
    const long initial = derive_initial_cells(p, work, mode, opt.initial_cells);
    const long max_cells = derive_max_cells(initial, opt.max_cells);

    LevelFun F{p, mode, 0.0};
    Isolation iso = isolate_crossings(F, work, M2, M3, initial, max_cells, opt.max_depth);
    zc.count = static_cast<long>(iso.crossings.size());
    zc.certified = iso.certified;
    zc.cells_used = iso.cells_used;
    if (refine_roots) {
        zc.roots.reserve(iso.crossings.size());
        for (const Crossing& c : iso.crossings)
            zc.roots.push_back(bisect_root(F, c.lo, c.hi, 1e-12));
    }
    if (zc.count > zero_budget(p, work, mode)) zc.certified = false;
    return zc;
}

ZeroCount kac_rice_count(const TrigPolynomial& p, Interval iv, EvalMode mode, double delta,
                         const ThresholdReport* threshold, const AdaptiveOptions& opt,
                         bool refine_roots) {
    if (!(delta > 0.0)) throw std::invalid_argument("zeros: delta must be positive");
    ZeroCount zc;
    zc.method = CountMethod::KacRice;
    Interval work = nudge_endpoints(p, iv, mode, zc.endpoint_nudged, zc.nudge);
    if (!(work.lo < work.hi)) throw std::invalid_argument("zeros: interval requires lo < hi");

    bool delta_certified = false;
    if (threshold != nullptr) {
        if (delta >= threshold->delta_max) {
            zc.threshold_violation = true;
        } else if (threshold->certified()) {
            delta_certified = true;
        }
    }

    const double L1 = p.sup_bound(1, mode);
    const double M2 = p.sup_bound(2, mode);
    const double M3 = p.sup_bound(3, mode);
    const long initial = derive_initial_cells(p, work, mode, opt.initial_cells);
    const long max_cells = derive_max_cells(initial, opt.max_cells);

    LevelFun Fplus{p, mode, delta};
    LevelFun Fminus{p, mode, -delta};
    Isolation up = isolate_crossings(Fplus, work, M2, M3, initial, max_cells, opt.max_depth);
    Isolation dn = isolate_crossings(Fminus, work, M2, M3, initial, max_cells, opt.max_depth);
    zc.cells_used = up.cells_used + dn.cells_used;
    bool consistent = up.certified && dn.certified;

    // Opposite-level crossings are separated by at least 2*delta/L1 (f has to
    // travel the band width); shrink brackets below a quarter of that so the
    // merged ordering is exact.
    const double sep = delta / (2.0 * std::max(L1, 1e-300));
    std::vector<Event> events;
    events.reserve(up.crossings.size() + dn.crossings.size());
    for (Crossing& c : up.crossings) {
        if (c.hi - c.lo > sep) c = refine_crossing(Fplus, c, sep);
        events.push_back({0.5 * (c.lo + c.hi), +1, c.dir});
    }
    for (Crossing& c : dn.crossings) {
        if (c.hi - c.lo > sep) c = refine_crossing(Fminus, c, sep);
        events.push_back({0.5 * (c.lo + c.hi), -1, c.dir});
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.pos < b.pos; });

    // Walk the crossing sequence.  Regions: above the band (+1), below (-1),
    // inside entered from level 'entry'.
    const double fa = p.eval(work.lo, 0, mode);
    const double fb = p.eval(work.hi, 0, mode);
    if (std::abs(fa) <= delta || std::abs(fb) <= delta) {
        zc.threshold_violation = true;
        consistent = false;
        delta_certified = false;
    }
    int region = fa > delta ? +1 : (fa < -delta ? -1 : 0);
    int entry = 0;
    bool inside = region == 0;
    double entry_pos = work.lo;
    struct Component {
        double lo, hi;
        int from, to;
    };
    std::vector<Component> comps;
    for (const Event& e : events) {
        if (!inside) {
            // legal entering events: from above via +delta falling, from below
            // via -delta rising
            if ((region == +1 && e.level == +1 && e.dir < 0) ||
                (region == -1 && e.level == -1 && e.dir > 0)) {
                inside = true;
                entry = e.level;
                entry_pos = e.pos;
            } else {
                consistent = false;
                // resync: treat event as entering/leaving based on its level
                region = e.level == +1 ? (e.dir > 0 ? +1 : 0) : (e.dir > 0 ? 0 : -1);
                inside = region == 0;
                entry = e.level;
                entry_pos = e.pos;
            }
        } else {
            // legal exits: +delta rising (back above) or -delta falling (below)
            if (e.level == +1 && e.dir > 0) {
                comps.push_back({entry_pos, e.pos, entry, +1});
                inside = false;
                region = +1;
            } else if (e.level == -1 && e.dir < 0) {
                comps.push_back({entry_pos, e.pos, entry, -1});
                inside = false;
                region = -1;
            } else {
                consistent = false;
                comps.push_back({entry_pos, e.pos, entry, e.level});
                inside = true;
                entry = e.level;
                entry_pos = e.pos;
            }
        }
    }
    if (inside) consistent = false; // band still open at the right endpoint

    long zeros_found = 0;
    for (const Component& c : comps) {
        if (c.from != 0 && c.from == -c.to) {
            ++zeros_found;
            if (refine_roots)
                zc.roots.push_back(bisect_root(LevelFun{p, mode, 0.0}, c.lo, c.hi, 1e-12));
        } else if (delta_certified) {
            // a same-level excursion inside the band contradicts delta < omega
            consistent = false;
        }
    }
    zc.count = zeros_found;
    zc.certified = delta_certified && consistent;
    if (zc.count > zero_budget(p, work, mode)) zc.certified = false;
    return zc;
}

double kac_rice_quadrature(const TrigPolynomial& p, Interval iv, EvalMode mode, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("zeros: delta must be positive");
    bool nudged = false;
    double amount = 0.0;
    Interval work = nudge_endpoints(p, iv, mode, nudged, amount);

    const double M2 = p.sup_bound(2, mode);
    const double M3 = p.sup_bound(3, mode);
    const long initial = derive_initial_cells(p, work, mode, 0);
    const long max_cells = derive_max_cells(initial, 0);

    LevelFun Fplus{p, mode, delta};
    LevelFun Fminus{p, mode, -delta};
    Isolation up = isolate_crossings(Fplus, work, M2, M3, initial, max_cells, 64);
    Isolation dn = isolate_crossings(Fminus, work, M2, M3, initial, max_cells, 64);

    // Tight component boundaries so the integration window is the band itself.
    std::vector<Event> events;
    for (Crossing& c : up.crossings) {
        c = refine_crossing(Fplus, c, 1e-11 * std::max(1.0, std::abs(c.lo)));
        events.push_back({0.5 * (c.lo + c.hi), +1, c.dir});
    }
    for (Crossing& c : dn.crossings) {
        c = refine_crossing(Fminus, c, 1e-11 * std::max(1.0, std::abs(c.lo)));
        events.push_back({0.5 * (c.lo + c.hi), -1, c.dir});
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.pos < b.pos; });

    const double fa = p.eval(work.lo, 0, mode);
    bool inside = std::abs(fa) <= delta;
    double entry_pos = work.lo;
    double total = 0.0;
    for (const Event& e : events) {
        if (inside) {
            total += integrate_abs_slope(p, mode, entry_pos, e.pos, 4);
            inside = false;
        } else {
            entry_pos = e.pos;
            inside = true;
        }
    }
    if (inside) total += integrate_abs_slope(p, mode, entry_pos, work.hi, 4);
    return total / (2.0 * delta);
}

} // namespace rtpz::zeros
