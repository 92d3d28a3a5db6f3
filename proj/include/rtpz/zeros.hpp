#pragma once

#include <limits>
#include <vector>

#include "rtpz/trigpoly.hpp"

namespace rtpz::zeros {

using poly::EvalMode;
using poly::TrigPolynomial;

struct Interval {
    double lo, hi;
};

// Certified two-sided data for delta-threshold selection:
//   omega_lower <= inf_{[lo,hi]} (|f| + |f'|) <= omega_upper
//   delta_max    = min(omega_lower, |f(lo)|, |f(hi)|)
// omega_lower is 0 when nothing could be certified; omega_upper is the
// smallest evaluated |f|+|f'|, so omega_upper < tau proves the infimum is
// below tau.
struct ThresholdReport {
    double omega_lower = 0.0;
    double omega_upper = std::numeric_limits<double>::infinity();
    double f_at_a = 0.0;
    double f_at_b = 0.0;
    double delta_max = 0.0;
    double grid_step = 0.0;
    double lipschitz = 0.0; // sup_bound(d1) + sup_bound(d2), the global constant
    long cells = 0;
    bool certified() const { return omega_lower > 0.0; }
};

enum class CountMethod { SignChanges, KacRice };

struct ZeroCount {
    long count = 0;
    CountMethod method = CountMethod::SignChanges;
    bool certified = false;
    bool threshold_violation = false; // kac-rice ran with delta >= delta_max
    bool endpoint_nudged = false;
    double nudge = 0.0;
    long cells_used = 0;
    std::vector<double> roots; // filled when refinement was requested
};

struct AdaptiveOptions {
    // Initial cells per expected zero spacing; budgets guard pathological input.
    long initial_cells = 0;  // 0: derived from mode/degree/interval
    long max_cells = 0;      // 0: derived
    int max_depth = 64;
    double target = 0.0;     // threshold certification stops once cells clear it
};

// Pinned flat-grid certificate: omega_lower = max(0, min_grid(|f|+|f'|) - h*M)
// with M = sup_bound(d1) + sup_bound(d2) in the same mode.  Honest zero when
// the resolution cannot certify anything; the caller refines.
ThresholdReport estimate_threshold(const TrigPolynomial& p, Interval iv, EvalMode mode, long grid_m);

// Adaptive variant used by the experiment harness.  Per-cell two-sided bound
// (g_lo + g_hi - h*L_cell)/2 with the local Lipschitz constant
// L_cell = max(|f'|+|f''| at the endpoints) + h*(sup|f''| + sup|f'''|);
// cells split where the bound is weak.  With target > 0 a cell stops once its
// bound clears the target, and a cell proven entirely below the target
// ((g_lo + g_hi + h*L_cell)/2 < target) is abandoned instead of split, so
// sub-target dips cost O(log) cells instead of blowing the budget.  With
// target = 0 a cell stops once its bound clears half its endpoint minimum,
// certifying the polynomial's own threshold scale.
ThresholdReport certify_threshold_adaptive(const TrigPolynomial& p, Interval iv, EvalMode mode,
                                           const AdaptiveOptions& opt = {});

// Moves an endpoint inward by multiples of 1e-9 while |f| < 1e-14 there.
Interval nudge_endpoints(const TrigPolynomial& p, Interval iv, EvalMode mode,
                         bool& nudged, double& amount);

// Certified sign-change count.  Same-sign cells are proven zero-free via
// |f(lo)| + |f(hi)| > h * (max endpoint |f'| + h*sup|f''|); opposite-sign
// cells are proven single-zero via an f'-sign certificate (endpoint slopes
// agree, |f'(lo)| + |f'(hi)| > h * (max endpoint |f''| + h*sup|f'''|), and
// the slope direction matches the endpoint values), else split.  Double
// zeros exhaust the depth budget and come back uncertified.
ZeroCount count_sign_changes(const TrigPolynomial& p, Interval iv, EvalMode mode,
                             const AdaptiveOptions& opt = {}, bool refine_roots = false);

// Structural count on {|f| < delta}: isolates all crossings of the two levels
// +-delta, walks the crossing sequence, and counts the components entered
// through one level and left through the other; each such component holds
// exactly one zero when delta is below the certified threshold.
ZeroCount kac_rice_count(const TrigPolynomial& p, Interval iv, EvalMode mode, double delta,
                         const ThresholdReport* threshold = nullptr,
                         const AdaptiveOptions& opt = {}, bool refine_roots = false);

// Numeric (1/2delta) int |f'| over {|f| < delta}; diagnostic companion of
// kac_rice_count, expected within ~1e-2 of the integer count.
double kac_rice_quadrature(const TrigPolynomial& p, Interval iv, EvalMode mode, double delta);

// Certified zero budget: a degree-n polynomial has at most 2n zeros per
// period, so counts must not exceed ((len/2pi) + 1) * 2n.
long zero_budget(const TrigPolynomial& p, Interval iv, EvalMode mode);

// Cell count used when AdaptiveOptions.initial_cells is zero: about six cells
// per expected zero spacing.
long default_initial_cells(const TrigPolynomial& p, Interval iv, EvalMode mode);

} // namespace rtpz::zeros
