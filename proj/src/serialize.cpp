#include "rtpz/serialize.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace rtpz::serialize {

using dist::CoefficientLaw;
using dist::LawKind;
using nlohmann::json;

json law_to_json(const CoefficientLaw& law) {
    json j;
    switch (law.kind()) {
    case LawKind::Gaussian:
        j["kind"] = "gaussian";
        j["params"] = {{"mean", law.param_mean()}, {"variance", law.param_variance()}};
        break;
    case LawKind::UniformInterval:
        j["kind"] = "uniform";
        j["params"] = {{"lo", law.param_lo()}, {"hi", law.param_hi()}};
        break;
    case LawKind::DiscreteAtoms:
        j["kind"] = "atoms";
        j["params"] = {{"values", law.atom_values()}, {"weights", law.atom_weights()}};
        break;
    case LawKind::BlockedCosine:
        j["kind"] = "blocked-cosine";
        j["params"] = {{"period", law.param_period()}};
        break;
    case LawKind::Affine:
        j["kind"] = "affine";
        j["params"] = {{"shift", law.param_shift()},
                       {"scale", law.param_scale()},
                       {"base", law_to_json(law.base())}};
        break;
    }
    return j;
}

CoefficientLaw law_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("serialize: law JSON needs a \"kind\" field");
    const std::string kind = j.at("kind").get<std::string>();
    const json params = j.value("params", json::object());

    if (kind == "gaussian")
        return CoefficientLaw::gaussian(params.value("mean", 0.0), params.value("variance", 1.0));
    if (kind == "uniform")
        return CoefficientLaw::uniform_interval(params.value("lo", -1.0), params.value("hi", 1.0));
    if (kind == "atoms")
        return CoefficientLaw::discrete_atoms(params.at("values").get<std::vector<double>>(),
                                              params.at("weights").get<std::vector<double>>());
    if (kind == "blocked-cosine")
        return CoefficientLaw::blocked_cosine(params.value("period", 5));
    if (kind == "affine")
        return CoefficientLaw::affine(law_from_json(params.at("base")),
                                      params.value("shift", 0.0), params.value("scale", 1.0));
    if (kind == "rademacher") return CoefficientLaw::make_rademacher();
    if (kind == "sqrt-primes") return CoefficientLaw::make_sqrt_primes();
    if (kind == "cos-atoms") return CoefficientLaw::make_cos_atoms(params.value("period", 7));
    if (kind == "sqrt-poisson")
        return CoefficientLaw::make_sqrt_poisson(params.value("lambda", 1.0),
                                                 params.value("truncation", -1));
    throw std::invalid_argument("serialize: unknown law kind \"" + kind + "\"");
}

CoefficientLaw law_from_spec(const std::string& spec) {
    if (spec.empty()) throw std::invalid_argument("serialize: empty law spec");
    if (spec.front() == '{') return law_from_json(json::parse(spec));
    if (spec.front() == '@') {
        std::ifstream in(spec.substr(1));
        if (!in) throw std::invalid_argument("serialize: cannot open law file " + spec.substr(1));
        json j;
        in >> j;
        return law_from_json(j);
    }

    std::string head = spec, arg;
    if (const auto colon = spec.find(':'); colon != std::string::npos) {
        head = spec.substr(0, colon);
        arg = spec.substr(colon + 1);
    }
    auto int_arg = [&](int fallback) { return arg.empty() ? fallback : std::stoi(arg); };
    auto real_arg = [&](double fallback) { return arg.empty() ? fallback : std::stod(arg); };

    if (head == "gaussian") return CoefficientLaw::gaussian(0.0, 1.0);
    if (head == "rademacher") return CoefficientLaw::make_rademacher();
    if (head == "sqrt-primes") return CoefficientLaw::make_sqrt_primes();
    if (head == "uniform") return CoefficientLaw::uniform_interval(-std::sqrt(3.0), std::sqrt(3.0));
    if (head == "cos-atoms") return CoefficientLaw::make_cos_atoms(int_arg(7));
    if (head == "blocked-cosine") return CoefficientLaw::make_blocked_cosine(int_arg(5));
    if (head == "sqrt-poisson") return CoefficientLaw::make_sqrt_poisson(real_arg(1.0));
    throw std::invalid_argument("serialize: unknown law spec \"" + spec + "\"");
}

json poly_to_json(const poly::TrigPolynomial& p) {
    json j;
    j["n"] = p.degree();
    j["a"] = p.coeff_a();
    j["b"] = p.coeff_b();
    if (!p.phases().empty()) j["theta"] = p.phases();
    return j;
}

poly::TrigPolynomial poly_from_json(const json& j) {
    auto a = j.at("a").get<std::vector<double>>();
    auto b = j.at("b").get<std::vector<double>>();
    std::vector<double> theta;
    if (j.contains("theta")) theta = j.at("theta").get<std::vector<double>>();
    if (j.contains("n") && j.at("n").get<size_t>() != a.size())
        throw std::invalid_argument("serialize: polynomial n does not match coefficient length");
    return poly::TrigPolynomial(std::move(a), std::move(b), std::move(theta));
}

} // namespace rtpz::serialize
