#pragma once

#include <string>

#include <json.hpp>

#include "rtpz/distributions.hpp"
#include "rtpz/trigpoly.hpp"

namespace rtpz::serialize {

// Law <-> {"kind": "...", "params": {...}}.  Structural kinds are gaussian,
// uniform, atoms, blocked-cosine and affine; the builtin families are also
// accepted as kinds on input (rademacher, sqrt-primes, cos-atoms,
// sqrt-poisson).
nlohmann::json law_to_json(const dist::CoefficientLaw& law);
dist::CoefficientLaw law_from_json(const nlohmann::json& j);

// CLI-facing parser: inline JSON ("{...}"), a JSON file ("@path"), or a
// shorthand like "gaussian", "rademacher", "sqrt-primes", "uniform",
// "cos-atoms:7", "blocked-cosine:5", "sqrt-poisson:2".
dist::CoefficientLaw law_from_spec(const std::string& spec);

// Polynomial <-> {"n": ..., "a": [...], "b": [...], "theta": [...]}; theta is
// omitted for zero-phase polynomials.
nlohmann::json poly_to_json(const poly::TrigPolynomial& p);
poly::TrigPolynomial poly_from_json(const nlohmann::json& j);

} // namespace rtpz::serialize
