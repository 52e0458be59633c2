#pragma once

#include "hlg/jet.hpp"

#include <cstdint>
#include <string>

namespace hlg {

// Seeded batteries behind the jets-selftest experiment. Each returns a small
// report; "violations" counts hard failures against the documented tolerance.

struct FunctorialityReport {
    int trials = 0;
    double max_err = 0.0;   // max componentwise |compose(jg, jf) - j(g o f)|
    int violations = 0;     // > 1e-10 (double mode); any inequality (rational mode)
    bool exact_mode = false;
};
FunctorialityReport jet_functoriality_battery(std::uint64_t seed, int trials, bool rational_mode);

struct InversionReport {
    int trials = 0;
    double max_roundtrip = 0.0; // max deviation of invert(s) . s and s . invert(s) from identity jets
    int violations = 0;         // > 1e-9
};
InversionReport jet_inversion_battery(std::uint64_t seed, int trials);

struct BoundsReport {
    int trials = 0;
    int comp_violations = 0;      // composition norm bound
    int comp_lip_violations = 0;  // composition difference bound
    int eval_violations = 0;      // evaluation bound, tangents with |X| <= 1
    int eval_scaled_violations = 0; // corrected bound k*|xi|*|s|, unrestricted tangents
    double worst_margin = 1e300;  // min over checks of RHS - LHS
};
BoundsReport jet_bounds_battery(std::uint64_t seed, int trials);

struct EvalConsistencyReport {
    int trials = 0;
    double max_err_exact = 0.0; // evaluate() vs exact jet of the tangent map
    double max_err_fd = 0.0;    // evaluate() vs finite-difference jet of Tf
    int violations = 0;
};
EvalConsistencyReport jet_eval_consistency_battery(std::uint64_t seed, int trials);

struct SymmetryReport {
    int trials = 0;
    int violations = 0; // canonical -> full -> canonical must be bit-identical
};
SymmetryReport symblock_roundtrip_battery(std::uint64_t seed, int trials);

// random well-conditioned jet generator shared by the batteries
Jet<double> random_jet(Rng& rng, int n, int m, int k, double scale);

std::string selftest_report_text(std::uint64_t seed, int trials, bool rational_mode);
bool selftest_all_pass(std::uint64_t seed, int trials, bool rational_mode);

} // namespace hlg
