#pragma once

#include "hlg/geodesic.hpp"

#include <cstdint>

namespace hlg {

// Energy-minimizing geodesic boundary value problem via the L^2 control
// reformulation: minimize ||xi||^2_{L^2} over controls with evol(xi) = x1.x0^{-1},
// realized as penalty continuation with multi-start.

struct BVPProblem {
    const Metric* metric = nullptr;
    GroupPoint x0, x1;
    int intervals = 16; // M >= 4
    Vec target;         // x1 . x0^{-1}, precomputed
};

BVPProblem make_bvp(const Metric& metric, const GroupPoint& x0, const GroupPoint& x1, int intervals);

struct BVPOptions {
    std::vector<double> penalty_schedule{1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
    int restarts = 8;
    std::uint64_t seed = 0;
    int max_inner_iterations = 500;
    double restart_sigma = 0.1;
    double endpoint_tol = 1e-6;
    double stationarity_tol = 1e-6;
    int substeps_per_interval = 4;
    bool use_adjoint = false;       // discrete adjoint gradient (matrix models)
    bool enforce_energy_cap = false; // hard ||xi||^2 <= 2 dist_0^2 trust region
};

struct BVPSolution {
    ControlPath xi;
    double energy = 0.0;
    double endpoint_error = 0.0;
    double stationarity = 0.0;
    bool converged = false;
    int restarts_used = 0;
    std::vector<double> stage_endpoint_errors; // accepted penalty stages, nonincreasing
};

// sum_i dt <A xi_i, xi_i> for piecewise-constant paths; trapezoid on the
// nodes for linear interpolation
double energy(const ControlPath& xi, const Metric& metric);

BVPSolution solve_bvp(const BVPProblem& problem, const BVPOptions& opts = {});

// sqrt of the best energy; throws NotConverged if no restart converged
double geodesic_distance(const Metric& metric, const GroupPoint& x0, const GroupPoint& x1,
                         const BVPOptions& opts = {});

struct MinimalityReport {
    double speed_variation = 0.0; // relative spread of ||xi_i||_A
    double ea_residual = 0.0;     // max ||dxi/dt + ad_xi^T xi||_A on the grid
    double ea_tolerance = 0.0;
    bool pass = false;
};
MinimalityReport minimality_check(const BVPSolution& solution, const Metric& metric,
                                  double speed_tol = 1e-4, double ea_coeff = 5.0);

struct CompletenessReport {
    int samples = 0;
    double max_drift = 0.0;
    int blowups = 0;
    long total_steps = 0;
    bool pass = false;
};
CompletenessReport completeness_probe(const Metric& metric, int n_samples, double horizon,
                                      std::uint64_t seed);

struct NondegeneracyReport {
    int samples = 0;
    int nonconverged = 0;
    double min_ratio = 0.0; // min of distance / chart norm
    double bound = 0.0;     // 0.9 sqrt(lambda_min(A))
    bool pass = false;
};
NondegeneracyReport nondegeneracy_probe(const Metric& metric, int n_samples, std::uint64_t seed,
                                        const BVPOptions& opts = {});

} // namespace hlg
