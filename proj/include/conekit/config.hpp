#pragma once

#include <cmath>

namespace conekit {

// Every numerical knob the library uses lives here so that tests and the
// CLI agree on the same values.
struct Tolerances {
    // r>/r< at or above this is the certified series region.
    double certified_ratio = 4.0;

    double default_rel_tol = 1e-12;

    // default mu cutoff is max(mu_cutoff_floor, mu0 + mu_cutoff_margin)
    double mu_cutoff_floor = 40.0;
    double mu_cutoff_margin = 30.0;

    // multiplies the tabulated Weyl ratio before it is trusted past the cutoff
    double weyl_safety = 1.25;

    // Cauchy stop for uncertified sums: this many consecutive small terms
    int cauchy_run = 3;

    // scaled Bessel representation kicks in beyond 2^(+-600)
    int scaled_exponent_limit = 600;

    double quad_rel_tol = 1e-10;
    int quad_max_intervals = 4000;
    double lambda_max_safety = 1.2;

    int probe_max_iterations = 200;
    double probe_iteration_tol = 1e-6;
    double probe_growth_ratio = 4.0;
    double probe_stable_ratio = 1.5;
};

inline constexpr Tolerances kTol{};

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace conekit
