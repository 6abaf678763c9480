#pragma once

#include <string>
#include <vector>

#include "conekit/scaled.hpp"

namespace conekit {

enum class BesselMethod { power_series, uniform_asymptotic, continued_fraction, recurrence };

const char* to_string(BesselMethod m);

// True value is value * 2^exponent. exponent is 0 unless the result lies
// outside [2^-600, 2^600], in which case value is a normalized mantissa.
struct BesselEval {
    double value = 0.0;
    double abs_error_est = 0.0;
    BesselMethod method = BesselMethod::power_series;
    long exponent = 0;

    double to_double() const;
    Scaled scaled() const { return Scaled{value, exponent}; }
};

// I_nu, K_nu and their r-derivatives in one pass.
struct BesselIK {
    Scaled i, k, di, dk;
    double rel_err_i = 0.0, rel_err_k = 0.0;
    BesselMethod i_method = BesselMethod::power_series;
    BesselMethod k_method = BesselMethod::power_series;
};

BesselIK bessel_ik(double nu, double r);

BesselEval bessel_i(double nu, double r);
BesselEval bessel_k(double nu, double r);
BesselEval bessel_i_dr(double nu, double r);
BesselEval bessel_k_dr(double nu, double r);

// I_nu(x) K_nu(X) without intermediate overflow
double bessel_ik_product(double nu, double x, double X);

struct BoundRow {
    std::string bound_id;
    double c_fit = 0.0;
    // sup of the ratio over the full grid divided by its sup with the top
    // fifth of the order grid removed; near 1 when the constant has settled
    double max_violation_ratio = 0.0;
    std::string grid;
    bool pass = false;
};

struct BoundReport {
    std::vector<BoundRow> rows;
    bool all_pass() const;
};

// Fits the smallest constant for each of the uniform small/large argument
// bounds on I and K and for the separated-product bound, over nu x r grids.
BoundReport check_paper_bounds(const std::vector<double>& nu_grid, const std::vector<double>& r_grid);

// |Gamma(2m) - 2^{2m-1} Gamma(m) Gamma(m+1/2) / sqrt(pi)| / Gamma(2m)
double gamma_duplication_residual(double m);

std::string bound_report_csv(const BoundReport& rep);

}  // namespace conekit
