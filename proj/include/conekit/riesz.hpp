#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "conekit/geometry.hpp"
#include "conekit/spectrum.hpp"

namespace conekit {

enum class IntervalBasis { general_v, zero_v, constant_c };
const char* to_string(IntervalBasis b);

// open interval of exponents p; p_hi may be +inf
struct PInterval {
    double p_lo = 1.0;
    double p_hi = std::numeric_limits<double>::infinity();
    IntervalBasis basis = IntervalBasis::general_v;

    bool contains(double p) const { return p > p_lo && p < p_hi; }
};

PInterval threshold_interval(int d, double mu0);
PInterval threshold_interval_zeroV(int d, double mu1);
PInterval threshold_interval_constant(int d, double c);

struct RieszKernelValue {
    double radial = 0.0;
    double angular = 0.0;
    double quad_error_est = 0.0;
    std::array<double, 2> lambda_splits{};
    int evaluations = 0;
    bool certified = false;

    double magnitude() const;
};

struct RieszOptions {
    double rel_tol = 1e-8;
    // extra uniform splits of every panel before adaptivity
    int initial_subdivisions = 1;
    std::size_t first_mode = 0;
    std::size_t mode_count = std::numeric_limits<std::size_t>::max();
    bool radial_sector = false;
    // evaluate inside 1/4 < r/r' < 4 as well, flagged uncertified
    bool allow_uncertified = false;
};

RieszKernelValue riesz_kernel(const CrossSectionSpectrum& s, const ConePoint& z, const ConePoint& zp,
                              double rel_tol = 1e-8);
RieszKernelValue riesz_kernel(const CrossSectionSpectrum& s, const ConePoint& z, const ConePoint& zp,
                              const RieszOptions& opt);

enum class Region { T2, T3 };
const char* to_string(Region r);

enum class ModeSelection { full, leading, remainder };
enum class ModelBound { standard, zero_v_refined };

// T2 points are (q a, a), T3 points are (a, q a), with q <= 1/4 the ratio r</r>.
struct OffdiagGrid {
    std::vector<double> anchor;
    std::vector<double> ratio;
    std::vector<double> gamma;
};

OffdiagGrid refine(const OffdiagGrid& g);

struct OffdiagRow {
    Region region = Region::T2;
    double r = 0, r_prime = 0, gamma = 0;
    double d_r = 0, angular = 0, model = 0, ratio = 0;
};

struct OffdiagReport {
    std::vector<OffdiagRow> rows;
    double c_fit = 0.0;
    bool pass = false;
    std::string grid;
};

struct OffdiagOptions {
    ModeSelection modes = ModeSelection::full;
    ModelBound model = ModelBound::standard;
    double rel_tol = 1e-7;
};

// model bound of the chosen region at (r, r')
double offdiag_model(const CrossSectionSpectrum& s, Region region, const OffdiagOptions& opt, double r, double rp);

// T2 when r <= r'/4, T3 when r >= 4 r'; DomainError in between
Region region_of(double r, double rp);

// one row of the check at y = reference point, y' at intrinsic distance gamma
OffdiagRow offdiag_point(const CrossSectionSpectrum& s, double r, double rp, double gamma,
                         const OffdiagOptions& opt = {});

OffdiagReport offdiag_bound_check(const CrossSectionSpectrum& s, Region region, const OffdiagGrid& grid,
                                  const OffdiagOptions& opt = {});

std::string offdiag_csv(const OffdiagReport& rep);

struct L2Bound {
    double epsilon = 1.0;
    double bound = 1.0;
};

// largest epsilon with Delta_Y + V0/(1-eps) + ((d-2)/2)^2 >= 0 on the
// tabulated modes, found by bisection to search_tol
L2Bound l2_bound_constant(const CrossSectionSpectrum& s, double search_tol = 1e-15);

}  // namespace conekit
