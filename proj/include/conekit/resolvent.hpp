#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "conekit/geometry.hpp"
#include "conekit/spectrum.hpp"

namespace conekit {

enum class Gauge { riemannian, b_half };

const char* to_string(Gauge g);
Gauge parse_gauge(const std::string& s);

// Factor taking the b-half kernel to the riemannian one: (r r')^{1 - d/2}.
// Every conversion in the library goes through here.
double riemannian_from_bhalf(int d, double r, double rp);

struct ResolventRequest {
    const CrossSectionSpectrum* spectrum = nullptr;
    ConePoint z, zp;
    double lambda = 1.0;
    double rel_tol = 1e-12;
    Gauge gauge = Gauge::riemannian;
    // absolute floor for the truncation target, useful when the value is ~0
    double abs_tol = 0.0;
    // restrict the sum to modes [first_mode, first_mode + mode_count)
    std::size_t first_mode = 0;
    std::size_t mode_count = std::numeric_limits<std::size_t>::max();
    // integrate out y': only the constant ground state survives, with weight 1
    bool radial_sector = false;
};

struct KernelValue {
    double value = 0.0;
    double tail_bound = 0.0;
    int modes_used = 0;
    // false outside r>/r< >= 4: tail_bound is then a Cauchy-criterion estimate
    bool certified = false;
};

// components: d/dr and r^{-1} times the derivative along Y, both in z
struct KernelGradient {
    KernelValue radial;
    KernelValue angular;
};

KernelValue resolvent_kernel(const ResolventRequest& req);
KernelGradient resolvent_gradient(const ResolventRequest& req);

// Pair-function data for one (y, y') reused across radii and lambdas.
struct PairTable {
    std::vector<double> mu, w, g;     // pair value and its y-gradient
    std::vector<double> w_bound, g_bound;
    bool complete = true;            // runs to the end of the spectrum, so the Weyl tail applies
};

PairTable make_pair_table(const CrossSectionSpectrum& s, const SectionPoint& y, const SectionPoint& yp,
                          std::size_t first, std::size_t count, bool radial_sector, bool need_gradient);

struct SeriesResult {
    double value = 0.0, d_r = 0.0, angular = 0.0;
    double tail_value = 0.0, tail_r = 0.0, tail_angular = 0.0;
    int modes_used = 0;
    bool certified = false;
};

// The series at radii (r, rp) and spectral parameter lambda, in the requested
// gauge; gradient components only when `gradient` is set.
SeriesResult evaluate_series(const CrossSectionSpectrum& s, const PairTable& t, double r, double rp, double lambda,
                             Gauge gauge, double rel_tol, double abs_tol, bool gradient);

// Rigorous bound on I_mu(x) K_mu(X) for 0 < x <= X.
double ik_product_bound(double mu, double x, double X);

// (1/2) sum_j mu_j^{-1} pair_j(y, y') s^{mu_j} for s < 1, s^{-mu_j} for s > 1
double indicial_kernel(const CrossSectionSpectrum& s, double sr, const SectionPoint& y, const SectionPoint& yp);

struct CompatibilityReport {
    double s = 0.0;
    std::vector<double> r_prime, ratio;
    // |ratio - 1| at r' = 1e-3
    double deviation_at_1e3 = 0.0;
    // fitted exponent p in |ratio - 1| ~ r'^p over r' in [1e-4, 1e-2]
    double rate = 0.0;
    // min(2, 2 mu0): what the small-argument Bessel expansions predict
    double predicted_rate = 0.0;
};

CompatibilityReport zf_compatibility_check(const CrossSectionSpectrum& s, double sr, const SectionPoint& y,
                                           const SectionPoint& yp);

enum class Face { zf, lbz, rbz, rbi };
const char* to_string(Face f);

struct BoundaryFit {
    Face face = Face::zf;
    double slope = 0.0;
    double expected = 0.0;  // -inf for rbi
    std::vector<double> path, magnitude, local_slopes;
};

BoundaryFit boundary_order_probe(const CrossSectionSpectrum& s, Face face);

}  // namespace conekit
