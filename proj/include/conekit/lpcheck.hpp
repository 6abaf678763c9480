#pragma once

#include <memory>
#include <string>
#include <vector>

#include "conekit/riesz.hpp"
#include "conekit/spectrum.hpp"

namespace conekit {

enum class Triangle { lower, upper };  // r <= r' and r > r'
const char* to_string(Triangle t);

// r^{-alpha} r'^{-beta} on one triangle, beta = d - alpha
struct HomogeneousKernelSpec {
    double alpha = 0.0;
    double beta = 0.0;
    Triangle region = Triangle::lower;
    int d = 3;

    HomogeneousKernelSpec(int d, double alpha, Triangle region);
};

struct SchurResult {
    bool bounded = false;
    double l1_norm = 0.0;  // +inf when unbounded
};

// exact Lp(r^{d-1} dr) criterion via the Mellin convolution in log r
SchurResult schur_bounded(const HomogeneousKernelSpec& spec, double p);

// the T2 lower-triangle and T3 upper-triangle Schur conditions intersected
PInterval riesz_model_intervals(int d, double mu0);

// Radial kernel homogeneous of degree -d: k(r, r') = r'^{-d} profile(r / r').
class RadialKernel {
public:
    virtual ~RadialKernel() = default;
    virtual int dimension() const = 0;
    virtual bool in_support(double s) const = 0;
    virtual double profile(double s) const = 0;
    // support contains s = 1 (counted with half weight on a grid)
    virtual bool closed_diagonal() const = 0;
    virtual std::string descriptor() const = 0;
};

class ModelKernel final : public RadialKernel {
public:
    explicit ModelKernel(HomogeneousKernelSpec spec) : spec_(spec) {}
    int dimension() const override { return spec_.d; }
    bool in_support(double s) const override;
    double profile(double s) const override;
    bool closed_diagonal() const override { return spec_.region == Triangle::lower; }
    std::string descriptor() const override;

private:
    HomogeneousKernelSpec spec_;
};

// |d/dr| of the Riesz kernel on the radial sector (y' integrated out), cut to
// the T2 (r <= r'/4) or T3 (r >= 4 r') region
class RieszRadialKernel final : public RadialKernel {
public:
    RieszRadialKernel(std::shared_ptr<const CrossSectionSpectrum> s, Region region, double rel_tol = 1e-7);
    int dimension() const override { return s_->d(); }
    bool in_support(double s) const override;
    double profile(double s) const override;
    bool closed_diagonal() const override { return false; }
    std::string descriptor() const override;

private:
    std::shared_ptr<const CrossSectionSpectrum> s_;
    Region region_;
    double rel_tol_;
};

enum class Verdict { stable, growing, inconclusive };
const char* to_string(Verdict v);

struct NormProbeResult {
    double p = 2.0;
    std::vector<int> domain_halfwidth_exponents;
    std::vector<double> norm_estimates;
    std::vector<int> iterations;
    std::vector<char> converged;
    Verdict verdict = Verdict::inconclusive;
    std::string kernel_descriptor;
    int grid_per_decade = 0;
    double growth_ratio = 0.0;  // last / first
};

NormProbeResult lp_norm_probe(const RadialKernel& k, double p, const std::vector<int>& domain_exponents,
                              int grid_per_decade = 8);

std::string probe_json(const NormProbeResult& r);
std::string probe_json(const std::vector<NormProbeResult>& rs);

}  // namespace conekit
