#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "conekit/geometry.hpp"

namespace conekit {

struct V0Descriptor {
    bool constant = true;
    double c = 0.0;
    std::string text = "constant:0";
};

// Bulk evaluation of the pair functions sum_m u_jm(y) u_jm(y') for the
// leading `count` modes. Gradients are taken in y, per unit length along the
// geodesic leaving y' through y.
class PairEvaluator {
public:
    virtual ~PairEvaluator() = default;
    virtual void evaluate(const SectionPoint& y, const SectionPoint& yp, std::size_t count,
                          std::vector<double>& values, std::vector<double>* grads) const = 0;
    // coefficients c_k with pair_j = sum_k c_k T_k(cos gamma), if the section
    // reduces to a scalar separation
    virtual std::optional<std::vector<double>> separation_coeffs(std::size_t) const { return std::nullopt; }
};

struct Mode {
    double mu = 0.0;
    long multiplicity = 0;
    // sup_y pair(y, y) and sup |grad_y pair(y, y')|, NaN when unknown
    double diag_bound = 0.0;
    double grad_bound = 0.0;
    std::function<double(const SectionPoint&, const SectionPoint&)> pair_eval;
    std::function<double(const SectionPoint&, const SectionPoint&)> grad_pair_eval;
};

class CrossSectionSpectrum {
public:
    // modes must be sorted by strictly increasing mu; evaluator may be null
    // (norms-only spectrum)
    CrossSectionSpectrum(int d, std::vector<Mode> modes, V0Descriptor v0,
                         std::shared_ptr<const CrossSection> section,
                         std::shared_ptr<const PairEvaluator> evaluator, double mu_cutoff);

    int d() const { return d_; }
    const std::vector<Mode>& modes() const { return modes_; }
    std::size_t size() const { return modes_.size(); }
    const V0Descriptor& v0() const { return v0_; }
    double mu_cutoff() const { return mu_cutoff_; }

    double mu0() const;
    double mu1() const;

    bool norms_only() const { return !evaluator_; }
    const PairEvaluator& evaluator() const;
    const CrossSection& section() const { return *section_; }
    std::shared_ptr<const CrossSection> section_ptr() const { return section_; }
    ConeGeometry geometry() const { return ConeGeometry(d_, section_); }

    // Constants used to bound everything past the last tabulated mode:
    // N(mu) <= weyl * mu^{d-1}, diag_bound <= density * multiplicity,
    // grad_bound <= grad_density * multiplicity * mu.
    double tail_weyl_constant() const { return tail_weyl_; }
    double tail_density() const { return tail_density_; }
    double tail_grad_density() const { return tail_grad_density_; }

    // the lowest eigenfunction is constant on Y (true for constant V0)
    bool ground_state_constant() const { return v0_.constant; }

private:
    int d_;
    std::vector<Mode> modes_;
    V0Descriptor v0_;
    std::shared_ptr<const CrossSection> section_;
    std::shared_ptr<const PairEvaluator> evaluator_;
    double mu_cutoff_;
    double tail_weyl_ = 0.0;
    double tail_density_ = 0.0;
    double tail_grad_density_ = 0.0;
};

// a non-positive cutoff selects the default max(40, mu0 + 30)
CrossSectionSpectrum sphere_spectrum(int d, double radius, double c, double mu_cutoff = 0.0);
CrossSectionSpectrum torus_spectrum(int d, const std::vector<double>& radii, double c, double mu_cutoff = 0.0);

CrossSectionSpectrum load_spectrum(const std::string& path);
CrossSectionSpectrum parse_spectrum(const std::string& json_text);
std::string spectrum_to_json(const CrossSectionSpectrum& s);
// one row per mode: index, mu, multiplicity, diag_bound, grad_bound, counting
std::string spectrum_csv(const CrossSectionSpectrum& s);
void save_spectrum(const CrossSectionSpectrum& s, const std::string& path);

double mu0(const CrossSectionSpectrum& s);
double mu1(const CrossSectionSpectrum& s);

struct WeylFit {
    // smallest C with N(mu_j) <= C mu_j^{d-1} over the table
    double constant = 0.0;
    // largest N(mu)/mu^{d-1} over the upper half of the table
    double max_ratio = 0.0;
};

WeylFit weyl_fit(const CrossSectionSpectrum& s);

// number of eigenvalues (with multiplicity) with mu_j <= mu
double counting_function(const CrossSectionSpectrum& s, double mu);

// the shift ((d-2)/2)^2
inline double conic_shift(int d) { return 0.25 * (d - 2.0) * (d - 2.0); }

}  // namespace conekit
