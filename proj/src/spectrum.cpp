#include "conekit/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "conekit/config.hpp"
#include "conekit/errors.hpp"
#include "conekit/io.hpp"

namespace conekit {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

double binom(double m, int k) {
    if (m < k) return 0.0;
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (m - k + i) / i;
    return std::round(b);
}

double default_cutoff(double mu0, double requested) {
    if (requested > 0.0) return requested;
    return std::max(kTol.mu_cutoff_floor, mu0 + kTol.mu_cutoff_margin);
}

V0Descriptor constant_v0(double c) {
    std::ostringstream os;
    os.precision(17);
    os << "constant:" << c;
    return V0Descriptor{true, c, os.str()};
}

void check_positivity(int d, double c) {
    if (!(c > -conic_shift(d))) {
        std::ostringstream os;
        os << "V0 = " << c << " violates c > -((d-2)/2)^2 = " << -conic_shift(d);
        throw PositivityViolation(os.str());
    }
}

// pair and gradient functions of one mode, routed through the bulk evaluator
void attach_closures(std::vector<Mode>& modes, const std::shared_ptr<const PairEvaluator>& ev) {
    for (std::size_t j = 0; j < modes.size(); ++j) {
        modes[j].pair_eval = [ev, j](const SectionPoint& y, const SectionPoint& yp) {
            std::vector<double> v;
            ev->evaluate(y, yp, j + 1, v, nullptr);
            return v[j];
        };
        modes[j].grad_pair_eval = [ev, j](const SectionPoint& y, const SectionPoint& yp) {
            std::vector<double> v, g;
            ev->evaluate(y, yp, j + 1, v, &g);
            return g[j];
        };
    }
}

// Zonal functions on S^n: pair_l = dim_l / vol * C_l^a(cos t) / C_l^a(1),
// a = (n-1)/2.
class SphereEvaluator final : public PairEvaluator {
public:
    SphereEvaluator(std::shared_ptr<const RoundSphere> s, std::vector<double> dims)
        : sphere_(std::move(s)), scale_(std::move(dims)) {
        double vol = sphere_->volume();
        for (double& x : scale_) x /= vol;
    }

    void evaluate(const SectionPoint& y, const SectionPoint& yp, std::size_t count, std::vector<double>& values,
                  std::vector<double>* grads) const override {
        zonal(sphere_->angle(y, yp), count, values, grads);
    }

    void zonal(double theta, std::size_t count, std::vector<double>& values, std::vector<double>* grads) const {
        count = std::min(count, scale_.size());
        values.assign(count, 0.0);
        if (grads) grads->assign(count, 0.0);
        if (count == 0) return;
        const double a = 0.5 * (sphere_->dimension() - 1);
        const double t = std::cos(theta);
        const double st = std::sin(theta);
        // C_l(t), C_l(1), C_l'(t) by the three-term recurrence
        double c0 = 1.0, c1 = 2.0 * a * t;
        double u0 = 1.0, u1 = 2.0 * a;
        double d0 = 0.0, d1 = 2.0 * a;
        for (std::size_t l = 0; l < count; ++l) {
            double c, u, dc;
            if (l == 0) {
                c = c0; u = u0; dc = d0;
            } else if (l == 1) {
                c = c1; u = u1; dc = d1;
            } else {
                double L = static_cast<double>(l - 1);
                double k1 = 2.0 * (L + a), k2 = L + 2.0 * a - 1.0;
                c = (k1 * t * c1 - k2 * c0) / (L + 1.0);
                u = (k1 * u1 - k2 * u0) / (L + 1.0);
                dc = (k1 * (c1 + t * d1) - k2 * d0) / (L + 1.0);
                c0 = c1; c1 = c;
                u0 = u1; u1 = u;
                d0 = d1; d1 = dc;
            }
            values[l] = scale_[l] * c / u;
            if (grads) (*grads)[l] = -scale_[l] * dc / u * st / sphere_->radius();
        }
    }

    std::optional<std::vector<double>> separation_coeffs(std::size_t j) const override {
        if (sphere_->radius() != 1.0 || j >= scale_.size()) return std::nullopt;
        // degree-l polynomial in cos(theta): interpolation at l+1 Chebyshev nodes is exact
        std::size_t n = j + 1;
        std::vector<double> f(n), v;
        for (std::size_t m = 0; m < n; ++m) {
            double th = kPi * (m + 0.5) / n;
            zonal(th, j + 1, v, nullptr);
            f[m] = v[j];
        }
        std::vector<double> c(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            double s = 0.0;
            for (std::size_t m = 0; m < n; ++m) s += f[m] * std::cos(kPi * k * (m + 0.5) / n);
            c[k] = (k == 0 ? 1.0 : 2.0) * s / n;
        }
        return c;
    }

private:
    std::shared_ptr<const RoundSphere> sphere_;
    std::vector<double> scale_;
};

// Flat torus: each eigenvalue class is a set of lattice vectors k and the
// pair function is sum_k cos(k . dtheta) / vol.
class TorusEvaluator final : public PairEvaluator {
public:
    TorusEvaluator(std::shared_ptr<const FlatTorus> t, std::vector<std::vector<std::vector<int>>> classes)
        : torus_(std::move(t)), classes_(std::move(classes)), inv_vol_(1.0 / torus_->volume()) {}

    void evaluate(const SectionPoint& y, const SectionPoint& yp, std::size_t count, std::vector<double>& values,
                  std::vector<double>* grads) const override {
        torus_->validate(y);
        torus_->validate(yp);
        const auto& radii = torus_->radii();
        const std::size_t n = radii.size();
        std::vector<double> w(n), e(n, 0.0);
        double len2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = std::remainder(y[i] - yp[i], 2.0 * kPi);
            len2 += radii[i] * w[i] * radii[i] * w[i];
        }
        double len = std::sqrt(len2);
        if (len > 0.0)
            for (std::size_t i = 0; i < n; ++i) e[i] = w[i] / len;  // d theta_i per unit length
        count = std::min(count, classes_.size());
        values.assign(count, 0.0);
        if (grads) grads->assign(count, 0.0);
        for (std::size_t j = 0; j < count; ++j) {
            double s = 0.0, g = 0.0;
            for (const auto& k : classes_[j]) {
                double ph = 0.0, dir = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    ph += k[i] * w[i];
                    dir += k[i] * e[i];
                }
                s += std::cos(ph);
                if (grads) g -= std::sin(ph) * dir;
            }
            values[j] = s * inv_vol_;
            if (grads) (*grads)[j] = g * inv_vol_;
        }
    }

private:
    std::shared_ptr<const FlatTorus> torus_;
    std::vector<std::vector<std::vector<int>>> classes_;
    double inv_vol_;
};

// pair_j(gamma) = sum_k c_jk cos(k gamma)
class ChebyshevEvaluator final : public PairEvaluator {
public:
    ChebyshevEvaluator(std::shared_ptr<const SeparationSection> s, std::vector<std::vector<double>> coeffs)
        : section_(std::move(s)), coeffs_(std::move(coeffs)) {}

    void evaluate(const SectionPoint& y, const SectionPoint& yp, std::size_t count, std::vector<double>& values,
                  std::vector<double>* grads) const override {
        double g = section_->separation(y, yp);
        count = std::min(count, coeffs_.size());
        values.assign(count, 0.0);
        if (grads) grads->assign(count, 0.0);
        for (std::size_t j = 0; j < count; ++j) {
            double s = 0.0, ds = 0.0;
            for (std::size_t k = 0; k < coeffs_[j].size(); ++k) {
                s += coeffs_[j][k] * std::cos(k * g);
                ds -= coeffs_[j][k] * k * std::sin(k * g);
            }
            values[j] = s;
            if (grads) (*grads)[j] = ds;
        }
    }

    std::optional<std::vector<double>> separation_coeffs(std::size_t j) const override {
        if (j >= coeffs_.size()) return std::nullopt;
        return coeffs_[j];
    }

private:
    std::shared_ptr<const SeparationSection> section_;
    std::vector<std::vector<double>> coeffs_;
};

std::vector<std::vector<int>> lattice_ball(const std::vector<double>& radii, double lam_max) {
    const std::size_t n = radii.size();
    std::vector<int> kmax(n);
    for (std::size_t i = 0; i < n; ++i) kmax[i] = static_cast<int>(std::floor(radii[i] * std::sqrt(lam_max))) + 1;
    std::vector<std::vector<int>> out;
    std::vector<int> k(n);
    for (std::size_t i = 0; i < n; ++i) k[i] = -kmax[i];
    while (true) {
        double lam = 0.0;
        for (std::size_t i = 0; i < n; ++i) lam += (k[i] / radii[i]) * (k[i] / radii[i]);
        if (lam <= lam_max) out.push_back(k);
        std::size_t i = 0;
        while (i < n && k[i] == kmax[i]) {
            k[i] = -kmax[i];
            ++i;
        }
        if (i == n) break;
        ++k[i];
    }
    return out;
}

}  // namespace

CrossSectionSpectrum::CrossSectionSpectrum(int d, std::vector<Mode> modes, V0Descriptor v0,
                                           std::shared_ptr<const CrossSection> section,
                                           std::shared_ptr<const PairEvaluator> evaluator, double mu_cutoff)
    : d_(d), modes_(std::move(modes)), v0_(std::move(v0)), section_(std::move(section)),
      evaluator_(std::move(evaluator)), mu_cutoff_(mu_cutoff) {
    if (d_ < 3) throw DomainError("cone dimension must be >= 3");
    if (modes_.empty()) throw SchemaError("spectrum has no modes");
    if (!section_) throw DomainError("spectrum needs a cross-section");
    for (std::size_t j = 0; j < modes_.size(); ++j) {
        if (!(modes_[j].mu > 0.0) || !std::isfinite(modes_[j].mu))
            throw PositivityViolation("mode with mu <= 0: H is not positive");
        if (modes_[j].multiplicity <= 0) throw SchemaError("multiplicity must be positive");
        if (j > 0 && !(modes_[j].mu > modes_[j - 1].mu)) throw DomainError("modes must be strictly increasing in mu");
    }
    // tail constants from the upper half of the table
    double count = 0.0;
    double half = 0.5 * modes_.back().mu;
    tail_density_ = 0.0;
    tail_grad_density_ = 0.0;
    for (const Mode& m : modes_) {
        count += static_cast<double>(m.multiplicity);
        if (m.mu < half && m.mu != modes_.back().mu) continue;
        tail_weyl_ = std::max(tail_weyl_, count / std::pow(m.mu, d_ - 1));
        tail_density_ = std::max(tail_density_, m.diag_bound / m.multiplicity);
        tail_grad_density_ = std::max(tail_grad_density_, m.grad_bound / (m.multiplicity * m.mu));
    }
    tail_weyl_ *= kTol.weyl_safety;
    if (!evaluator_) {
        tail_density_ = std::numeric_limits<double>::quiet_NaN();
        tail_grad_density_ = std::numeric_limits<double>::quiet_NaN();
    }
}

double CrossSectionSpectrum::mu0() const { return modes_.front().mu; }

double CrossSectionSpectrum::mu1() const {
    if (modes_.size() < 2) throw InsufficientSpectrum("mu1 needs a second distinct eigenvalue below the cutoff");
    return modes_[1].mu;
}

const PairEvaluator& CrossSectionSpectrum::evaluator() const {
    if (!evaluator_) throw NormsOnlyError("spectrum is norms-only: no eigenfunction data for kernel assembly");
    return *evaluator_;
}

double mu0(const CrossSectionSpectrum& s) { return s.mu0(); }
double mu1(const CrossSectionSpectrum& s) { return s.mu1(); }

CrossSectionSpectrum sphere_spectrum(int d, double radius, double c, double mu_cutoff) {
    if (d < 3) throw DomainError("sphere_spectrum: d must be >= 3");
    check_positivity(d, c);
    const int n = d - 1;
    auto sphere = std::make_shared<const RoundSphere>(n, radius);
    const double q = conic_shift(d);
    const double cut = default_cutoff(std::sqrt(c + q), mu_cutoff);
    const double vol = sphere->volume();
    std::vector<Mode> modes;
    std::vector<double> dims;
    for (long l = 0;; ++l) {
        double lam = l * (l + d - 2.0) / (radius * radius);
        double mu = std::sqrt(lam + c + q);
        if (mu > cut && !modes.empty()) break;
        double dim = binom(l + n, n) - binom(l + n - 2.0, n);
        Mode m;
        m.mu = mu;
        m.multiplicity = static_cast<long>(dim);
        m.diag_bound = dim / vol;
        m.grad_bound = dim / vol * std::sqrt(lam);
        modes.push_back(m);
        dims.push_back(dim);
    }
    auto ev = std::make_shared<const SphereEvaluator>(sphere, dims);
    attach_closures(modes, ev);
    return CrossSectionSpectrum(d, std::move(modes), constant_v0(c), sphere,
                                ev, cut);
}

CrossSectionSpectrum torus_spectrum(int d, const std::vector<double>& radii, double c, double mu_cutoff) {
    if (d < 3) throw DomainError("torus_spectrum: d must be >= 3");
    if (static_cast<int>(radii.size()) != d - 1) throw DomainError("torus_spectrum: need d - 1 radii");
    check_positivity(d, c);
    auto torus = std::make_shared<const FlatTorus>(radii);
    const double q = conic_shift(d);
    const double cut = default_cutoff(std::sqrt(c + q), mu_cutoff);
    const double lam_max = cut * cut - c - q;
    std::vector<std::pair<double, std::vector<int>>> pts;
    for (auto& k : lattice_ball(radii, std::max(lam_max, 0.0))) {
        double lam = 0.0;
        for (std::size_t i = 0; i < k.size(); ++i) lam += (k[i] / radii[i]) * (k[i] / radii[i]);
        pts.emplace_back(lam, std::move(k));
    }
    std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::vector<std::vector<int>>> classes;
    std::vector<double> class_lam;
    for (auto& p : pts) {
        if (classes.empty() || p.first - class_lam.back() > 1e-12 * std::max(1.0, p.first)) {
            classes.emplace_back();
            class_lam.push_back(p.first);
        }
        classes.back().push_back(std::move(p.second));
    }
    const double vol = torus->volume();
    std::vector<Mode> modes;
    for (std::size_t j = 0; j < classes.size(); ++j) {
        Mode m;
        m.mu = std::sqrt(class_lam[j] + c + q);
        m.multiplicity = static_cast<long>(classes[j].size());
        m.diag_bound = m.multiplicity / vol;
        m.grad_bound = m.multiplicity / vol * std::sqrt(class_lam[j]);
        modes.push_back(m);
    }
    auto ev = std::make_shared<const TorusEvaluator>(torus, std::move(classes));
    attach_closures(modes, ev);
    return CrossSectionSpectrum(d, std::move(modes), constant_v0(c), torus,
                                ev, cut);
}

CrossSectionSpectrum parse_spectrum(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("spectrum file: ") + e.what());
    }
    auto need = [&](const char* key) -> const json& {
        if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("spectrum file: missing \"") + key + "\"");
        return j.at(key);
    };
    const json& jd = need("d");
    const json& jm = need("modes");
    const json& jv = need("v0");
    if (!jd.is_number_integer()) throw SchemaError("spectrum file: \"d\" must be an integer");
    if (!jm.is_array()) throw SchemaError("spectrum file: \"modes\" must be an array");
    if (!jv.is_string()) throw SchemaError("spectrum file: \"v0\" must be a string");
    const int d = jd.get<int>();
    if (d < 3) throw SchemaError("spectrum file: d must be >= 3");
    if (jm.empty()) throw SchemaError("spectrum file: empty mode list");

    struct Raw {
        double mu;
        long mult;
        std::vector<double> coeffs;
        bool has_coeffs;
    };
    std::vector<Raw> raw;
    for (const json& m : jm) {
        if (!m.is_object() || !m.contains("mu") || !m.contains("multiplicity"))
            throw SchemaError("spectrum file: each mode needs mu and multiplicity");
        if (!m.at("mu").is_number() || !m.at("multiplicity").is_number_integer())
            throw SchemaError("spectrum file: mu must be a number, multiplicity an integer");
        Raw r{m.at("mu").get<double>(), m.at("multiplicity").get<long>(), {}, m.contains("addition_coeffs")};
        if (!(r.mu > 0.0)) throw PositivityViolation("spectrum file: mode with mu <= 0");
        if (r.mult <= 0) throw SchemaError("spectrum file: multiplicity must be positive");
        if (r.has_coeffs) {
            const json& c = m.at("addition_coeffs");
            if (!c.is_array()) throw SchemaError("spectrum file: addition_coeffs must be an array");
            for (const json& x : c) {
                if (!x.is_number()) throw SchemaError("spectrum file: addition_coeffs must be numbers");
                r.coeffs.push_back(x.get<double>());
            }
        }
        raw.push_back(std::move(r));
    }
    std::size_t with = std::count_if(raw.begin(), raw.end(), [](const Raw& r) { return r.has_coeffs; });
    if (with != 0 && with != raw.size())
        throw SchemaError("spectrum file: addition_coeffs must be given for all modes or none");
    std::stable_sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) { return a.mu < b.mu; });
    // merge equal mu
    std::vector<Raw> merged;
    for (auto& r : raw) {
        if (!merged.empty() && merged.back().mu == r.mu) {
            Raw& m = merged.back();
            m.mult += r.mult;
            if (m.coeffs.size() < r.coeffs.size()) m.coeffs.resize(r.coeffs.size(), 0.0);
            for (std::size_t k = 0; k < r.coeffs.size(); ++k) m.coeffs[k] += r.coeffs[k];
        } else {
            merged.push_back(std::move(r));
        }
    }

    double volume = kNaN;
    if (j.contains("volume")) {
        if (!j.at("volume").is_number()) throw SchemaError("spectrum file: volume must be a number");
        volume = j.at("volume").get<double>();
    }
    auto section = std::make_shared<const SeparationSection>(d - 1, volume);

    V0Descriptor v0;
    v0.text = jv.get<std::string>();
    v0.constant = false;
    v0.c = kNaN;
    const std::string prefix = "constant:";
    if (v0.text.rfind(prefix, 0) == 0) {
        try {
            std::size_t used = 0;
            std::string rest = v0.text.substr(prefix.size());
            v0.c = std::stod(rest, &used);
            v0.constant = used == rest.size();
        } catch (const std::exception&) {
            v0.constant = false;
        }
    }

    std::vector<Mode> modes;
    std::vector<std::vector<double>> coeffs;
    for (const Raw& r : merged) {
        Mode m;
        m.mu = r.mu;
        m.multiplicity = r.mult;
        if (with) {
            double a = 0.0, b = 0.0;
            for (std::size_t k = 0; k < r.coeffs.size(); ++k) {
                a += std::fabs(r.coeffs[k]);
                b += std::fabs(r.coeffs[k]) * k;
            }
            m.diag_bound = a;
            m.grad_bound = b;
        } else {
            m.diag_bound = kNaN;
            m.grad_bound = kNaN;
        }
        modes.push_back(m);
        coeffs.push_back(r.coeffs);
    }
    std::shared_ptr<const PairEvaluator> ev;
    if (with) {
        ev = std::make_shared<const ChebyshevEvaluator>(section, std::move(coeffs));
        attach_closures(modes, ev);
    }
    double cut = modes.back().mu;
    return CrossSectionSpectrum(d, std::move(modes), v0, section, ev, cut);
}

CrossSectionSpectrum load_spectrum(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open spectrum file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_spectrum(ss.str());
}

std::string spectrum_to_json(const CrossSectionSpectrum& s) {
    using nlohmann::json;
    json j;
    j["d"] = s.d();
    j["v0"] = s.v0().text;
    bool coeffs = !s.norms_only();
    std::vector<std::vector<double>> table;
    if (coeffs) {
        for (std::size_t k = 0; k < s.size() && coeffs; ++k) {
            auto c = s.evaluator().separation_coeffs(k);
            if (c) table.push_back(*c);
            else coeffs = false;
        }
    }
    try {
        j["volume"] = s.section().volume();
    } catch (const UnsupportedCrossSection&) {
    }
    json modes = json::array();
    for (std::size_t k = 0; k < s.size(); ++k) {
        json m;
        m["mu"] = s.modes()[k].mu;
        m["multiplicity"] = s.modes()[k].multiplicity;
        if (coeffs) m["addition_coeffs"] = table[k];
        modes.push_back(m);
    }
    j["modes"] = modes;
    return j.dump(1);
}

std::string spectrum_csv(const CrossSectionSpectrum& s) {
    std::vector<std::vector<std::string>> rows;
    double n = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const Mode& m = s.modes()[k];
        n += static_cast<double>(m.multiplicity);
        rows.push_back({std::to_string(k), fmt(m.mu), std::to_string(m.multiplicity), fmt(m.diag_bound),
                        fmt(m.grad_bound), fmt(n)});
    }
    return csv_table({"index", "mu", "multiplicity", "diag_bound", "grad_bound", "counting"}, rows);
}

void save_spectrum(const CrossSectionSpectrum& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write " + path);
    out << spectrum_to_json(s) << "\n";
}

double counting_function(const CrossSectionSpectrum& s, double mu) {
    double n = 0.0;
    for (const Mode& m : s.modes()) {
        if (m.mu > mu) break;
        n += static_cast<double>(m.multiplicity);
    }
    return n;
}

WeylFit weyl_fit(const CrossSectionSpectrum& s) {
    if (s.size() < 10) throw InsufficientSpectrum("weyl_fit needs at least 10 modes");
    WeylFit f;
    double n = 0.0;
    double half = 0.5 * s.modes().back().mu;
    for (const Mode& m : s.modes()) {
        n += static_cast<double>(m.multiplicity);
        double ratio = n / std::pow(m.mu, s.d() - 1);
        f.constant = std::max(f.constant, ratio);
        if (m.mu >= half) f.max_ratio = std::max(f.max_ratio, ratio);
    }
    return f;
}

}  // namespace conekit
