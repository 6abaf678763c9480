#include "conekit/geometry.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "conekit/config.hpp"
#include "conekit/errors.hpp"

namespace conekit {

namespace {

double norm2(const SectionPoint& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void require_size(const SectionPoint& y, std::size_t n, const char* what) {
    if (y.size() != n) {
        std::ostringstream os;
        os << what << ": expected " << n << " coordinates, got " << y.size();
        throw DomainError(os.str());
    }
}

}  // namespace

RoundSphere::RoundSphere(int n, double radius) : n_(n), a_(radius) {
    if (n < 1) throw DomainError("sphere dimension must be >= 1");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("sphere radius must be positive");
}

std::string RoundSphere::name() const {
    std::ostringstream os;
    os << "sphere(n=" << n_ << ",a=" << a_ << ")";
    return os.str();
}

double RoundSphere::volume() const {
    // |S^n| = 2 pi^{(n+1)/2} / Gamma((n+1)/2)
    double h = 0.5 * (n_ + 1);
    return 2.0 * std::pow(kPi, h) / std::tgamma(h) * std::pow(a_, n_);
}

double RoundSphere::angle(const SectionPoint& a, const SectionPoint& b) const {
    validate(a);
    validate(b);
    // 2 atan2(|a-b|, |a+b|) is accurate at both ends and symmetric in (a, b)
    double dm = 0.0, dp = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double m = a[i] - b[i];
        double p = a[i] + b[i];
        dm += m * m;
        dp += p * p;
    }
    return 2.0 * std::atan2(std::sqrt(dm), std::sqrt(dp));
}

double RoundSphere::distance(const SectionPoint& a, const SectionPoint& b) const {
    return a_ * angle(a, b);
}

SectionPoint RoundSphere::reference_point() const {
    SectionPoint p(n_ + 1, 0.0);
    p[0] = 1.0;
    return p;
}

SectionPoint RoundSphere::point_at(double t) const {
    double th = t / a_;
    SectionPoint p(n_ + 1, 0.0);
    p[0] = std::cos(th);
    p[1] = std::sin(th);
    return p;
}

SectionPoint RoundSphere::from_angles(const std::vector<double>& angles) const {
    if (static_cast<int>(angles.size()) != n_) throw DomainError("sphere: need n angles");
    SectionPoint p(n_ + 1, 0.0);
    double s = 1.0;
    for (int i = 0; i < n_; ++i) {
        p[i] = s * std::cos(angles[i]);
        s *= std::sin(angles[i]);
    }
    p[n_] = s;
    return p;
}

void RoundSphere::validate(const SectionPoint& y) const {
    require_size(y, n_ + 1, "sphere point");
    if (std::fabs(norm2(y) - 1.0) > 1e-9) throw DomainError("sphere point is not a unit vector");
}

FlatTorus::FlatTorus(std::vector<double> radii) : radii_(std::move(radii)) {
    if (radii_.empty()) throw DomainError("torus needs at least one radius");
    for (double a : radii_)
        if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("torus radii must be positive");
}

std::string FlatTorus::name() const {
    std::ostringstream os;
    os << "torus(";
    for (std::size_t i = 0; i < radii_.size(); ++i) os << (i ? "," : "") << radii_[i];
    os << ")";
    return os.str();
}

double FlatTorus::volume() const {
    double v = 1.0;
    for (double a : radii_) v *= 2.0 * kPi * a;
    return v;
}

double FlatTorus::distance(const SectionPoint& a, const SectionPoint& b) const {
    validate(a);
    validate(b);
    double s = 0.0;
    for (std::size_t i = 0; i < radii_.size(); ++i) {
        double w = std::fabs(std::remainder(a[i] - b[i], 2.0 * kPi));
        double l = radii_[i] * w;
        s += l * l;
    }
    return std::sqrt(s);
}

SectionPoint FlatTorus::reference_point() const { return SectionPoint(radii_.size(), 0.0); }

SectionPoint FlatTorus::point_at(double t) const {
    SectionPoint p(radii_.size(), 0.0);
    p[0] = t / radii_[0];
    return p;
}

void FlatTorus::validate(const SectionPoint& y) const {
    require_size(y, radii_.size(), "torus point");
    for (double t : y)
        if (!std::isfinite(t)) throw DomainError("torus angle not finite");
}

SeparationSection::SeparationSection(int n, double volume) : n_(n), volume_(volume) {
    if (n < 1) throw DomainError("section dimension must be >= 1");
}

double SeparationSection::volume() const {
    if (!(volume_ > 0.0)) throw UnsupportedCrossSection("separation section: volume not supplied");
    return volume_;
}

double SeparationSection::distance(const SectionPoint&, const SectionPoint&) const {
    throw UnsupportedCrossSection("separation section has no intrinsic distance");
}

double SeparationSection::separation(const SectionPoint& a, const SectionPoint& b) const {
    validate(a);
    validate(b);
    return std::fabs(a[0] - b[0]);
}

void SeparationSection::validate(const SectionPoint& y) const {
    require_size(y, 1, "separation point");
    if (!std::isfinite(y[0])) throw DomainError("separation coordinate not finite");
}

ConeGeometry::ConeGeometry(int dim, std::shared_ptr<const CrossSection> s) : d(dim), section(std::move(s)) {
    if (d < 3) throw DomainError("cone dimension must be >= 3");
    if (!section) throw DomainError("cone geometry needs a cross-section");
    if (section->dimension() != d - 1) throw DomainError("cross-section dimension must be d - 1");
}

double cone_distance(const ConeGeometry& g, const ConePoint& z, const ConePoint& zp) {
    if (!(z.r > 0.0) || !(zp.r > 0.0) || !std::isfinite(z.r) || !std::isfinite(zp.r))
        throw DomainError("radial coordinate must be positive and finite");
    double dy = g.section->distance(z.y, zp.y);
    if (dy >= kPi) return z.r + zp.r;
    // (r - r')^2 + 4 r r' sin^2(dy/2) is the law of cosines without cancellation
    double dr = z.r - zp.r;
    double sh = std::sin(0.5 * dy);
    return std::sqrt(dr * dr + 4.0 * z.r * zp.r * sh * sh);
}

double diag_phi(double x) {
    if (x <= 0.5) return x;
    if (x >= 1.0) return 1.0;
    double t = 2.0 * x - 1.0;
    double s = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));  // quintic smoothstep
    return x + s * (1.0 - x);
}

double diag_defining(const ConeGeometry& g, const ConePoint& z, const ConePoint& zp) {
    double dist = cone_distance(g, z, zp);
    double f = diag_phi(zp.r);
    return dist * dist / (f * f);
}

std::vector<double> log_radial_grid(double r_min, double r_max, int n) {
    if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max))
        throw DomainError("log_radial_grid: need 0 < r_min < r_max");
    if (n < 2) throw DomainError("log_radial_grid: need n >= 2");
    std::vector<double> out(n);
    double q = r_max / r_min;
    for (int i = 0; i < n; ++i) out[i] = r_min * std::pow(q, static_cast<double>(i) / (n - 1));
    out.front() = r_min;
    out.back() = r_max;
    return out;
}

}  // namespace conekit
