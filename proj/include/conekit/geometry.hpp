#pragma once

#include <memory>
#include <string>
#include <vector>

namespace conekit {

// Coordinates of a point on the cross-section. Interpretation belongs to the
// CrossSection: unit vector in R^{n+1} for spheres, angles for tori, a single
// separation coordinate for file-backed sections.
using SectionPoint = std::vector<double>;

struct ConePoint {
    double r = 1.0;
    SectionPoint y;
};

class CrossSection {
public:
    virtual ~CrossSection() = default;

    virtual std::string name() const = 0;
    // dimension of Y, i.e. d - 1
    virtual int dimension() const = 0;
    virtual double volume() const = 0;
    virtual double distance(const SectionPoint& a, const SectionPoint& b) const = 0;
    virtual SectionPoint reference_point() const = 0;
    // a point at intrinsic distance t from reference_point(), along a fixed geodesic
    virtual SectionPoint point_at(double t) const = 0;
    // throws DomainError when the coordinates do not describe a point of Y
    virtual void validate(const SectionPoint& y) const = 0;
};

// S^n of radius a
class RoundSphere final : public CrossSection {
public:
    RoundSphere(int n, double radius);

    std::string name() const override;
    int dimension() const override { return n_; }
    double volume() const override;
    double distance(const SectionPoint& a, const SectionPoint& b) const override;
    SectionPoint reference_point() const override;
    SectionPoint point_at(double t) const override;
    void validate(const SectionPoint& y) const override;

    double radius() const { return a_; }
    // angle between two points, in [0, pi]
    double angle(const SectionPoint& a, const SectionPoint& b) const;
    // unit vector from spherical angles (theta_1, ..., theta_n)
    SectionPoint from_angles(const std::vector<double>& angles) const;

private:
    int n_;
    double a_;
};

// product of circles of radii a_i, coordinates are angles
class FlatTorus final : public CrossSection {
public:
    explicit FlatTorus(std::vector<double> radii);

    std::string name() const override;
    int dimension() const override { return static_cast<int>(radii_.size()); }
    double volume() const override;
    double distance(const SectionPoint& a, const SectionPoint& b) const override;
    SectionPoint reference_point() const override;
    SectionPoint point_at(double t) const override;
    void validate(const SectionPoint& y) const override;

    const std::vector<double>& radii() const { return radii_; }

private:
    std::vector<double> radii_;
};

// Section known only through a scalar separation coordinate gamma in [0, pi].
// There is no intrinsic distance, so cone_distance is unavailable.
class SeparationSection final : public CrossSection {
public:
    SeparationSection(int n, double volume);

    std::string name() const override { return "separation"; }
    int dimension() const override { return n_; }
    double volume() const override;
    double distance(const SectionPoint& a, const SectionPoint& b) const override;
    SectionPoint reference_point() const override { return {0.0}; }
    SectionPoint point_at(double t) const override { return {t}; }
    void validate(const SectionPoint& y) const override;

    double separation(const SectionPoint& a, const SectionPoint& b) const;

private:
    int n_;
    double volume_;  // NaN when unknown
};

struct ConeGeometry {
    int d = 3;
    std::shared_ptr<const CrossSection> section;

    ConeGeometry(int d, std::shared_ptr<const CrossSection> section);
};

double cone_distance(const ConeGeometry& g, const ConePoint& z, const ConePoint& zp);

// the cutoff phi: x on [0, 1/2], 1 on [1, inf), C^2 monotone in between
double diag_phi(double x);

double diag_defining(const ConeGeometry& g, const ConePoint& z, const ConePoint& zp);

std::vector<double> log_radial_grid(double r_min, double r_max, int n);

}  // namespace conekit
