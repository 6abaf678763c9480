#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "conekit/config.hpp"
#include "conekit/errors.hpp"
#include "conekit/spectrum.hpp"

using namespace conekit;

TEST_CASE("sphere spectrum: mu_l = sqrt(l(l+1) + c + 1/4) on S^2") {
    auto s = sphere_spectrum(3, 1.0, -0.24);
    CHECK(s.mu0() == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(s.mu1() == doctest::Approx(std::sqrt(2.01)).epsilon(1e-14));
    for (std::size_t l = 0; l < 10; ++l) {
        CHECK(s.modes()[l].mu == doctest::Approx(std::sqrt(l * (l + 1.0) + 0.01)).epsilon(1e-14));
        CHECK(s.modes()[l].multiplicity == static_cast<long>(2 * l + 1));
    }
    CHECK(s.modes().back().mu <= s.mu_cutoff());
    CHECK(s.modes().back().mu >= 40.0 - 1.0);
    CHECK(s.ground_state_constant());
}

TEST_CASE("sphere spectrum in higher dimension") {
    // S^3: eigenvalues l(l+2), multiplicity (l+1)^2, shift 1
    auto s = sphere_spectrum(4, 1.0, 0.5, 12.0);
    for (std::size_t l = 0; l < 8; ++l) {
        CHECK(s.modes()[l].mu == doctest::Approx(std::sqrt(l * (l + 2.0) + 0.5 + 1.0)));
        CHECK(s.modes()[l].multiplicity == static_cast<long>((l + 1) * (l + 1)));
    }
    // a sphere of radius a scales the eigenvalues by a^{-2}
    auto t = sphere_spectrum(3, 2.0, 0.0, 20.0);
    CHECK(t.modes()[3].mu == doctest::Approx(std::sqrt(12.0 / 4.0 + 0.25)));
}

TEST_CASE("pair functions on S^2 follow the addition theorem") {
    // frozen: (2l+1)/(4 pi) P_l(cos gamma)
    const double table[][3] = {{0, 0.7, 0.079577471545947667884},
                               {1, 0.7, 0.18259262218731527164},
                               {3, 2.0, 0.24735539429398045019},
                               {10, 0.4, -0.63738733815218455029},
                               {25, 1.3, 0.38138045437952642548}};
    auto s = sphere_spectrum(3, 1.0, 0.0);
    const auto& sec = s.section();
    for (const auto& row : table) {
        std::vector<double> v;
        s.evaluator().evaluate(sec.reference_point(), sec.point_at(row[1]), static_cast<std::size_t>(row[0]) + 1, v,
                               nullptr);
        CHECK(v.back() == doctest::Approx(row[2]).epsilon(1e-13));
    }
    // diagonal value is multiplicity / volume
    std::vector<double> v;
    s.evaluator().evaluate(sec.reference_point(), sec.reference_point(), 6, v, nullptr);
    for (std::size_t l = 0; l < 6; ++l)
        CHECK(v[l] == doctest::Approx((2.0 * l + 1.0) / (4 * kPi)).epsilon(1e-14));
}

TEST_CASE("pair gradients match finite differences") {
    auto s = sphere_spectrum(3, 1.0, 0.0);
    const auto& sec = s.section();
    auto yp = sec.reference_point();
    const double h = 1e-6;
    for (double g : {0.3, 1.1, 2.5}) {
        std::vector<double> v, gr, vp, vm;
        s.evaluator().evaluate(sec.point_at(g), yp, 8, v, &gr);
        s.evaluator().evaluate(sec.point_at(g + h), yp, 8, vp, nullptr);
        s.evaluator().evaluate(sec.point_at(g - h), yp, 8, vm, nullptr);
        for (std::size_t l = 0; l < 8; ++l) CHECK(gr[l] == doctest::Approx((vp[l] - vm[l]) / (2 * h)).epsilon(1e-6));
    }
}

TEST_CASE("torus spectrum groups lattice classes") {
    // unit square torus: |n|^2 = 0, 1, 2, 4, 5 with multiplicities 1, 4, 4, 4, 8
    auto s = torus_spectrum(3, {1.0, 1.0}, 0.75, 3.0);
    const double lam[] = {0, 1, 2, 4, 5};
    const long mult[] = {1, 4, 4, 4, 8};
    for (int i = 0; i < 5; ++i) {
        CHECK(s.modes()[i].mu == doctest::Approx(std::sqrt(lam[i] + 0.75 + 0.25)));
        CHECK(s.modes()[i].multiplicity == mult[i]);
    }
    std::vector<double> v;
    const auto& sec = s.section();
    s.evaluator().evaluate(sec.reference_point(), sec.point_at(0.4), 2, v, nullptr);
    double vol = 4 * kPi * kPi;
    CHECK(v[0] == doctest::Approx(1.0 / vol));
    CHECK(v[1] == doctest::Approx((2.0 * std::cos(0.4) + 2.0) / vol));
}

TEST_CASE("positivity is enforced") {
    CHECK_THROWS_AS(sphere_spectrum(3, 1.0, -0.25), PositivityViolation);
    CHECK_THROWS_AS(sphere_spectrum(3, 1.0, -1.0), PositivityViolation);
    CHECK_NOTHROW(sphere_spectrum(3, 1.0, -0.2499));
}

TEST_CASE("spectrum file round trip") {
    auto s = sphere_spectrum(3, 1.0, -0.24, 15.0);
    auto t = parse_spectrum(spectrum_to_json(s));
    REQUIRE(t.size() == s.size());
    CHECK(t.d() == 3);
    CHECK(t.ground_state_constant());
    CHECK(t.v0().c == doctest::Approx(-0.24).epsilon(1e-15));
    CHECK(t.section().volume() == doctest::Approx(4 * kPi));
    for (std::size_t j = 0; j < s.size(); ++j) {
        CHECK(t.modes()[j].mu == s.modes()[j].mu);
        CHECK(t.modes()[j].multiplicity == s.modes()[j].multiplicity);
    }
    CHECK(spectrum_to_json(t) == spectrum_to_json(s));
    // the loaded evaluator reproduces the sphere pair functions
    std::vector<double> a, b;
    s.evaluator().evaluate(s.section().reference_point(), s.section().point_at(1.2), 10, a, nullptr);
    t.evaluator().evaluate(t.section().reference_point(), t.section().point_at(1.2), 10, b, nullptr);
    for (std::size_t j = 0; j < 10; ++j) CHECK(b[j] == doctest::Approx(a[j]).epsilon(1e-12));

    const char* path = "conekit_test_spectrum.json";
    save_spectrum(s, path);
    auto u = load_spectrum(path);
    CHECK(spectrum_to_json(u) == spectrum_to_json(s));
    std::remove(path);
}

TEST_CASE("spectrum file schema errors") {
    CHECK_THROWS_AS(parse_spectrum("not json"), SchemaError);
    CHECK_THROWS_AS(parse_spectrum(R"({"d":3,"v0":"constant:0"})"), SchemaError);
    CHECK_THROWS_AS(parse_spectrum(R"({"d":3,"v0":"constant:0","modes":[]})"), SchemaError);
    CHECK_THROWS_AS(parse_spectrum(R"({"d":3,"v0":"constant:0","modes":[{"mu":-1,"multiplicity":1}]})"),
                    PositivityViolation);
    CHECK_THROWS_AS(parse_spectrum(R"({"d":3,"v0":"constant:0","modes":[{"mu":0,"multiplicity":1}]})"),
                    PositivityViolation);
    CHECK_THROWS_AS(parse_spectrum(R"({"d":3,"v0":"constant:0","modes":[{"mu":1,"multiplicity":1,"addition_coeffs":[1]},{"mu":2,"multiplicity":1}]})"),
                    SchemaError);
}

TEST_CASE("norms-only spectra") {
    auto s = parse_spectrum(R"({"d":3,"v0":"table","modes":[{"mu":2,"multiplicity":3},{"mu":0.5,"multiplicity":1},{"mu":2,"multiplicity":2}]})");
    REQUIRE(s.size() == 2);
    CHECK(s.mu0() == 0.5);
    CHECK(s.modes()[1].multiplicity == 5);
    CHECK(s.norms_only());
    CHECK_FALSE(s.ground_state_constant());
    CHECK_THROWS_AS(s.evaluator(), NormsOnlyError);
    auto one = parse_spectrum(R"({"d":3,"v0":"constant:0","modes":[{"mu":0.5,"multiplicity":1}]})");
    CHECK_THROWS_AS(one.mu1(), InsufficientSpectrum);
}

TEST_CASE("Weyl fit and counting function") {
    auto s = sphere_spectrum(3, 1.0, 0.0, 60.0);
    // N(mu) = (l+1)^2 at mu = l + 1/2
    CHECK(counting_function(s, 10.5) == 121.0);
    CHECK(counting_function(s, 0.4) == 0.0);
    WeylFit w = weyl_fit(s);
    CHECK(w.constant >= w.max_ratio);
    // (l+1)^2 / (l+1/2)^2 -> 1 from above
    CHECK(w.max_ratio == doctest::Approx(1.0).epsilon(0.05));
    for (const Mode& m : s.modes()) CHECK(counting_function(s, m.mu) <= w.constant * m.mu * m.mu * (1 + 1e-12));
    auto small = sphere_spectrum(3, 1.0, 0.0, 5.0);
    CHECK_THROWS_AS(weyl_fit(small), InsufficientSpectrum);
}
