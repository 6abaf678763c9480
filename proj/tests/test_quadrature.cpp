#include <doctest.h>

#include <cmath>

#include "conekit/config.hpp"
#include "conekit/quadrature.hpp"

using namespace conekit;

TEST_CASE("smooth integrals") {
    QuadOptions o;
    o.rel_tol = 1e-13;
    auto r = integrate_gk<2>([](double x) { return VecN<2>{std::exp(x), std::cos(x)}; }, 0.0, 2.0, o);
    CHECK(r.converged);
    CHECK(r.value[0] == doctest::Approx(std::exp(2.0) - 1).epsilon(1e-14));
    CHECK(r.value[1] == doctest::Approx(std::sin(2.0)).epsilon(1e-14));
}

TEST_CASE("endpoint singularity converges adaptively") {
    QuadOptions o;
    o.rel_tol = 1e-10;
    auto r = integrate_gk<1>([](double x) { return VecN<1>{1.0 / std::sqrt(x)}; }, 0.0, 1.0, o);
    CHECK(r.converged);
    CHECK(r.value[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(r.error[0] >= std::fabs(r.value[0] - 2.0));
    CHECK(r.panels.size() > 5);
}

TEST_CASE("error estimates are honest and refinement is consistent") {
    auto f = [](double x) { return VecN<1>{std::exp(-x) * std::sin(7 * x)}; };
    const double exact = 7.0 / 50.0 * (1 - std::exp(-5.0) * (std::cos(35.0) + std::sin(35.0) / 7.0));
    QuadOptions o;
    o.rel_tol = 1e-8;
    auto a = integrate_gk<1>(f, 0.0, 5.0, o);
    o.initial_subdivisions = 2;
    auto b = integrate_gk<1>(f, 0.0, 5.0, o);
    CHECK(std::fabs(a.value[0] - exact) <= a.error[0] + 1e-16);
    CHECK(std::fabs(a.value[0] - b.value[0]) <= a.error[0] + b.error[0] + 1e-16);
}

TEST_CASE("non-convergence is reported with a panel map") {
    QuadOptions o;
    o.rel_tol = 1e-15;
    o.max_intervals = 3;
    auto r = integrate_gk<1>([](double x) { return VecN<1>{std::sin(1.0 / x)}; }, 1e-4, 1.0, o);
    CHECK_FALSE(r.converged);
    CHECK(panel_map(r.panels).find("panels") != std::string::npos);
}
