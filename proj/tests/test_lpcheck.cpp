#include <doctest.h>

#include <cmath>
#include <memory>

#include <json.hpp>

#include "conekit/errors.hpp"
#include "conekit/lpcheck.hpp"

using namespace conekit;

TEST_CASE("Schur test for homogeneous kernels") {
    SchurResult a = schur_bounded(HomogeneousKernelSpec(3, 1.0, Triangle::lower), 2.0);
    CHECK(a.bounded);
    CHECK(a.l1_norm == 2.0);
    HomogeneousKernelSpec spec(3, 1.0, Triangle::lower);
    CHECK(spec.beta == 2.0);
    // lower triangle is bounded for p < d / alpha
    CHECK(schur_bounded(HomogeneousKernelSpec(3, 1.6, Triangle::lower), 1.8).bounded);
    CHECK_FALSE(schur_bounded(HomogeneousKernelSpec(3, 1.6, Triangle::lower), 2.0).bounded);
    CHECK(std::isinf(schur_bounded(HomogeneousKernelSpec(3, 1.6, Triangle::lower), 2.0).l1_norm));
    // upper triangle for p > d / alpha
    SchurResult u = schur_bounded(HomogeneousKernelSpec(3, 2.0, Triangle::upper), 2.0);
    CHECK(u.bounded);
    CHECK(u.l1_norm == 2.0);
    CHECK_FALSE(schur_bounded(HomogeneousKernelSpec(3, 2.0, Triangle::upper), 1.4).bounded);
    CHECK_FALSE(schur_bounded(HomogeneousKernelSpec(3, -1.0, Triangle::upper), 3.0).bounded);
    CHECK_FALSE(schur_bounded(HomogeneousKernelSpec(3, 3.5, Triangle::lower), 1.5).bounded);
    CHECK_THROWS_AS(schur_bounded(spec, 1.0), DomainError);
    CHECK_THROWS_AS(schur_bounded(spec, 0.5), DomainError);
}

TEST_CASE("duality between the triangles") {
    for (int d = 3; d <= 6; ++d)
        for (double al = -1.0; al <= d + 1.0; al += 0.37)
            for (double p : {1.1, 1.5, 2.0, 2.7, 5.0, 20.0}) {
                SchurResult x = schur_bounded(HomogeneousKernelSpec(d, al, Triangle::lower), p);
                SchurResult y = schur_bounded(HomogeneousKernelSpec(d, d - al, Triangle::upper), p / (p - 1));
                CHECK(x.bounded == y.bounded);
                if (x.bounded) CHECK(x.l1_norm == doctest::Approx(y.l1_norm).epsilon(1e-12));
            }
}

TEST_CASE("model intervals are the threshold intervals") {
    for (int d = 3; d <= 9; ++d)
        for (double mu0 = 0.01; mu0 < 8.0; mu0 += 0.173) {
            PInterval a = riesz_model_intervals(d, mu0), b = threshold_interval(d, mu0);
            CHECK(a.p_lo == b.p_lo);
            CHECK(a.p_hi == b.p_hi);
        }
}

TEST_CASE("probe on a bounded model kernel") {
    ModelKernel k(HomogeneousKernelSpec(3, 1.0, Triangle::lower));
    NormProbeResult r = lp_norm_probe(k, 2.0, {4, 8, 12});
    CHECK(r.verdict == Verdict::stable);
    REQUIRE(r.norm_estimates.size() == 3);
    // truncated norms increase towards the exact norm 2
    CHECK(r.norm_estimates[0] < r.norm_estimates[1]);
    CHECK(r.norm_estimates[1] < r.norm_estimates[2]);
    CHECK(r.norm_estimates[2] < 2.0);
    CHECK(r.norm_estimates[2] == doctest::Approx(2.0).epsilon(0.1));
    for (char c : r.converged) CHECK(c);

    NormProbeResult w = lp_norm_probe(k, 2.0, {16, 24, 32});
    for (double v : w.norm_estimates) CHECK(v == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("probe on an unbounded model kernel grows") {
    ModelKernel k(HomogeneousKernelSpec(3, 1.6, Triangle::lower));
    NormProbeResult r = lp_norm_probe(k, 2.0, {4, 8, 12});
    CHECK(r.verdict == Verdict::growing);
    CHECK(r.growth_ratio > 4.0);
}

TEST_CASE("probe on the Riesz pieces brackets the upper threshold") {
    auto s = std::make_shared<const CrossSectionSpectrum>(sphere_spectrum(3, 1.0, -0.24));
    RieszRadialKernel t2(s, Region::T2);
    CHECK(lp_norm_probe(t2, 2.0, {16, 24, 32}).verdict == Verdict::stable);
    CHECK(lp_norm_probe(t2, 2.3, {16, 24, 32}).verdict == Verdict::growing);
    CHECK(t2.in_support(0.25));
    CHECK_FALSE(t2.in_support(0.3));
    CHECK(t2.profile(0.5) == 0.0);
}

TEST_CASE("probe JSON") {
    ModelKernel k(HomogeneousKernelSpec(3, 1.0, Triangle::lower));
    NormProbeResult r = lp_norm_probe(k, 2.0, {4, 8});
    auto j = nlohmann::json::parse(probe_json(r));
    CHECK(j["p"] == 2.0);
    CHECK(j["k_list"].size() == 2);
    CHECK(j["norms"].size() == 2);
    CHECK(j["verdict"] == "stable");
    CHECK(j["kernel_descriptor"].get<std::string>().find("alpha=1") != std::string::npos);
    CHECK(probe_json(r) == probe_json(lp_norm_probe(k, 2.0, {4, 8})));
}

TEST_CASE("probe preconditions") {
    ModelKernel k(HomogeneousKernelSpec(3, 1.0, Triangle::lower));
    CHECK_THROWS_AS(lp_norm_probe(k, 1.0, {4}), DomainError);
    CHECK_THROWS_AS(lp_norm_probe(k, 2.0, {}), DomainError);
    CHECK_THROWS_AS(lp_norm_probe(k, 2.0, {0}), DomainError);
    CHECK_THROWS_AS(lp_norm_probe(k, 2.0, {4}, 0), DomainError);
}
