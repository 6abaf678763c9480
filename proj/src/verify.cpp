#include "conekit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "conekit/bessel.hpp"
#include "conekit/config.hpp"
#include "conekit/errors.hpp"
#include "conekit/geometry.hpp"
#include "conekit/io.hpp"
#include "conekit/lpcheck.hpp"
#include "conekit/parallel.hpp"
#include "conekit/resolvent.hpp"
#include "conekit/riesz.hpp"
#include "conekit/spectrum.hpp"

namespace conekit {

namespace {

using Checks = std::vector<CheckResult>;

CheckResult make(std::string id, bool pass, const std::string& detail) { return {std::move(id), pass, detail}; }

std::string kv(const char* k, double v) { return std::string(k) + "=" + fmt(v); }

double relerr(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// e^{-lambda R} / (4 pi R) and the Riesz kernel of the flat Laplacian on R^3
double yukawa(double R, double lambda) { return std::exp(-lambda * R) / (4.0 * kPi * R); }

void euclid(Checks& out, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto sphere = std::make_shared<RoundSphere>(2, 1.0);
    ConeGeometry g(3, sphere);

    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        double r = 0.1 + 3.0 * uni(rng), rp = 0.1 + 3.0 * uni(rng);
        SectionPoint a = sphere->from_angles({kPi * uni(rng), 2 * kPi * uni(rng)});
        SectionPoint b = sphere->from_angles({kPi * uni(rng), 2 * kPi * uni(rng)});
        double e2 = 0.0;
        for (int k = 0; k < 3; ++k) e2 += (r * a[k] - rp * b[k]) * (r * a[k] - rp * b[k]);
        worst = std::max(worst, std::fabs(cone_distance(g, {r, a}, {rp, b}) - std::sqrt(e2)));
    }
    out.push_back(make("euclid.distance", worst < 1e-12, kv("max_abs_err", worst)));

    auto s = std::make_shared<const CrossSectionSpectrum>(sphere_spectrum(3, 1.0, 0.0));
    const int n = 50;
    std::vector<double> err(n);
    std::vector<char> cert(n);
    std::vector<std::array<double, 4>> pts(n);
    for (auto& p : pts) {
        double rs = std::exp(std::log(0.05) + uni(rng) * std::log(40.0));
        double q = 4.0 + 16.0 * uni(rng);
        bool swap = uni(rng) < 0.5;
        p = {swap ? rs * q : rs, swap ? rs : rs * q, kPi * uni(rng), 0.5 + 1.5 * uni(rng)};
    }
    parallel_for(n, [&](std::size_t i) {
        auto [r, rp, gam, lam] = pts[i];
        ResolventRequest q;
        q.spectrum = s.get();
        q.z = {r, s->section().reference_point()};
        q.zp = {rp, s->section().point_at(gam)};
        q.lambda = lam;
        q.rel_tol = 1e-9;
        KernelValue v = resolvent_kernel(q);
        err[i] = relerr(v.value, yukawa(cone_distance(s->geometry(), q.z, q.zp), lam));
        cert[i] = v.certified;
    });
    double emax = *std::max_element(err.begin(), err.end());
    auto unc = std::count(cert.begin(), cert.end(), 0);
    out.push_back(make("euclid.yukawa", unc == 0 && emax <= 1e-6,
                       kv("points", n) + " " + kv("uncertified", static_cast<double>(unc)) + " " + kv("max_rel_err", emax)));

    const double rz[5][3] = {{0.2, 1.0, 1.0}, {1.0, 0.1, 2.0}, {0.05, 0.9, 0.3}, {3.0, 0.5, 2.8}, {0.3, 2.0, 0.0}};
    double rmax = 0.0;
    bool rc = true;
    for (auto& p : rz) {
        double r = p[0], rp = p[1], gam = p[2];
        auto v = riesz_kernel(*s, {r, s->section().reference_point()}, {rp, s->section().point_at(gam)}, 1e-8);
        double R2 = r * r + rp * rp - 2 * r * rp * std::cos(gam);
        double er = -(r - rp * std::cos(gam)) / (kPi * kPi * R2 * R2);
        double ea = -(rp * std::sin(gam)) / (kPi * kPi * R2 * R2);
        double e = std::hypot(v.radial - er, v.angular - ea) / std::hypot(er, ea);
        rmax = std::max(rmax, e);
        rc = rc && v.certified;
    }
    out.push_back(make("euclid.riesz", rc && rmax <= 1e-4, kv("points", 5) + " " + kv("max_rel_err", rmax)));

    auto a = riesz_kernel(*s, {0.3, s->section().reference_point()}, {2.0, s->section().point_at(1.1)}, 1e-12);
    auto b = riesz_kernel(*s, {0.3 * 7.5, s->section().reference_point()}, {2.0 * 7.5, s->section().point_at(1.1)}, 1e-12);
    double t3 = 7.5 * 7.5 * 7.5;
    double he = std::max(relerr(b.radial * t3, a.radial), relerr(b.angular * t3, a.angular));
    out.push_back(make("euclid.riesz_homogeneity", he < 1e-10, kv("max_rel_err", he)));
}

void thresholds(Checks& out) {
    PInterval a = threshold_interval_constant(4, -1.0);
    out.push_back(make("thresholds.d4_c-1", a.p_lo == 4.0 / 3.0 && a.p_hi == 2.0,
                       kv("p_lo", a.p_lo) + " " + kv("p_hi", a.p_hi)));
    PInterval b = threshold_interval_zeroV(3, 1.5);
    out.push_back(make("thresholds.d3_zeroV", b.p_lo == 1.0 && std::isinf(b.p_hi),
                       kv("p_lo", b.p_lo) + " " + kv("p_hi", b.p_hi)));
    PInterval c = threshold_interval(3, 0.1);
    out.push_back(make("thresholds.d3_mu0.1", c.p_lo == 3.0 / 2.6 && c.p_hi == 3.0 / 1.4,
                       kv("p_lo", c.p_lo) + " " + kv("p_hi", c.p_hi)));
    bool same = true;
    int n = 0;
    for (int d = 3; d <= 7; ++d)
        for (int j = 0; j < 10; ++j) {
            double mu0 = 0.05 + 0.6 * j;
            PInterval x = threshold_interval(d, mu0), y = riesz_model_intervals(d, mu0);
            same = same && x.p_lo == y.p_lo && x.p_hi == y.p_hi;
            ++n;
        }
    out.push_back(make("thresholds.model_intervals", same, kv("grid", n)));
}

void bessel(Checks& out, std::uint64_t seed) {
    std::vector<double> nu, r;
    for (int i = 0; i <= 40; ++i) nu.push_back(0.5 + 49.5 * i / 40.0);
    for (double x = -6.0; x <= 2.0 + 1e-12; x += 0.125) r.push_back(std::pow(10.0, x));
    BoundReport rep = check_paper_bounds(nu, r);
    for (const auto& row : rep.rows)
        out.push_back(make("bessel.bound." + row.bound_id, row.pass,
                           kv("C", row.c_fit) + " " + kv("max_violation_ratio", row.max_violation_ratio)));

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double wmax = 0.0;
    for (int i = 0; i < 1000; ++i) {
        double v = 50.0 * uni(rng);
        double x = std::pow(10.0, -3.0 + 5.0 * uni(rng));
        BesselIK b = bessel_ik(v, x);
        // x (I K' - I' K) = -1
        Scaled p1 = b.i * b.dk, p2 = b.di * b.k;
        double w = x * (p1.to_double() - p2.to_double());
        wmax = std::max(wmax, std::fabs(w + 1.0));
    }
    out.push_back(make("bessel.wronskian", wmax < 1e-10, kv("points", 1000) + " " + kv("max_residual", wmax)));

    double hmax = 0.0;
    for (double x : {0.01, 0.3, 1.0, 2.5, 7.0, 20.0, 60.0}) {
        double i12 = std::sqrt(2.0 / (kPi * x)) * std::sinh(x);
        double k12 = std::sqrt(kPi / (2.0 * x)) * std::exp(-x);
        // cosh x - sinh x / x = sum_k 2k x^{2k} / (2k+1)!, summed directly below 1
        double c = std::cosh(x) - std::sinh(x) / x;
        if (x < 1.0) {
            double t = 1.0, sum = 0.0;
            for (int k = 1; k < 20; ++k) {
                t *= x * x / ((2.0 * k) * (2.0 * k + 1.0));
                sum += 2.0 * k * t;
            }
            c = sum;
        }
        double i32 = std::sqrt(2.0 / (kPi * x)) * c;
        double k32 = k12 * (1.0 + 1.0 / x);
        hmax = std::max({hmax, relerr(bessel_i(0.5, x).to_double(), i12), relerr(bessel_k(0.5, x).to_double(), k12),
                         relerr(bessel_i(1.5, x).to_double(), i32), relerr(bessel_k(1.5, x).to_double(), k32)});
    }
    out.push_back(make("bessel.half_integer", hmax <= 1e-12, kv("max_rel_err", hmax)));

    double gmax = 0.0;
    for (double m : {0.5, 1.0, 2.25, 7.5, 20.0, 60.0}) gmax = std::max(gmax, gamma_duplication_residual(m));
    out.push_back(make("bessel.gamma_duplication", gmax < 1e-13, kv("max_residual", gmax)));
}

const double kSuiteCs[3] = {0.0, -0.24, 1.0};

void boundary(Checks& out) {
    for (double c : kSuiteCs) {
        auto s = sphere_spectrum(3, 1.0, c);
        for (Face f : {Face::zf, Face::lbz}) {
            BoundaryFit b = boundary_order_probe(s, f);
            bool ok = std::fabs(b.slope - b.expected) <= 0.05;
            out.push_back(make(std::string("boundary.") + to_string(f) + ".c" + fmt(c), ok,
                               kv("slope", b.slope) + " " + kv("expected", b.expected)));
        }
    }
}

void zf(Checks& out) {
    for (double c : kSuiteCs) {
        auto s = sphere_spectrum(3, 1.0, c);
        CompatibilityReport r =
            zf_compatibility_check(s, 0.1, s.section().reference_point(), s.section().point_at(0.7));
        bool ok = r.deviation_at_1e3 <= 1e-4 && std::fabs(r.rate - 2.0) <= 0.2;
        out.push_back(make("zf.compatibility.c" + fmt(c), ok,
                           kv("deviation_at_1e-3", r.deviation_at_1e3) + " " + kv("rate", r.rate) + " " +
                               kv("small_argument_rate", r.predicted_rate)));
    }
}

void offdiag(Checks& out) {
    const OffdiagGrid grid{{1.0, 2.0, 4.0, 8.0}, {1.0 / 64, 1.0 / 16, 0.125, 0.25}, {0.0, 1.0, 2.0, 3.0}};
    auto stable = [&](const std::string& id, const CrossSectionSpectrum& s, Region reg, const OffdiagOptions& o) {
        OffdiagReport a = offdiag_bound_check(s, reg, grid, o);
        OffdiagReport b = offdiag_bound_check(s, reg, refine(grid), o);
        double drift = std::fabs(b.c_fit / a.c_fit - 1.0);
        out.push_back(make(id, a.pass && b.pass && drift <= 0.1,
                           kv("C", a.c_fit) + " " + kv("C_refined", b.c_fit) + " " + kv("drift", drift)));
    };
    auto s = sphere_spectrum(3, 1.0, -0.24);
    stable("offdiag.T2.c-0.24", s, Region::T2, {});
    stable("offdiag.T3.c-0.24", s, Region::T3, {});
    auto z = sphere_spectrum(3, 1.0, 0.0);
    OffdiagOptions lead;
    lead.modes = ModeSelection::leading;
    lead.model = ModelBound::zero_v_refined;
    stable("offdiag.T2.c0.leading_refined", z, Region::T2, lead);
    OffdiagOptions rem;
    rem.modes = ModeSelection::remainder;
    stable("offdiag.T2.c0.remainder", z, Region::T2, rem);
}

void schur(Checks& out) {
    SchurResult a = schur_bounded(HomogeneousKernelSpec(3, 1.0, Triangle::lower), 2.0);
    out.push_back(make("schur.example", a.bounded && std::fabs(a.l1_norm - 2.0) < 1e-15, kv("norm", a.l1_norm)));
    bool dual = true;
    int n = 0;
    for (int d = 3; d <= 5; ++d)
        for (double al : {-0.5, 0.3, 1.0, 1.7, 2.9, 4.5})
            for (double p : {1.2, 1.5, 2.0, 3.0, 6.0}) {
                HomogeneousKernelSpec lo(d, al, Triangle::lower), up(d, d - al, Triangle::upper);
                SchurResult x = schur_bounded(lo, p), y = schur_bounded(up, p / (p - 1.0));
                dual = dual && x.bounded == y.bounded && (!x.bounded || std::fabs(x.l1_norm - y.l1_norm) <= 1e-12 * x.l1_norm);
                ++n;
            }
    out.push_back(make("schur.duality", dual, kv("cases", n)));

    const std::vector<int> ks{16, 24, 32};
    double worst = 0.0;
    bool st = true;
    for (auto [al, reg, p] : {std::tuple{1.0, Triangle::lower, 2.0}, std::tuple{0.5, Triangle::lower, 1.5},
                              std::tuple{2.0, Triangle::upper, 2.0}, std::tuple{2.5, Triangle::upper, 1.5}}) {
        HomogeneousKernelSpec sp(3, al, reg);
        double exact = schur_bounded(sp, p).l1_norm;
        NormProbeResult r = lp_norm_probe(ModelKernel(sp), p, ks);
        st = st && r.verdict == Verdict::stable;
        for (double v : r.norm_estimates) worst = std::max(worst, relerr(v, exact));
    }
    out.push_back(make("schur.probe_match", st && worst <= 0.1, kv("max_rel_dev", worst)));
    NormProbeResult g = lp_norm_probe(ModelKernel(HomogeneousKernelSpec(3, 1.6, Triangle::lower)), 2.0, {4, 8, 12});
    out.push_back(make("schur.probe_unbounded", g.verdict == Verdict::growing, kv("growth", g.growth_ratio)));
}

void probe(Checks& out) {
    auto s = std::make_shared<const CrossSectionSpectrum>(sphere_spectrum(3, 1.0, -0.24));
    const std::vector<int> ks{16, 24, 32};
    auto run = [&](Region reg, double p, Verdict want) {
        RieszRadialKernel k(s, reg);
        NormProbeResult r = lp_norm_probe(k, p, ks);
        out.push_back(make(std::string("probe.") + to_string(reg) + ".p" + fmt(p), r.verdict == want,
                           std::string("verdict=") + to_string(r.verdict) + " " + kv("growth", r.growth_ratio)));
    };
    for (double p : {1.5, 2.0}) run(Region::T2, p, Verdict::stable);
    for (double p : {2.3, 3.0}) run(Region::T2, p, Verdict::growing);
    for (double p : {1.5, 2.0}) run(Region::T3, p, Verdict::stable);
    for (double p : {1.05, 1.1}) run(Region::T3, p, Verdict::growing);
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> n{"euclid", "thresholds", "bessel", "boundary", "zf",
                                            "offdiag", "schur",      "probe",  "all"};
    return n;
}

std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed) {
    Checks out;
    const bool all = suite == "all";
    if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
        throw DomainError("unknown suite '" + suite + "'");
    if (all || suite == "euclid") euclid(out, seed);
    if (all || suite == "thresholds") thresholds(out);
    if (all || suite == "bessel") bessel(out, seed);
    if (all || suite == "boundary") boundary(out);
    if (all || suite == "zf") zf(out);
    if (all || suite == "offdiag") offdiag(out);
    if (all || suite == "schur") schur(out);
    if (all || suite == "probe") probe(out);
    return out;
}

std::string format_report(const std::vector<CheckResult>& results) {
    std::ostringstream os;
    for (const auto& r : results) os << (r.pass ? "PASS " : "FAIL ") << r.id << " " << r.detail << "\n";
    return os.str();
}

}  // namespace conekit
