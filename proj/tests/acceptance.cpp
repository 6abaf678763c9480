// Acceptance battery: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "conekit/bessel.hpp"
#include "conekit/config.hpp"
#include "conekit/lpcheck.hpp"
#include "conekit/parallel.hpp"
#include "conekit/resolvent.hpp"
#include "conekit/riesz.hpp"
#include "conekit/spectrum.hpp"

using namespace conekit;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double relerr(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// 1. flat-space oracles
void euclidean(Outcome& o) {
    auto t0 = Clock::now();
    auto s = sphere_spectrum(3, 1.0, 0.0);
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    struct Pt {
        double r, rp, g, lam;
    };
    std::vector<Pt> pts;
    for (int i = 0; i < 200; ++i) {
        double rs = std::exp(std::log(0.02) + u(rng) * std::log(100.0)), q = 4 + 16 * u(rng);
        bool swap = u(rng) < 0.5;
        pts.push_back({swap ? rs * q : rs, swap ? rs : rs * q, kPi * u(rng), 0.3 + 2 * u(rng)});
    }
    std::vector<KernelValue> vals(pts.size());
    std::vector<double> exact(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        ResolventRequest q;
        q.spectrum = &s;
        q.z = {pts[i].r, s.section().reference_point()};
        q.zp = {pts[i].rp, s.section().point_at(pts[i].g)};
        q.lambda = pts[i].lam;
        q.rel_tol = 1e-9;
        vals[i] = resolvent_kernel(q);
        double R = cone_distance(s.geometry(), q.z, q.zp);
        exact[i] = std::exp(-pts[i].lam * R) / (4 * kPi * R);
    });
    int used = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size() && used < 50; ++i) {
        if (!vals[i].certified) continue;
        ++used;
        worst = std::max(worst, relerr(vals[i].value, exact[i]));
    }
    o.require(used == 50, "50 certified points");
    o.require(worst <= 1e-6, "Yukawa rel err <= 1e-6");

    // (2/pi) int grad e^{-lam R}/(4 pi R) dlam at 40 digits
    const double riesz[][5] = {{0.2, 1.0, 1.0, 0.050797015674680723002, -0.12560659762804624144},
                               {1.0, 0.1, 2.0, -0.08830489306770431751, -0.007708744250882480264},
                               {0.05, 0.9, 0.3, 0.15544785772099871799, -0.051054630438216158931},
                               {3.0, 0.5, 2.8, -0.0024114296337664215549, -0.00011636048409373472415},
                               {0.3, 2.0, 0.0, 0.020623078290726189591, 0.0}};
    double rworst = 0.0;
    for (const auto& row : riesz) {
        RieszKernelValue v = riesz_kernel(s, {row[0], s.section().reference_point()},
                                          {row[1], s.section().point_at(row[2])}, 1e-8);
        rworst = std::max(rworst, std::hypot(v.radial - row[3], v.angular - row[4]) / std::hypot(row[3], row[4]));
    }
    o.require(rworst <= 1e-4, "Riesz rel err <= 1e-4");
    double t = seconds_since(t0);
    o.require(t < 30.0, "runtime < 30 s");
    o.detail << "yukawa points=" << used << " max_rel_err=" << worst << "; riesz points=5 max_rel_err=" << rworst
             << "; " << t << " s";
}

// 2. threshold tables
void thresholds(Outcome& o) {
    int n = 0;
    double worst = 0.0;
    bool model_same = true, zero_ok = true;
    for (int d = 3; d <= 7; ++d) {
        const long double q = 0.25L * (d - 2) * (d - 2);
        for (int j = 1; j <= 10; ++j) {
            // five negative and five positive potentials
            long double c = j <= 5 ? -q * j / 6.0L : 0.7L * (j - 5);
            PInterval a = threshold_interval_constant(d, static_cast<double>(c));
            long double root = std::sqrt((long double)(d - 2) * (d - 2) + 4 * c);
            long double lo = 2.0L * d / std::min(d + 2 + root, 2.0L * d);
            long double hiden = std::max((long double)d - root, 0.0L);
            worst = std::max(worst, static_cast<double>(std::fabs(a.p_lo - lo) / lo));
            if (hiden > 0) worst = std::max(worst, static_cast<double>(std::fabs(a.p_hi - 2.0L * d / hiden) / (2.0L * d / hiden)));
            else zero_ok = zero_ok && std::isinf(a.p_hi);

            double mu0 = std::sqrt(static_cast<double>(c + q));
            PInterval g = threshold_interval(d, mu0);
            long double glo = d / std::min(1.0L + d / 2.0L + mu0, (long double)d);
            long double ghiden = std::max(d / 2.0L - mu0, 0.0L);
            worst = std::max(worst, static_cast<double>(std::fabs(g.p_lo - glo) / glo));
            if (ghiden > 0) worst = std::max(worst, static_cast<double>(std::fabs(g.p_hi - d / ghiden) / (d / ghiden)));

            // zero potential on the unit sphere: mu1^2 = (d - 1) + ((d-2)/2)^2
            double mu1 = std::sqrt(d - 1.0 + static_cast<double>(q));
            PInterval z = threshold_interval_zeroV(d, mu1);
            long double zden = std::max(d / 2.0L - mu1, 0.0L);
            zero_ok = zero_ok && z.p_lo == 1.0 && (zden > 0 ? std::fabs(z.p_hi - d / zden) <= 1e-14 * z.p_hi : std::isinf(z.p_hi));

            PInterval m = riesz_model_intervals(d, mu0);
            model_same = model_same && m.p_lo == g.p_lo && m.p_hi == g.p_hi;
            ++n;
        }
    }
    o.require(n == 50, "50-point grid");
    o.require(worst <= 1e-14, "formulas reproduced");
    o.require(zero_ok, "zero-potential formula");
    o.require(model_same, "model intervals identical");
    PInterval s1 = threshold_interval_constant(4, -1.0);
    o.require(s1.p_lo == 4.0 / 3.0 && s1.p_hi == 2.0, "(d=4,c=-1) -> (4/3, 2)");
    PInterval s2 = threshold_interval_zeroV(3, 1.5);
    o.require(s2.p_lo == 1.0 && std::isinf(s2.p_hi), "(d=3, V=0) -> (1, inf)");
    o.detail << "grid=" << n << " max_rel_dev=" << worst << "; (4,-1)->(" << s1.p_lo << "," << s1.p_hi
             << "); (3,V=0)->(" << s2.p_lo << "," << s2.p_hi << ")";
}

// 3. Bessel bounds, Wronskian, half-integer orders
void bessel(Outcome& o) {
    auto t0 = Clock::now();
    std::vector<double> nu, r;
    for (int i = 0; i <= 40; ++i) nu.push_back(0.5 + 49.5 * i / 40.0);
    for (double x = -6.0; x <= 2.0 + 1e-12; x += 0.125) r.push_back(std::pow(10.0, x));
    BoundReport rep = check_paper_bounds(nu, r);
    for (const auto& row : rep.rows) {
        o.require(row.pass, "finite constant for " + row.bound_id);
        o.detail << row.bound_id << ":C=" << row.c_fit << " ";
    }
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double wmax = 0.0;
    for (int i = 0; i < 1000; ++i) {
        double v = 50 * u(rng), x = std::pow(10.0, -3 + 5 * u(rng));
        BesselIK b = bessel_ik(v, x);
        wmax = std::max(wmax, std::fabs(x * ((b.i * b.dk).to_double() - (b.di * b.k).to_double()) + 1.0));
    }
    o.require(wmax < 1e-10, "Wronskian < 1e-10");
    double hmax = 0.0;
    for (double x : {1e-3, 0.05, 0.6, 1.0, 2.5, 9.0, 40.0, 200.0}) {
        double k12 = std::sqrt(kPi / (2 * x)) * std::exp(-x);
        double i12 = std::sqrt(2 / (kPi * x)) * std::sinh(x);
        // cosh x - sinh x / x without cancellation
        double ch = 0.0;
        if (x < 1.0) {
            double t = 1.0;
            for (int k = 1; k < 20; ++k) {
                t *= x * x / ((2.0 * k) * (2.0 * k + 1.0));
                ch += 2.0 * k * t;
            }
        } else {
            ch = std::cosh(x) - std::sinh(x) / x;
        }
        double i32 = std::sqrt(2 / (kPi * x)) * ch;
        hmax = std::max({hmax, relerr(bessel_k(0.5, x).to_double(), k12), relerr(bessel_i(0.5, x).to_double(), i12),
                         relerr(bessel_k(1.5, x).to_double(), k12 * (1 + 1 / x)),
                         relerr(bessel_k(2.5, x).to_double(), k12 * (1 + 3 / x + 3 / (x * x))),
                         relerr(bessel_i(1.5, x).to_double(), i32)});
    }
    o.require(hmax <= 1e-12, "half-integer closed forms to 1e-12");
    double t = seconds_since(t0);
    o.require(t < 60.0, "runtime < 60 s");
    o.detail << "; wronskian_max=" << wmax << "; half_integer_max=" << hmax << "; " << t << " s";
}

// 4. boundary orders and the small-argument compatibility
void boundary(Outcome& o) {
    for (double c : {0.0, -0.24, 1.0}) {
        auto s = sphere_spectrum(3, 1.0, c);
        BoundaryFit zf = boundary_order_probe(s, Face::zf);
        BoundaryFit lbz = boundary_order_probe(s, Face::lbz);
        const double zf_expect = 2.0 - 3.0, lbz_expect = 1.0 - 1.5 + s.mu0();
        std::ostringstream tag;
        tag << "c=" << c;
        o.require(std::fabs(zf.slope - zf_expect) <= 0.05, "zf slope " + tag.str());
        o.require(std::fabs(lbz.slope - lbz_expect) <= 0.05, "lbz slope " + tag.str());
        CompatibilityReport cr =
            zf_compatibility_check(s, 0.1, s.section().reference_point(), s.section().point_at(0.7));
        o.require(cr.deviation_at_1e3 <= 1e-4, "compatibility deviation at r'=1e-3 " + tag.str());
        o.require(std::fabs(cr.rate - 2.0) <= 0.2, "compatibility rate 2 +- 0.2 " + tag.str());
        o.detail << tag.str() << ": zf=" << zf.slope << " lbz=" << lbz.slope << " (expect " << lbz_expect
                 << ") dev=" << cr.deviation_at_1e3 << " rate=" << cr.rate << "; ";
    }
}

// 5. off-diagonal Riesz bounds
void offdiag(Outcome& o) {
    const OffdiagGrid grid{{1.0, 2.0, 4.0, 8.0}, {1.0 / 64, 1.0 / 16, 0.125, 0.25}, {0.0, 1.0, 2.0, 3.0}};
    auto check = [&](const std::string& tag, const CrossSectionSpectrum& s, Region reg, const OffdiagOptions& opt) {
        OffdiagReport a = offdiag_bound_check(s, reg, grid, opt);
        OffdiagReport b = offdiag_bound_check(s, reg, refine(grid), opt);
        double drift = std::fabs(b.c_fit / a.c_fit - 1.0);
        o.require(a.pass && b.pass, tag + " PASS");
        o.require(drift <= 0.1, tag + " stable under refinement");
        o.detail << tag << ": C=" << a.c_fit << " refined=" << b.c_fit << "; ";
    };
    auto s = sphere_spectrum(3, 1.0, -0.24);
    check("T2 c=-0.24", s, Region::T2, {});
    check("T3 c=-0.24", s, Region::T3, {});
    auto z = sphere_spectrum(3, 1.0, 0.0);
    OffdiagOptions lead;
    lead.modes = ModeSelection::leading;
    lead.model = ModelBound::zero_v_refined;
    check("T2 c=0 leading r r'^{-1-d}", z, Region::T2, lead);
    OffdiagOptions rem;
    rem.modes = ModeSelection::remainder;
    check("T2 c=0 remainder (mu1)", z, Region::T2, rem);
}

// 6. Lp probe
void probe(Outcome& o) {
    auto t0 = Clock::now();
    auto s = std::make_shared<const CrossSectionSpectrum>(sphere_spectrum(3, 1.0, -0.24));
    PInterval iv = threshold_interval_constant(3, -0.24);
    o.detail << "interval=(" << iv.p_lo << "," << iv.p_hi << ") ";
    const std::vector<int> ks{16, 24, 32};
    auto run = [&](Region reg, double p, Verdict want) {
        NormProbeResult r = lp_norm_probe(RieszRadialKernel(s, reg), p, ks);
        std::ostringstream tag;
        tag << to_string(reg) << " p=" << p;
        o.require(r.verdict == want, tag.str() + " " + to_string(want));
        o.detail << tag.str() << ":" << to_string(r.verdict) << " ";
    };
    for (double p : {1.5, 2.0}) run(Region::T2, p, Verdict::stable);
    for (double p : {2.3, 3.0}) run(Region::T2, p, Verdict::growing);
    for (double p : {1.5, 2.0}) run(Region::T3, p, Verdict::stable);
    for (double p : {1.05, 1.1}) run(Region::T3, p, Verdict::growing);

    double worst = 0.0;
    struct Case {
        double alpha;
        Triangle tri;
        double p;
    };
    for (const Case& c : {Case{1.0, Triangle::lower, 2.0}, Case{0.5, Triangle::lower, 1.5},
                          Case{2.0, Triangle::upper, 2.0}, Case{2.5, Triangle::upper, 1.5}}) {
        HomogeneousKernelSpec sp(3, c.alpha, c.tri);
        SchurResult sch = schur_bounded(sp, c.p);
        NormProbeResult r = lp_norm_probe(ModelKernel(sp), c.p, ks);
        o.require(sch.bounded && r.verdict == Verdict::stable, "bounded model kernel stable");
        for (double v : r.norm_estimates) worst = std::max(worst, relerr(v, sch.l1_norm));
    }
    o.require(worst <= 0.1, "Schur norms within 10% of probe");
    double t = seconds_since(t0);
    o.require(t < 300.0, "runtime < 5 min");
    o.detail << "; schur_vs_probe_max_dev=" << worst << "; " << t << " s";
}

// 7. tail honesty
void tails(Outcome& o) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    struct Spec {
        int d;
        double c;
    };
    const Spec specs[] = {{3, -0.24}, {3, 0.0}, {3, 1.0}, {4, -0.5}, {5, 2.0}};
    std::vector<std::shared_ptr<const CrossSectionSpectrum>> base, dbl;
    for (const Spec& sp : specs) {
        base.push_back(std::make_shared<const CrossSectionSpectrum>(sphere_spectrum(sp.d, 1.0, sp.c)));
        dbl.push_back(std::make_shared<const CrossSectionSpectrum>(
            sphere_spectrum(sp.d, 1.0, sp.c, 2 * base.back()->mu_cutoff())));
    }
    struct Req {
        std::size_t spec;
        double r, rp, g, lam;
    };
    std::vector<Req> reqs;
    for (int i = 0; i < 3000; ++i) {
        double rs = std::exp(std::log(0.02) + u(rng) * std::log(100.0)), q = 4 + 16 * u(rng);
        bool swap = u(rng) < 0.5;
        reqs.push_back({static_cast<std::size_t>(u(rng) * 5) % 5, swap ? rs * q : rs, swap ? rs : rs * q,
                        kPi * u(rng), 0.2 + 2.5 * u(rng)});
    }
    std::vector<KernelValue> a(reqs.size()), b(reqs.size());
    parallel_for(reqs.size(), [&](std::size_t i) {
        const Req& q = reqs[i];
        ResolventRequest ra;
        ra.spectrum = base[q.spec].get();
        ra.z = {q.r, ra.spectrum->section().reference_point()};
        ra.zp = {q.rp, ra.spectrum->section().point_at(q.g)};
        ra.lambda = q.lam;
        ResolventRequest rb = ra;
        rb.spectrum = dbl[q.spec].get();
        a[i] = resolvent_kernel(ra);
        b[i] = resolvent_kernel(rb);
    });
    int used = 0, honest = 0, drawn = 0;
    for (std::size_t i = 0; i < reqs.size() && used < 1000; ++i) {
        ++drawn;
        if (!a[i].certified) continue;
        ++used;
        if (std::fabs(a[i].value - b[i].value) < a[i].tail_bound) ++honest;
    }
    o.require(used == 1000, "1000 certified requests");
    o.require(honest == used, "every change below the tail bound");
    o.detail << "certified=" << used << " (of " << drawn << " drawn) honest=" << honest;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"1 euclidean-oracle", euclidean}, {"2 threshold-tables", thresholds}, {"3 bessel-bounds", bessel},
        {"4 boundary-orders", boundary},   {"5 offdiag-bounds", offdiag},     {"6 lp-probe", probe},
        {"7 tail-honesty", tails}};
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        o.detail.precision(6);
        try {
            fn(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.str().c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
