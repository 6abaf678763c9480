#include "conekit/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "conekit/bessel.hpp"
#include "conekit/config.hpp"
#include "conekit/errors.hpp"

namespace conekit {

namespace {

constexpr double kEpsMach = 2.220446049250313e-16;

void check_request(const ResolventRequest& req) {
    if (!req.spectrum) throw DomainError("resolvent request without spectrum");
    if (!(req.rel_tol > 0.0 && req.rel_tol <= 0.1)) throw DomainError("rel_tol must lie in (0, 0.1]");
    if (!(req.lambda > 0.0) || !std::isfinite(req.lambda)) throw DomainError("lambda must be positive");
    if (!(req.abs_tol >= 0.0)) throw DomainError("abs_tol must be >= 0");
    for (double r : {req.z.r, req.zp.r})
        if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("radial coordinate must be positive and finite");
    const CrossSection& sec = req.spectrum->section();
    sec.validate(req.z.y);
    sec.validate(req.zp.y);
    if (req.z.r == req.zp.r && req.z.y == req.zp.y) throw DomainError("resolvent kernel is singular on the diagonal");
}

// sum over the unseen modes past the end of the table, bins of unit width in mu
struct WeylTail {
    double value = 0.0, d_r = 0.0, angular = 0.0;
};

WeylTail weyl_tail(const CrossSectionSpectrum& s, double x, double X, double rho, double radial_shift) {
    WeylTail t;
    const double M = s.mu_cutoff();
    const double C = s.tail_weyl_constant();
    const double n_table = counting_function(s, M);
    const double dens = s.tail_density(), gdens = s.tail_grad_density();
    const int dm1 = s.d() - 1;
    for (int k = 0; k < 1000000; ++k) {
        double lo = M + k, hi = lo + 1.0;
        double count = std::max(0.0, C * std::pow(hi, dm1) - n_table);
        double b = ik_product_bound(lo, x, X);
        double tv = dens * count * b;
        t.value += tv;
        t.d_r += tv * (1.0 + (2.0 * hi + 1.0 + radial_shift) / rho);
        t.angular += gdens * count * hi * b / rho;
        if (b == 0.0) break;
        if (lo > X + 10.0 && tv <= 1e-20 * t.value) break;
    }
    return t;
}

}  // namespace

const char* to_string(Gauge g) { return g == Gauge::riemannian ? "riemannian" : "b-half"; }

Gauge parse_gauge(const std::string& s) {
    if (s == "riemannian") return Gauge::riemannian;
    if (s == "b-half" || s == "bhalf" || s == "b_half") return Gauge::b_half;
    throw DomainError("unknown gauge: " + s);
}

double riemannian_from_bhalf(int d, double r, double rp) { return std::pow(r * rp, 1.0 - 0.5 * d); }

double ik_product_bound(double mu, double x, double X) {
    if (!(x > 0.0) || !(X >= x)) throw DomainError("ik_product_bound: need 0 < x <= X");
    if (mu <= 0.0) return HUGE_VAL;
    // I_mu(x)/x^mu increasing, I_mu K_mu <= 1/(2 mu), x^mu K_mu decreasing, and
    // for mu >= 1/2 also sqrt(x) e^x K_mu decreasing; pivot at m in [x, X]
    double lb;
    if (mu < 0.5) {
        lb = mu * std::log(x / X);
    } else {
        double m = std::clamp(mu - 0.5, x, X);
        lb = mu * std::log(x / m) + 0.5 * std::log(m / X) - (X - m);
    }
    return std::exp(lb) / (2.0 * mu);
}

PairTable make_pair_table(const CrossSectionSpectrum& s, const SectionPoint& y, const SectionPoint& yp,
                          std::size_t first, std::size_t count, bool radial_sector, bool need_gradient) {
    PairTable t;
    if (radial_sector) {
        if (!s.ground_state_constant())
            throw UnsupportedCrossSection("radial sector needs a constant ground state");
        if (first > 0 || count == 0) {
            t.complete = false;
            return t;
        }
        t.mu = {s.mu0()};
        t.w = {1.0};
        t.g = {0.0};
        t.w_bound = {1.0};
        t.g_bound = {0.0};
        t.complete = false;
        return t;
    }
    const PairEvaluator& ev = s.evaluator();
    std::size_t n = s.size();
    std::size_t last = count >= n ? n : std::min(n, first + count);
    if (first >= n) {
        t.complete = true;
        return t;
    }
    t.complete = last == n;
    std::vector<double> v, g;
    ev.evaluate(y, yp, last, v, need_gradient ? &g : nullptr);
    for (std::size_t j = first; j < last; ++j) {
        const Mode& m = s.modes()[j];
        t.mu.push_back(m.mu);
        t.w.push_back(v[j]);
        t.g.push_back(need_gradient ? g[j] : 0.0);
        t.w_bound.push_back(m.diag_bound);
        t.g_bound.push_back(m.grad_bound);
    }
    return t;
}

SeriesResult evaluate_series(const CrossSectionSpectrum& s, const PairTable& t, double r, double rp, double lambda,
                             Gauge gauge, double rel_tol, double abs_tol, bool gradient) {
    SeriesResult out;
    const int d = s.d();
    const double rho = lambda * r, rhop = lambda * rp;
    const bool left_small = rho <= rhop;
    const double x = std::min(rho, rhop), X = std::max(rho, rhop);
    const double sratio = x / X;
    const bool certified_region = sratio <= 1.0 / kTol.certified_ratio;
    const bool riem = gauge == Gauge::riemannian;
    // value = pref * S, derivatives = pref * lambda * (S-unit derivative)
    const double pref = riem ? std::pow(lambda, d - 2) * riemannian_from_bhalf(d, rho, rhop) : 1.0;
    const double shift = riem ? std::fabs(1.0 - 0.5 * d) : 0.0;
    const double lin = riem ? (1.0 - 0.5 * d) / rho : 0.0;
    const std::size_t n = t.mu.size();

    // per-mode bounds in S units, then suffix sums
    std::vector<double> bv(n + 1, 0.0), br(n + 1, 0.0), ba(n + 1, 0.0);
    if (certified_region) {
        WeylTail wt;
        if (t.complete) wt = weyl_tail(s, x, X, rho, shift);
        bv[n] = wt.value;
        br[n] = wt.d_r;
        ba[n] = wt.angular;
        for (std::size_t j = n; j-- > 0;) {
            double b = ik_product_bound(t.mu[j], x, X);
            double wb = t.w_bound[j] * b;
            bv[j] = bv[j + 1] + wb;
            br[j] = br[j + 1] + wb * (1.0 + (2.0 * t.mu[j] + 1.0 + shift) / rho);
            ba[j] = ba[j + 1] + t.g_bound[j] * b / rho;
        }
    }
    const double abs_v = abs_tol / std::fabs(pref);
    const double abs_g = abs_tol / (std::fabs(pref) * lambda);

    double S = 0.0, Sr = 0.0, Sa = 0.0;
    double A = 0.0, Ar = 0.0, Aa = 0.0;  // sums of |terms| for the rounding term
    double last[3][3] = {};
    int small_run = 0;
    std::size_t used = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double mu = t.mu[j];
        BesselIK bx = bessel_ik(mu, x);
        BesselIK bX = bessel_ik(mu, X);
        double ik = (bx.i * bX.k).to_double();
        double tv = t.w[j] * ik;
        S += tv;
        A += std::fabs(tv);
        double tr = 0.0, ta = 0.0;
        if (gradient) {
            double dleft = left_small ? (bx.di * bX.k).to_double() : (bX.dk * bx.i).to_double();
            tr = t.w[j] * (dleft + lin * ik);
            ta = t.g[j] * ik / rho;
            Sr += tr;
            Sa += ta;
            Ar += std::fabs(tr);
            Aa += std::fabs(ta);
        }
        used = j + 1;
        if (certified_region) {
            bool ok = bv[j + 1] <= 0.9 * std::max(rel_tol * std::fabs(S), abs_v);
            if (gradient) {
                ok = ok && br[j + 1] <= 0.9 * std::max(rel_tol * std::fabs(Sr), abs_g);
                ok = ok && ba[j + 1] <= 0.9 * std::max(rel_tol * std::fabs(Sa), abs_g);
            }
            if (ok) break;
        } else {
            for (int c = 0; c < 3; ++c) {
                last[c][2] = last[c][1];
                last[c][1] = last[c][0];
            }
            last[0][0] = tv;
            last[1][0] = tr;
            last[2][0] = ta;
            bool small = std::fabs(tv) <= std::max(rel_tol * std::fabs(S), abs_v);
            if (gradient) {
                small = small && std::fabs(tr) <= std::max(rel_tol * std::fabs(Sr), abs_g);
                small = small && std::fabs(ta) <= std::max(rel_tol * std::fabs(Sa), abs_g);
            }
            small_run = small ? small_run + 1 : 0;
            if (small_run >= kTol.cauchy_run) break;
        }
    }
    const double round = kEpsMach * (used + 5.0);
    double tv_tail, tr_tail, ta_tail;
    if (certified_region) {
        tv_tail = bv[used] + round * A;
        tr_tail = br[used] + round * Ar;
        ta_tail = ba[used] + round * Aa;
    } else {
        tv_tail = std::fabs(last[0][0]) + std::fabs(last[0][1]) + std::fabs(last[0][2]) + round * A;
        tr_tail = std::fabs(last[1][0]) + std::fabs(last[1][1]) + std::fabs(last[1][2]) + round * Ar;
        ta_tail = std::fabs(last[2][0]) + std::fabs(last[2][1]) + std::fabs(last[2][2]) + round * Aa;
    }
    out.value = pref * S;
    out.tail_value = std::fabs(pref) * tv_tail;
    if (gradient) {
        out.d_r = pref * lambda * Sr;
        out.angular = pref * lambda * Sa;
        out.tail_r = std::fabs(pref) * lambda * tr_tail;
        out.tail_angular = std::fabs(pref) * lambda * ta_tail;
    }
    out.modes_used = static_cast<int>(used);
    out.certified = certified_region;
    return out;
}

namespace {

SeriesResult run(const ResolventRequest& req, bool gradient) {
    check_request(req);
    const CrossSectionSpectrum& s = *req.spectrum;
    PairTable t = make_pair_table(s, req.z.y, req.zp.y, req.first_mode, req.mode_count, req.radial_sector, gradient);
    return evaluate_series(s, t, req.z.r, req.zp.r, req.lambda, req.gauge, req.rel_tol, req.abs_tol, gradient);
}

KernelValue component(double v, double tail, const SeriesResult& r, double rel_tol, double abs_tol) {
    KernelValue k;
    k.value = v;
    k.tail_bound = tail;
    k.modes_used = r.modes_used;
    k.certified = r.certified && tail <= std::max(rel_tol * std::fabs(v), abs_tol);
    return k;
}

}  // namespace

KernelValue resolvent_kernel(const ResolventRequest& req) {
    SeriesResult r = run(req, false);
    return component(r.value, r.tail_value, r, req.rel_tol, req.abs_tol);
}

KernelGradient resolvent_gradient(const ResolventRequest& req) {
    SeriesResult r = run(req, true);
    return {component(r.d_r, r.tail_r, r, req.rel_tol, req.abs_tol),
            component(r.angular, r.tail_angular, r, req.rel_tol, req.abs_tol)};
}

double indicial_kernel(const CrossSectionSpectrum& s, double sr, const SectionPoint& y, const SectionPoint& yp) {
    if (!(sr > 0.0) || !std::isfinite(sr)) throw DomainError("indicial_kernel: s must be positive");
    if (sr == 1.0) throw SingularPointError("indicial kernel is singular at s = 1");
    const double q = sr < 1.0 ? sr : 1.0 / sr;
    std::vector<double> v;
    s.evaluator().evaluate(y, yp, s.size(), v, nullptr);
    const double lq = std::log(q);
    double sum = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) sum += v[j] / s.modes()[j].mu * std::exp(s.modes()[j].mu * lq);
    return 0.5 * sum;
}

CompatibilityReport zf_compatibility_check(const CrossSectionSpectrum& s, double sr, const SectionPoint& y,
                                           const SectionPoint& yp) {
    if (!(sr > 0.0) || sr > 0.25) throw DomainError("zf_compatibility_check: need 0 < s <= 1/4");
    CompatibilityReport rep;
    rep.s = sr;
    rep.predicted_rate = std::min(2.0, 2.0 * s.mu0());
    const double ind = indicial_kernel(s, sr, y, yp);
    PairTable t = make_pair_table(s, y, yp, 0, s.size(), false, false);
    std::vector<double> lx, ly;
    for (int k = 0; k <= 16; ++k) {
        double rp = std::pow(10.0, -1.0 - 0.25 * k);  // 1e-1 .. 1e-5
        SeriesResult v = evaluate_series(s, t, sr * rp, rp, 1.0, Gauge::b_half, 1e-14, 0.0, false);
        double ratio = v.value / ind;
        rep.r_prime.push_back(rp);
        rep.ratio.push_back(ratio);
        double dev = std::fabs(ratio - 1.0);
        if (std::fabs(std::log10(rp) + 3.0) < 1e-9) rep.deviation_at_1e3 = dev;
        if (rp <= 1.0001e-2 && rp >= 0.9999e-4 && dev > 0.0) {
            lx.push_back(std::log(rp));
            ly.push_back(std::log(dev));
        }
    }
    // least-squares slope
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= lx.size();
    my /= ly.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    rep.rate = lx.size() >= 2 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

const char* to_string(Face f) {
    switch (f) {
        case Face::zf: return "zf";
        case Face::lbz: return "lbz";
        case Face::rbz: return "rbz";
        case Face::rbi: return "rbi";
    }
    return "?";
}

BoundaryFit boundary_order_probe(const CrossSectionSpectrum& s, Face face) {
    BoundaryFit fit;
    fit.face = face;
    const int d = s.d();
    const SectionPoint y = s.section().reference_point();
    const SectionPoint yp = s.section().point_at(0.5);
    PairTable t = make_pair_table(s, y, yp, 0, s.size(), false, false);
    const double r0 = 0.1, r1 = 1.0;
    switch (face) {
        case Face::zf: fit.expected = 2.0 - d; break;
        case Face::lbz:
        case Face::rbz: fit.expected = 1.0 - 0.5 * d + s.mu0(); break;
        case Face::rbi: fit.expected = -std::numeric_limits<double>::infinity(); break;
    }
    std::vector<double> lp, lv;
    const int steps = face == Face::rbi ? 13 : 29;
    for (int k = 0; k < steps; ++k) {
        double r, rp, p;
        if (face == Face::rbi) {
            p = std::pow(2.0, 0.5 * k);  // r' from 1 to 64
            r = r0;
            rp = r1 * p;
        } else {
            p = std::pow(10.0, -2.0 - 0.25 * k);  // eps from 1e-2 to 1e-9
            r = face == Face::zf || face == Face::lbz ? r0 * p : r1;
            rp = face == Face::zf ? r1 * p : (face == Face::lbz ? r1 : r0 * p);
        }
        SeriesResult v = evaluate_series(s, t, r, rp, 1.0, Gauge::riemannian, 1e-13, 0.0, false);
        fit.path.push_back(p);
        fit.magnitude.push_back(std::fabs(v.value));
        lp.push_back(std::log(p));
        lv.push_back(std::log(std::fabs(v.value)));
    }
    for (std::size_t i = 1; i < lp.size(); ++i) fit.local_slopes.push_back((lv[i] - lv[i - 1]) / (lp[i] - lp[i - 1]));
    if (face == Face::rbi) {
        fit.slope = fit.local_slopes.back();
    } else {
        // least squares over the last decade of the path
        std::size_t n = 5;
        double mx = 0, my = 0;
        for (std::size_t i = lp.size() - n; i < lp.size(); ++i) {
            mx += lp[i];
            my += lv[i];
        }
        mx /= n;
        my /= n;
        double sxy = 0, sxx = 0;
        for (std::size_t i = lp.size() - n; i < lp.size(); ++i) {
            sxy += (lp[i] - mx) * (lv[i] - my);
            sxx += (lp[i] - mx) * (lp[i] - mx);
        }
        fit.slope = sxy / sxx;
    }
    return fit;
}

}  // namespace conekit
