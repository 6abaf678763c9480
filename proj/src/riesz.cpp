#include "conekit/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "conekit/config.hpp"
#include "conekit/errors.hpp"
#include "conekit/io.hpp"
#include "conekit/parallel.hpp"
#include "conekit/quadrature.hpp"
#include "conekit/resolvent.hpp"

namespace conekit {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

void check_d(int d) {
    if (d < 3) throw DomainError("threshold: d must be >= 3");
}

}  // namespace

const char* to_string(IntervalBasis b) {
    switch (b) {
        case IntervalBasis::general_v: return "general-V";
        case IntervalBasis::zero_v: return "zero-V";
        case IntervalBasis::constant_c: return "constant-c";
    }
    return "?";
}

PInterval threshold_interval(int d, double mu0) {
    check_d(d);
    if (!(mu0 > 0.0) || !std::isfinite(mu0)) throw DomainError("threshold_interval: mu0 must be > 0");
    PInterval p;
    p.basis = IntervalBasis::general_v;
    p.p_lo = d / std::min(1.0 + 0.5 * d + mu0, static_cast<double>(d));
    double den = std::max(0.5 * d - mu0, 0.0);
    p.p_hi = den > 0.0 ? d / den : kInf;
    return p;
}

PInterval threshold_interval_zeroV(int d, double mu1) {
    check_d(d);
    if (!(mu1 > 0.0) || !std::isfinite(mu1)) throw DomainError("threshold_interval_zeroV: mu1 must be > 0");
    PInterval p;
    p.basis = IntervalBasis::zero_v;
    p.p_lo = 1.0;
    double den = std::max(0.5 * d - mu1, 0.0);
    p.p_hi = den > 0.0 ? d / den : kInf;
    return p;
}

PInterval threshold_interval_constant(int d, double c) {
    check_d(d);
    // the endpoint c = -((d-2)/2)^2 is the limit of the formula and is allowed
    if (!(c >= -conic_shift(d))) throw PositivityViolation("threshold_interval_constant: need c >= -((d-2)/2)^2");
    if (c == 0.0) throw DomainError("threshold_interval_constant: c must be nonzero");
    PInterval p;
    p.basis = IntervalBasis::constant_c;
    double root = std::sqrt((d - 2.0) * (d - 2.0) + 4.0 * c);
    p.p_lo = 2.0 * d / std::min(d + 2.0 + root, 2.0 * d);
    double den = std::max(d - root, 0.0);
    p.p_hi = den > 0.0 ? 2.0 * d / den : kInf;
    return p;
}

double RieszKernelValue::magnitude() const { return std::hypot(radial, angular); }

RieszKernelValue riesz_kernel(const CrossSectionSpectrum& s, const ConePoint& z, const ConePoint& zp, double rel_tol) {
    RieszOptions o;
    o.rel_tol = rel_tol;
    return riesz_kernel(s, z, zp, o);
}

RieszKernelValue riesz_kernel(const CrossSectionSpectrum& s, const ConePoint& z, const ConePoint& zp,
                              const RieszOptions& opt) {
    if (!(opt.rel_tol > 0.0 && opt.rel_tol <= 0.1)) throw DomainError("riesz_kernel: rel_tol must lie in (0, 0.1]");
    for (double r : {z.r, zp.r})
        if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("radial coordinate must be positive and finite");
    s.section().validate(z.y);
    s.section().validate(zp.y);
    const double rs = std::min(z.r, zp.r), rb = std::max(z.r, zp.r);
    const bool certified_region = rs / rb <= 1.0 / kTol.certified_ratio;
    if (!certified_region && !opt.allow_uncertified)
        throw DomainError("riesz_kernel: (r, r') outside the certified region r>/r< >= 4");
    if (z.r == zp.r && z.y == zp.y) throw DomainError("riesz_kernel: diagonal point");

    PairTable table = make_pair_table(s, z.y, zp.y, opt.first_mode, opt.mode_count, opt.radial_sector, true);
    const double inner_rel = std::max(1e-14, 1e-3 * opt.rel_tol);
    const double lam1 = 1.0 / rb, lam2 = 1.0 / rs;
    const double lam_max = std::max(4.0 / rb * std::log(1.0 / opt.rel_tol) * kTol.lambda_max_safety, 2.0 * lam1);
    const double c2pi = 2.0 / kPi;

    bool inner_ok = true;
    double abs_inner = 0.0;
    auto integrand = [&](double lam) -> VecN<4> {
        SeriesResult v = evaluate_series(s, table, z.r, zp.r, lam, Gauge::riemannian, inner_rel, abs_inner, true);
        if (certified_region && !v.certified) inner_ok = false;
        return {c2pi * v.d_r, c2pi * v.angular, c2pi * v.tail_r, c2pi * v.tail_angular};
    };
    // scale of the answer, for absolute floors
    VecN<4> f1 = integrand(lam1);
    double scale = std::max(std::hypot(f1[0], f1[1]) * lam1, 1e-300);
    abs_inner = 1e-3 * opt.rel_tol * scale / lam1;

    QuadOptions qo;
    qo.rel_tol = opt.rel_tol / 3.0;
    qo.abs_tol = 1e-2 * opt.rel_tol * scale;
    qo.controlled = 2;
    qo.initial_subdivisions = opt.initial_subdivisions;
    qo.max_intervals = kTol.quad_max_intervals;

    RieszKernelValue out;
    out.lambda_splits = {lam1, lam2};
    VecN<4> total{};
    VecN<4> err{};
    std::vector<Panel> all_panels;
    bool converged = true;
    auto add = [&](const QuadResult<4>& q) {
        for (int m = 0; m < 4; ++m) {
            total[m] += q.value[m];
            err[m] += q.error[m];
        }
        out.evaluations += q.evaluations;
        converged = converged && q.converged;
        all_panels.insert(all_panels.end(), q.panels.begin(), q.panels.end());
    };

    // (0, lam1]: lam = lam1 e^{-t}
    const double t_max = std::log(1.0 / opt.rel_tol) + 12.0;
    add(integrate_gk<4>(
        [&](double t) {
            double lam = lam1 * std::exp(-t);
            VecN<4> f = integrand(lam);
            for (double& v : f) v *= lam;
            return f;
        },
        0.0, t_max, qo));
    // [lam1, min(lam2, lam_max)] in log lambda
    const double lam_mid = std::min(lam2, lam_max);
    add(integrate_gk<4>(
        [&](double u) {
            double lam = std::exp(u);
            VecN<4> f = integrand(lam);
            for (double& v : f) v *= lam;
            return f;
        },
        std::log(lam1), std::log(lam_mid), qo));
    if (lam_max > lam2) add(integrate_gk<4>(integrand, lam2, lam_max, qo));

    // the two truncated ends
    VecN<4> f0 = integrand(lam1 * std::exp(-t_max));
    double lo_end = 2.0 * std::hypot(f0[0], f0[1]) * lam1 * std::exp(-t_max);
    VecN<4> fm = integrand(lam_max);
    double hi_end = 2.0 * std::hypot(fm[0], fm[1]) / (rb - rs > 0.0 ? rb - rs : rb);

    out.radial = total[0];
    out.angular = total[1];
    out.quad_error_est = std::max(err[0] + total[2], err[1] + total[3]) + lo_end + hi_end;
    out.certified = certified_region && inner_ok && converged;
    if (!converged) {
        std::ostringstream os;
        os << "riesz_kernel: quadrature did not converge at r=" << z.r << " r'=" << zp.r << "; "
           << panel_map(all_panels);
        throw QuadratureError(os.str());
    }
    return out;
}

const char* to_string(Region r) { return r == Region::T2 ? "T2" : "T3"; }

OffdiagGrid refine(const OffdiagGrid& g) {
    auto dbl = [](const std::vector<double>& v, bool geometric) {
        if (v.size() < 2) return v;
        std::vector<double> out;
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            out.push_back(v[i]);
            out.push_back(geometric ? std::sqrt(v[i] * v[i + 1]) : 0.5 * (v[i] + v[i + 1]));
        }
        out.push_back(v.back());
        return out;
    };
    return {dbl(g.anchor, true), dbl(g.ratio, true), dbl(g.gamma, false)};
}

double offdiag_model(const CrossSectionSpectrum& s, Region region, const OffdiagOptions& opt, double r, double rp) {
    const int d = s.d();
    const double mu0 = s.mu0();
    if (region == Region::T2) {
        if (opt.model == ModelBound::zero_v_refined) return r * std::pow(rp, -1.0 - d);
        if (opt.modes == ModeSelection::remainder) return std::pow(r / rp, s.mu1() - 0.5 * d) * std::pow(rp, -d);
        return std::pow(r / rp, mu0 - 0.5 * d) * std::pow(rp, -d);
    }
    if (opt.modes == ModeSelection::remainder) return std::pow(rp / r, s.mu1() - 0.5 * d + 1.0) * std::pow(r, -d);
    return std::pow(rp / r, mu0 - 0.5 * d + 1.0) * std::pow(r, -d);
}

namespace {

RieszOptions offdiag_riesz_options(const OffdiagOptions& opt) {
    RieszOptions ro;
    ro.rel_tol = opt.rel_tol;
    if (opt.modes == ModeSelection::leading) ro.mode_count = 1;
    if (opt.modes == ModeSelection::remainder) ro.first_mode = 1;
    return ro;
}

OffdiagRow offdiag_row(const CrossSectionSpectrum& s, Region region, const OffdiagOptions& opt, double r, double rp,
                       double gamma, bool& certified) {
    ConePoint z{r, s.section().reference_point()}, zp{rp, s.section().point_at(gamma)};
    RieszKernelValue v = riesz_kernel(s, z, zp, offdiag_riesz_options(opt));
    OffdiagRow row;
    row.region = region;
    row.r = r;
    row.r_prime = rp;
    row.gamma = gamma;
    row.d_r = v.radial;
    row.angular = v.angular;
    row.model = offdiag_model(s, region, opt, r, rp);
    row.ratio = v.magnitude() / row.model;
    certified = v.certified;
    return row;
}

}  // namespace

Region region_of(double r, double rp) {
    if (!(r > 0.0) || !(rp > 0.0)) throw DomainError("radii must be positive");
    if (r * kTol.certified_ratio <= rp) return Region::T2;
    if (r >= kTol.certified_ratio * rp) return Region::T3;
    throw DomainError("point lies in the near-diagonal region 1/4 < r/r' < 4");
}

OffdiagRow offdiag_point(const CrossSectionSpectrum& s, double r, double rp, double gamma, const OffdiagOptions& opt) {
    bool cert = false;
    return offdiag_row(s, region_of(r, rp), opt, r, rp, gamma, cert);
}

OffdiagReport offdiag_bound_check(const CrossSectionSpectrum& s, Region region, const OffdiagGrid& grid,
                                  const OffdiagOptions& opt) {
    if (grid.anchor.empty() || grid.ratio.empty() || grid.gamma.empty()) throw DomainError("offdiag grid is empty");
    for (double q : grid.ratio)
        if (!(q > 0.0 && q <= 1.0 / kTol.certified_ratio)) throw DomainError("offdiag grid ratio must lie in (0, 1/4]");

    struct Pt {
        double r, rp, g;
    };
    std::vector<Pt> pts;
    for (double a : grid.anchor)
        for (double q : grid.ratio)
            for (double g : grid.gamma) pts.push_back(region == Region::T2 ? Pt{q * a, a, g} : Pt{a, q * a, g});

    OffdiagReport rep;
    rep.rows.resize(pts.size());
    std::vector<char> ok(pts.size(), 0);
    parallel_for(pts.size(), [&](std::size_t i) {
        bool cert = false;
        rep.rows[i] = offdiag_row(s, region, opt, pts[i].r, pts[i].rp, pts[i].g, cert);
        ok[i] = cert;
    });
    rep.c_fit = 0.0;
    bool all_ok = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        rep.c_fit = std::max(rep.c_fit, rep.rows[i].ratio);
        all_ok = all_ok && ok[i];
    }
    rep.pass = all_ok && std::isfinite(rep.c_fit) && rep.c_fit > 0.0;
    std::ostringstream os;
    os << to_string(region) << " anchor[" << grid.anchor.front() << "," << grid.anchor.back() << "]x" << grid.anchor.size()
       << " ratio[" << grid.ratio.front() << "," << grid.ratio.back() << "]x" << grid.ratio.size() << " gamma["
       << grid.gamma.front() << "," << grid.gamma.back() << "]x" << grid.gamma.size();
    rep.grid = os.str();
    return rep;
}

std::string offdiag_csv(const OffdiagReport& rep) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : rep.rows)
        rows.push_back({to_string(r.region), fmt(r.r), fmt(r.r_prime), fmt(r.gamma), fmt(r.d_r), fmt(r.angular),
                        fmt(r.model), fmt(r.ratio)});
    return csv_table({"region", "r", "r_prime", "gamma", "d_r_component", "angular_component", "model_bound", "ratio"},
                     rows);
}

L2Bound l2_bound_constant(const CrossSectionSpectrum& s, double search_tol) {
    if (!(s.mu0() > 0.0)) throw PositivityViolation("l2_bound_constant: spectrum not positive");
    if (!s.v0().constant) throw UnsupportedCrossSection("l2_bound_constant: needs a constant V0");
    if (!(search_tol > 0.0)) throw DomainError("l2_bound_constant: search_tol must be positive");
    const double c = s.v0().c;
    const double q = conic_shift(s.d());
    L2Bound b;
    if (c >= 0.0) return b;
    // Delta_Y eigenvalues recovered from mu_j^2 = lambda_j + c + q
    auto ok = [&](double eps) {
        for (const Mode& m : s.modes()) {
            double lam = std::max(0.0, m.mu * m.mu - c - q);
            if (lam + c / (1.0 - eps) + q < 0.0) return false;
        }
        return true;
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > search_tol; ++it) {
        double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    b.epsilon = lo;
    b.bound = lo > 0.0 ? 1.0 / std::sqrt(lo) : kInf;
    return b;
}

}  // namespace conekit
