#include "conekit/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "conekit/config.hpp"
#include "conekit/errors.hpp"
#include "conekit/io.hpp"

namespace conekit {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIt = 100000;
constexpr double kBig = 0x1p500;
constexpr double kSmall = 0x1p-500;

// Taylor coefficients of 1/Gamma(z) = sum_{k>=1} c_k z^k
constexpr double kRGamma[] = {
    0.0,
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
    -1.1812593016974587695e-16,
    1.1866922547516003326e-18,
};

// gam1 = (1/G(1-m) - 1/G(1+m)) / 2m, gam2 = (1/G(1-m) + 1/G(1+m)) / 2, |m| <= 1/2
void temme_gammas(double m, double& gam1, double& gam2, double& gampl, double& gammi) {
    const int n = static_cast<int>(sizeof kRGamma / sizeof kRGamma[0]);
    gam1 = 0.0;
    gam2 = 0.0;
    // Horner over even and odd k separately, m^2 as the variable
    const double m2 = m * m;
    for (int k = (n - 1) / 2 * 2; k >= 2; k -= 2) gam1 = gam1 * m2 + kRGamma[k];
    gam1 = -gam1;
    for (int k = (n - 1) % 2 ? n - 1 : n - 2; k >= 1; k -= 2) gam2 = gam2 * m2 + kRGamma[k];
    gampl = gam2 - m * gam1;
    gammi = gam2 + m * gam1;
}

// (x/2)^nu / Gamma(nu + 1); log_path is set when it went through exp(log)
Scaled series_prefactor(double nu, double x, bool& log_path) {
    log_path = false;
    if (nu < 150.0) {
        double p = std::pow(0.5 * x, nu);
        if (p > 1e-290 && p < 1e290) {
            double q = p / std::tgamma(nu + 1.0);
            if (q > 1e-290 && q < 1e290) return Scaled::of(q);
        }
    }
    log_path = true;
    return scaled_exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
}

// sum_k (x^2/4)^k / (k! (nu+1)_k)
double series_sum(double nu, double x, int& terms) {
    double y = 0.25 * x * x;
    double t = 1.0, s = 1.0;
    int k = 1;
    for (; k < kMaxIt; ++k) {
        t *= y / (k * (nu + k));
        s += t;
        if (t < kEps * s * 0.5) break;
    }
    terms = k;
    return s;
}

bool use_series(double nu, double x) { return x <= std::max(10.0, 0.5 * nu); }

void check_args(double nu, double x) {
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw DomainError("Bessel order must be finite and >= 0");
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("Bessel argument must be finite and > 0");
}

BesselEval make_eval(Scaled v, double rel_err, BesselMethod m) {
    BesselEval e;
    e.method = m;
    double la = std::fabs(v.log_abs());
    if (v.mantissa != 0.0 && la > kTol.scaled_exponent_limit * 0.69314718055994530942) {
        e.value = v.mantissa;
        e.exponent = v.exponent;
    } else {
        e.value = v.to_double();
        e.exponent = 0;
    }
    e.abs_error_est = std::fabs(e.value) * rel_err;
    return e;
}

}  // namespace

const char* to_string(BesselMethod m) {
    switch (m) {
        case BesselMethod::power_series: return "power-series";
        case BesselMethod::uniform_asymptotic: return "uniform-asymptotic";
        case BesselMethod::continued_fraction: return "continued-fraction";
        case BesselMethod::recurrence: return "recurrence";
    }
    return "?";
}

double BesselEval::to_double() const { return Scaled{value, exponent}.to_double(); }

BesselIK bessel_ik(double nu, double x) {
    check_args(nu, x);
    BesselIK out;
    const int nl = static_cast<int>(nu + 0.5);
    const double xmu = nu - nl;
    const double xmu2 = xmu * xmu;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;

    // CF1 for I'_nu / I_nu
    double h = nu * xi;
    if (h < 1e-300) h = 1e-300;
    double b = xi2 * nu, d = 0.0, c = h;
    int it_cf1 = 0;
    for (int i = 1; i <= kMaxIt; ++i) {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        double del = c * d;
        h *= del;
        it_cf1 = i;
        if (std::fabs(del - 1.0) < kEps) break;
    }

    // unnormalized downward recurrence to order xmu; ril carries a 2^-eI scale
    double ril = 1.0, ripl = h;
    const double ril1 = ril, rip1 = ripl;
    long e_i = 0;
    for (int l = nl; l >= 1; --l) {
        double t = (xmu + l) * xi * ril + ripl;
        ripl = (xmu + (l - 1)) * xi * t + ril;
        ril = t;
        if (std::fabs(ril) > kBig) {
            ril *= kSmall;
            ripl *= kSmall;
            e_i += 500;
        }
    }
    const double f = ripl / ril;

    // K_xmu, K_{xmu+1}, scaled by 2^eK
    double rkmu, rk1;
    long e_k = 0;
    int it_k = 0;
    if (x < 2.0) {
        double x2 = 0.5 * x;
        double pimu = kPi * xmu;
        double fct = std::fabs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
        double dd = -std::log(x2);
        double e = xmu * dd;
        double fct2 = std::fabs(e) < kEps ? 1.0 : std::sinh(e) / e;
        double gam1, gam2, gampl, gammi;
        temme_gammas(xmu, gam1, gam2, gampl, gammi);
        double ff = fct * (gam1 * std::cosh(e) + gam2 * fct2 * dd);
        double sum = ff;
        double ee = std::exp(e);
        double p = 0.5 * ee / gampl;
        double q = 0.5 / (ee * gammi);
        double cc = 1.0;
        double d2 = x2 * x2;
        double sum1 = p;
        for (int i = 1; i <= kMaxIt; ++i) {
            ff = (i * ff + p + q) / (i * static_cast<double>(i) - xmu2);
            cc *= d2 / i;
            p /= (i - xmu);
            q /= (i + xmu);
            double del = cc * ff;
            sum += del;
            sum1 += cc * (p - i * ff);
            it_k = i;
            if (std::fabs(del) < std::fabs(sum) * kEps) break;
        }
        rkmu = sum;
        rk1 = sum1 * xi2;
    } else {
        // Steed's CF2
        double bb = 2.0 * (1.0 + x);
        double dd = 1.0 / bb;
        double hh = dd, delh = dd;
        double q1 = 0.0, q2 = 1.0;
        double a1 = 0.25 - xmu2;
        double q = a1, cc = a1;
        double a = -a1;
        double s = 1.0 + q * delh;
        for (int i = 2; i <= kMaxIt; ++i) {
            a -= 2 * (i - 1);
            cc = -a * cc / i;
            double qnew = (q1 - bb * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += cc * qnew;
            bb += 2.0;
            dd = 1.0 / (bb + a * dd);
            delh = (bb * dd - 1.0) * delh;
            hh += delh;
            double dels = q * delh;
            s += dels;
            it_k = i;
            if (std::fabs(dels / s) < kEps) break;
        }
        hh = a1 * hh;
        Scaled ex = scaled_exp(-x);
        rkmu = std::sqrt(kPi / (2.0 * x)) * ex.mantissa / s;
        e_k = ex.exponent;
        rk1 = rkmu * (xmu + x + 0.5 - hh) * xi;
    }
    const double rkmup = xmu * xi * rkmu - rk1;
    // Wronskian: I_xmu = 1 / (x (f K - K')), in scale 2^-eK
    const double rimu = xi / (f * rkmu - rkmup);
    const long e_k0 = e_k;

    for (int i = 1; i <= nl; ++i) {
        double t = (xmu + i) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = t;
        if (std::fabs(rk1) > kBig) {
            rk1 *= kSmall;
            rkmu *= kSmall;
            e_k += 500;
        }
    }
    Scaled kk{rkmu, e_k};
    kk.normalize();
    Scaled kp{nu * xi * rkmu - rk1, e_k};
    kp.normalize();
    out.k = kk;
    out.dk = kp;
    out.k_method = nl > 0 ? BesselMethod::recurrence : (x < 2.0 ? BesselMethod::power_series : BesselMethod::continued_fraction);
    out.rel_err_k = kEps * (16.0 + 2.0 * nl + 0.01 * it_k);

    if (use_series(nu, x)) {
        int t0 = 0, t1 = 0;
        bool log_path = false;
        Scaled pre = series_prefactor(nu, x, log_path);
        double s0 = series_sum(nu, x, t0);
        double s1 = series_sum(nu + 1.0, x, t1);
        out.i = pre * s0;
        // I' = I_{nu+1} + (nu/x) I_nu, with I_{nu+1} = pre * x / (2 (nu+1)) * s1
        out.di = pre * (0.5 * x / (nu + 1.0) * s1 + nu * xi * s0);
        out.i_method = BesselMethod::power_series;
        double lg = !log_path ? 4.0 : std::fabs(std::lgamma(nu + 1.0)) + std::fabs(nu * std::log(0.5 * x));
        out.rel_err_i = kEps * (8.0 + t0 + lg);
    } else {
        Scaled ii{rimu * ril1 / ril, -e_k0 - e_i};
        Scaled ip{rimu * rip1 / ril, -e_k0 - e_i};
        ii.normalize();
        ip.normalize();
        out.i = ii;
        out.di = ip;
        out.i_method = BesselMethod::continued_fraction;
        out.rel_err_i = kEps * (16.0 + 2.0 * nl + 0.01 * (it_k + it_cf1));
    }
    return out;
}

BesselEval bessel_i(double nu, double r) {
    BesselIK b = bessel_ik(nu, r);
    return make_eval(b.i, b.rel_err_i, b.i_method);
}

BesselEval bessel_k(double nu, double r) {
    BesselIK b = bessel_ik(nu, r);
    return make_eval(b.k, b.rel_err_k, b.k_method);
}

BesselEval bessel_i_dr(double nu, double r) {
    BesselIK b = bessel_ik(nu, r);
    return make_eval(b.di, 2.0 * b.rel_err_i, b.i_method);
}

BesselEval bessel_k_dr(double nu, double r) {
    BesselIK b = bessel_ik(nu, r);
    return make_eval(b.dk, 4.0 * b.rel_err_k, b.k_method);
}

double bessel_ik_product(double nu, double x, double X) {
    return (bessel_ik(nu, x).i * bessel_ik(nu, X).k).to_double();
}

bool BoundReport::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const BoundRow& r) { return r.pass; });
}

double gamma_duplication_residual(double m) {
    double lhs = std::tgamma(2.0 * m);
    double rhs = std::pow(2.0, 2.0 * m - 1.0) * std::tgamma(m) * std::tgamma(m + 0.5) / std::sqrt(kPi);
    return std::fabs(lhs - rhs) / std::fabs(lhs);
}

namespace {

struct Fit {
    double full = -HUGE_VAL;
    double inner = -HUGE_VAL;  // without the top fifth of the order grid
    std::size_t samples = 0;
    void add(double log_ratio, bool inner_nu) {
        if (!std::isfinite(log_ratio)) {
            full = HUGE_VAL;
            return;
        }
        full = std::max(full, log_ratio);
        if (inner_nu) inner = std::max(inner, log_ratio);
        ++samples;
    }
};

BoundRow make_row(const std::string& id, const Fit& f, const std::string& grid) {
    BoundRow row;
    row.bound_id = id;
    row.grid = grid;
    if (f.samples == 0) {
        row.c_fit = std::numeric_limits<double>::quiet_NaN();
        row.max_violation_ratio = std::numeric_limits<double>::quiet_NaN();
        row.pass = false;
        row.grid += " (empty)";
        return row;
    }
    row.c_fit = std::exp(f.full);
    row.max_violation_ratio = std::isfinite(f.inner) ? std::exp(f.full - f.inner) : 1.0;
    row.pass = std::isfinite(row.c_fit) && row.c_fit > 0.0 && row.max_violation_ratio <= 2.0;
    return row;
}

}  // namespace

BoundReport check_paper_bounds(const std::vector<double>& nu_grid, const std::vector<double>& r_grid) {
    for (double nu : nu_grid)
        if (nu < 0.5) throw DomainError("check_paper_bounds: orders must be >= 1/2");
    if (nu_grid.empty() || r_grid.empty()) throw DomainError("check_paper_bounds: empty grid");
    std::vector<double> nus = nu_grid;
    std::sort(nus.begin(), nus.end());
    const double nu_cut = nus.front() + 0.8 * (nus.back() - nus.front());
    const double ln2 = std::log(2.0);

    Fit is, il, ks, kl, ev1, ev2, ev3;
    for (double nu : nus) {
        bool inner = nu <= nu_cut;
        const double lg_half = std::lgamma(nu + 0.5);
        for (double r : r_grid) {
            BesselIK b = bessel_ik(nu, r);
            double li = b.i.log_abs();
            double lk = b.k.log_abs();
            double lr = std::log(r);
            if (r <= 1.0) {
                is.add(li - (-nu * ln2 + nu * lr - lg_half), inner);
                ks.add(lk - (-nu * ln2 - nu * lr + std::lgamma(2.0 * nu) - lg_half), inner);
            }
            if (r >= 1.0) {
                il.add(li - (-nu * ln2 + (nu - 1.0) * lr + r - lg_half), inner);
                kl.add(lk - (-0.5 * r - nu * lr + 2.0 * nu * ln2 + std::lgamma(nu)), inner);
            }
        }
        for (double r : r_grid) {
            Scaled i = bessel_ik(nu, r).i;
            for (double rp : r_grid) {
                if (rp < 4.0 * r) continue;
                double lp = i.log_abs() + bessel_ik(nu, rp).k.log_abs();
                double ls = std::log(r / rp);
                if (rp <= 1.0) ev1.add(lp - nu * ls, inner);
                else if (r <= 1.0) ev2.add(lp - (nu * (ln2 + ls) - 0.5 * rp), inner);
                else ev3.add(lp - (nu * (ln2 + ls) - 0.25 * rp), inner);
            }
        }
    }
    std::ostringstream g;
    g << "nu[" << nus.front() << "," << nus.back() << "]x" << nus.size() << " r[" << *std::min_element(r_grid.begin(), r_grid.end())
      << "," << *std::max_element(r_grid.begin(), r_grid.end()) << "]x" << r_grid.size();
    const std::string grid = g.str();
    BoundReport rep;
    rep.rows.push_back(make_row("I_small", is, grid + " r<=1"));
    rep.rows.push_back(make_row("I_large", il, grid + " r>=1"));
    rep.rows.push_back(make_row("K_small", ks, grid + " r<=1"));
    rep.rows.push_back(make_row("K_large", kl, grid + " r>=1"));
    rep.rows.push_back(make_row("IK_separated_inner", ev1, grid + " r'>=4r r'<=1"));
    rep.rows.push_back(make_row("IK_separated_mixed", ev2, grid + " r'>=4r r<=1<=r'"));
    rep.rows.push_back(make_row("IK_separated_outer", ev3, grid + " r'>=4r 1<=r"));
    return rep;
}

std::string bound_report_csv(const BoundReport& rep) {
    std::vector<std::vector<std::string>> rows;
    for (const BoundRow& r : rep.rows)
        rows.push_back({r.bound_id, fmt(r.c_fit), fmt(r.max_violation_ratio), "\"" + r.grid + "\"", r.pass ? "PASS" : "FAIL"});
    return csv_table({"bound_id", "C_fit", "max_violation_ratio", "grid", "status"}, rows);
}

}  // namespace conekit
