#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace conekit {

template <std::size_t N>
using VecN = std::array<double, N>;

struct QuadOptions {
    double abs_tol = 0.0;
    double rel_tol = 1e-10;
    int max_intervals = 4000;
    int initial_subdivisions = 1;
    // only the first `controlled` components enter the stopping rule; the
    // rest are carried along (e.g. integrated error bounds)
    std::size_t controlled = 0;  // 0 means all
};

struct Panel {
    double a = 0.0, b = 0.0, error = 0.0;
};

template <std::size_t N>
struct QuadResult {
    VecN<N> value{};
    VecN<N> error{};
    double error_norm = 0.0;
    int evaluations = 0;
    bool converged = false;
    std::vector<Panel> panels;
};

inline std::string panel_map(const std::vector<Panel>& panels, std::size_t worst = 8) {
    std::vector<Panel> p = panels;
    std::sort(p.begin(), p.end(), [](const Panel& x, const Panel& y) { return x.error > y.error; });
    std::ostringstream os;
    os << panels.size() << " panels; worst:";
    for (std::size_t i = 0; i < std::min(worst, p.size()); ++i)
        os << " [" << p[i].a << "," << p[i].b << "]:" << p[i].error;
    return os.str();
}

namespace detail {

template <std::size_t N>
struct GKInterval {
    double a, b;
    VecN<N> k, err;
    double err_norm;
};

// 21-point Kronrod rule with embedded 10-point Gauss rule on [a, b]
template <std::size_t N, class F>
GKInterval<N> gk21(F& f, double a, double b, std::size_t controlled) {
    using K = boost::math::quadrature::gauss_kronrod<double, 21>;
    using G = boost::math::quadrature::gauss<double, 10>;
    static const auto xk = K::abscissa();
    static const auto wk = K::weights();
    static const auto wg = G::weights();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    VecN<N> kr{}, ga{};
    VecN<N> f0 = f(c);
    for (std::size_t m = 0; m < N; ++m) kr[m] = wk[0] * f0[m];
    for (std::size_t i = 1; i < xk.size(); ++i) {
        VecN<N> fl = f(c - h * xk[i]);
        VecN<N> fr = f(c + h * xk[i]);
        for (std::size_t m = 0; m < N; ++m) {
            double s = fl[m] + fr[m];
            kr[m] += wk[i] * s;
            if (i % 2 == 1) ga[m] += wg[i / 2] * s;
        }
    }
    GKInterval<N> iv{a, b, {}, {}, 0.0};
    for (std::size_t m = 0; m < N; ++m) {
        iv.k[m] = kr[m] * h;
        iv.err[m] = std::fabs((kr[m] - ga[m]) * h);
        if (m < controlled) iv.err_norm = std::max(iv.err_norm, iv.err[m]);
    }
    return iv;
}

}  // namespace detail

// Adaptive bisection driven by the largest local |Kronrod - Gauss| estimate.
// f maps double -> VecN<N>.
template <std::size_t N, class F>
QuadResult<N> integrate_gk(F&& f, double a, double b, const QuadOptions& opt) {
    const std::size_t ctl = opt.controlled == 0 ? N : std::min(opt.controlled, N);
    std::vector<detail::GKInterval<N>> ivs;
    QuadResult<N> res;
    const int init = std::max(1, opt.initial_subdivisions);
    for (int i = 0; i < init; ++i) {
        double x0 = a + (b - a) * i / init;
        double x1 = i + 1 == init ? b : a + (b - a) * (i + 1) / init;
        ivs.push_back(detail::gk21<N>(f, x0, x1, ctl));
        res.evaluations += 21;
    }
    VecN<N> val{}, err{};
    double en = 0.0;
    while (true) {
        val.fill(0.0);
        err.fill(0.0);
        std::size_t worst = 0;
        for (std::size_t i = 0; i < ivs.size(); ++i) {
            for (std::size_t m = 0; m < N; ++m) {
                val[m] += ivs[i].k[m];
                err[m] += ivs[i].err[m];
            }
            if (ivs[i].err_norm > ivs[worst].err_norm) worst = i;
        }
        en = 0.0;
        double scale = 0.0;
        for (std::size_t m = 0; m < ctl; ++m) {
            en = std::max(en, err[m]);
            scale = std::max(scale, std::fabs(val[m]));
        }
        if (en <= std::max(opt.abs_tol, opt.rel_tol * scale)) {
            res.converged = true;
            break;
        }
        if (static_cast<int>(ivs.size()) >= opt.max_intervals) break;
        const double lo = ivs[worst].a, hi = ivs[worst].b;
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        ivs[worst] = detail::gk21<N>(f, lo, mid, ctl);
        ivs.push_back(detail::gk21<N>(f, mid, hi, ctl));
        res.evaluations += 42;
    }
    res.value = val;
    res.error = err;
    res.error_norm = en;
    for (const auto& iv : ivs) res.panels.push_back({iv.a, iv.b, iv.err_norm});
    std::sort(res.panels.begin(), res.panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    return res;
}

}  // namespace conekit
