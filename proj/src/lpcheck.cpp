#include "conekit/lpcheck.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "conekit/config.hpp"
#include "conekit/errors.hpp"
#include "conekit/parallel.hpp"

namespace conekit {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// sign(v) |v|^e, with v pre-scaled by the caller
double powsign(double v, double e) { return v == 0.0 ? 0.0 : std::copysign(std::pow(std::fabs(v), e), v); }

double lp_norm(const std::vector<double>& v, double p) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (double x : v) s += std::pow(std::fabs(x) / m, p);
    return m * std::pow(s, 1.0 / p);
}

}  // namespace

const char* to_string(Triangle t) { return t == Triangle::lower ? "lower" : "upper"; }

HomogeneousKernelSpec::HomogeneousKernelSpec(int dim, double a, Triangle reg)
    : alpha(a), beta(dim - a), region(reg), d(dim) {
    if (dim < 1) throw DomainError("HomogeneousKernelSpec: d must be positive");
    if (!std::isfinite(a)) throw DomainError("HomogeneousKernelSpec: alpha must be finite");
}

SchurResult schur_bounded(const HomogeneousKernelSpec& spec, double p) {
    if (!(p > 1.0) || std::isnan(p)) throw DomainError("schur_bounded: need p > 1");
    const double dp = p == kInf ? 0.0 : spec.d / p;
    SchurResult r;
    if (spec.region == Triangle::lower) {
        // r'^{-d} (r/r')^{d/p - alpha} on r <= r': integrable iff d/p > alpha
        double a = dp - spec.alpha;
        r.bounded = spec.beta > 0.0 && a > 0.0;
        r.l1_norm = r.bounded ? 1.0 / a : kInf;
    } else {
        double a = spec.alpha - dp;
        r.bounded = spec.alpha > 0.0 && a > 0.0;
        r.l1_norm = r.bounded ? 1.0 / a : kInf;
    }
    return r;
}

PInterval riesz_model_intervals(int d, double mu0) {
    if (d < 3) throw DomainError("riesz_model_intervals: d must be >= 3");
    if (!(mu0 > 0.0)) throw DomainError("riesz_model_intervals: mu0 must be > 0");
    // T2 behaves like the lower-triangle kernel with alpha = d/2 - mu0,
    // T3 like the upper-triangle kernel with alpha = 1 + d/2 + mu0
    const double a2 = 0.5 * d - mu0;
    const double a3 = 1.0 + 0.5 * d + mu0;
    PInterval p;
    p.basis = IntervalBasis::general_v;
    p.p_lo = d / std::min(a3, static_cast<double>(d));
    double den = std::max(a2, 0.0);
    p.p_hi = den > 0.0 ? d / den : kInf;
    return p;
}

bool ModelKernel::in_support(double s) const { return spec_.region == Triangle::lower ? s <= 1.0 : s > 1.0; }

double ModelKernel::profile(double s) const { return in_support(s) ? std::pow(s, -spec_.alpha) : 0.0; }

std::string ModelKernel::descriptor() const {
    std::ostringstream os;
    os << "model(d=" << spec_.d << ",alpha=" << spec_.alpha << ",beta=" << spec_.beta << "," << to_string(spec_.region)
       << ")";
    return os.str();
}

RieszRadialKernel::RieszRadialKernel(std::shared_ptr<const CrossSectionSpectrum> s, Region region, double rel_tol)
    : s_(std::move(s)), region_(region), rel_tol_(rel_tol) {
    if (!s_) throw DomainError("RieszRadialKernel needs a spectrum");
    if (!s_->ground_state_constant()) throw UnsupportedCrossSection("radial sector needs a constant ground state");
}

bool RieszRadialKernel::in_support(double s) const {
    return region_ == Region::T2 ? s <= 1.0 / kTol.certified_ratio : s >= kTol.certified_ratio;
}

double RieszRadialKernel::profile(double s) const {
    if (!in_support(s)) return 0.0;
    RieszOptions o;
    o.rel_tol = rel_tol_;
    o.radial_sector = true;
    const SectionPoint y = s_->section().reference_point();
    RieszKernelValue v = riesz_kernel(*s_, {s, y}, {1.0, y}, o);
    return std::fabs(v.radial);
}

std::string RieszRadialKernel::descriptor() const {
    std::ostringstream os;
    os << "riesz-radial(" << to_string(region_) << ",d=" << s_->d() << ",mu0=" << s_->mu0() << ","
       << s_->section().name() << ")";
    return os.str();
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::stable: return "stable";
        case Verdict::growing: return "growing";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

NormProbeResult lp_norm_probe(const RadialKernel& k, double p, const std::vector<int>& domain_exponents,
                              int grid_per_decade) {
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("lp_norm_probe: need 1 < p < inf");
    if (domain_exponents.empty()) throw DomainError("lp_norm_probe: no domain exponents");
    if (grid_per_decade < 1) throw DomainError("lp_norm_probe: grid_per_decade must be >= 1");
    for (int e : domain_exponents)
        if (e < 1) throw DomainError("lp_norm_probe: domain exponents must be >= 1");
    NormProbeResult res;
    res.p = p;
    res.domain_halfwidth_exponents = domain_exponents;
    res.kernel_descriptor = k.descriptor();
    res.grid_per_decade = grid_per_decade;

    const int d = k.dimension();
    const double h = std::log(10.0) / grid_per_decade;
    const int kmax = *std::max_element(domain_exponents.begin(), domain_exponents.end());
    const int nmax = static_cast<int>(std::floor(2.0 * kmax * std::log(2.0) / h)) + 1;

    // profile at every grid ratio e^{m h}, computed once
    std::vector<int> ms;
    for (int m = -(nmax - 1); m <= nmax - 1; ++m)
        if (k.in_support(std::exp(m * h))) ms.push_back(m);
    std::vector<double> vals(ms.size());
    parallel_for(ms.size(), [&](std::size_t i) { vals[i] = k.profile(std::exp(ms[i] * h)); });
    std::map<int, double> prof;
    for (std::size_t i = 0; i < ms.size(); ++i) prof[ms[i]] = vals[i];

    const double q = 1.0 / p, qq = 1.0 - 1.0 / p;
    const double pc = p / (p - 1.0);
    for (int e : domain_exponents) {
        const int n = static_cast<int>(std::floor(2.0 * e * std::log(2.0) / h)) + 1;
        const double lr0 = -e * std::log(2.0);
        // B_ij = w_i^{1/p} k_ij w_j^{1-1/p}, w = r^d h, k_ij = r_j^{-d} profile(r_i/r_j)
        std::vector<double> B(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                auto it = prof.find(i - j);
                if (it == prof.end()) continue;
                double lri = lr0 + i * h, lrj = lr0 + j * h;
                double logw = d * (q * lri + qq * lrj) - d * lrj;
                double v = h * std::exp(logw) * it->second;
                if (i == j && k.closed_diagonal()) v *= 0.5;
                B[static_cast<std::size_t>(i) * n + j] = v;
            }
        }
        // dual-map power iteration for ||B||_p
        std::vector<double> x(n, 1.0), y(n), z(n);
        double xn = lp_norm(x, p);
        for (double& v : x) v /= xn;
        double est = 0.0, prev = -1.0;
        int it = 0;
        bool conv = false;
        for (; it < kTol.probe_max_iterations; ++it) {
            for (int i = 0; i < n; ++i) {
                double s = 0.0;
                for (int j = 0; j < n; ++j) s += B[static_cast<std::size_t>(i) * n + j] * x[j];
                y[i] = s;
            }
            est = lp_norm(y, p);
            if (!(est > 0.0) || !std::isfinite(est)) break;
            if (prev > 0.0 && std::fabs(est - prev) <= kTol.probe_iteration_tol * est) {
                conv = true;
                ++it;
                break;
            }
            prev = est;
            double ym = 0.0;
            for (double v : y) ym = std::max(ym, std::fabs(v));
            for (int i = 0; i < n; ++i) y[i] = powsign(y[i] / ym, p - 1.0);
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int i = 0; i < n; ++i) s += B[static_cast<std::size_t>(i) * n + j] * y[i];
                z[j] = s;
            }
            double zm = 0.0;
            for (double v : z) zm = std::max(zm, std::fabs(v));
            if (!(zm > 0.0)) break;
            for (int j = 0; j < n; ++j) x[j] = powsign(z[j] / zm, pc - 1.0);
            xn = lp_norm(x, p);
            for (double& v : x) v /= xn;
        }
        res.norm_estimates.push_back(est);
        res.iterations.push_back(it);
        res.converged.push_back(conv);
    }

    const auto& v = res.norm_estimates;
    bool all_conv = std::all_of(res.converged.begin(), res.converged.end(), [](char c) { return c != 0; });
    res.growth_ratio = v.back() / v.front();
    bool monotone = true;
    for (std::size_t i = 1; i < v.size(); ++i) monotone = monotone && v[i] >= v[i - 1] * (1.0 - 1e-9);
    double vmax = *std::max_element(v.begin(), v.end()), vmin = *std::min_element(v.begin(), v.end());
    if (!all_conv || !(vmin > 0.0)) res.verdict = Verdict::inconclusive;
    else if (res.growth_ratio > kTol.probe_growth_ratio && monotone) res.verdict = Verdict::growing;
    else if (vmax / vmin <= kTol.probe_stable_ratio) res.verdict = Verdict::stable;
    else res.verdict = Verdict::inconclusive;
    return res;
}

namespace {

nlohmann::json to_json(const NormProbeResult& r) {
    nlohmann::json j;
    j["p"] = r.p;
    j["k_list"] = r.domain_halfwidth_exponents;
    j["norms"] = r.norm_estimates;
    j["verdict"] = to_string(r.verdict);
    j["kernel_descriptor"] = r.kernel_descriptor;
    j["iterations"] = r.iterations;
    j["grid_per_decade"] = r.grid_per_decade;
    j["growth_ratio"] = r.growth_ratio;
    j["growing_above"] = kTol.probe_growth_ratio;
    j["stable_within"] = kTol.probe_stable_ratio;
    return j;
}

}  // namespace

std::string probe_json(const NormProbeResult& r) { return to_json(r).dump(1); }

std::string probe_json(const std::vector<NormProbeResult>& rs) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& r : rs) a.push_back(to_json(r));
    return a.dump(1);
}

}  // namespace conekit
