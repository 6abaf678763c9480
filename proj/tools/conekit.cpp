// conekit: resolvent and Riesz-transform kernels on metric cones.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "conekit/errors.hpp"
#include "conekit/io.hpp"
#include "conekit/lpcheck.hpp"
#include "conekit/parallel.hpp"
#include "conekit/resolvent.hpp"
#include "conekit/riesz.hpp"
#include "conekit/spectrum.hpp"
#include "conekit/verify.hpp"

using namespace conekit;

namespace {

enum Exit { kOk = 0, kConfig = 1, kVerify = 2 };

struct Params {
    int d = 3;
    std::vector<double> c;
    std::vector<double> mu0, mu1;
    std::string spectrum_file;
    double radius = 1.0;
    std::vector<double> torus_radii;
    double mu_cutoff = 0.0;
    std::vector<double> r, rp, gamma, lambda{1.0}, p;
    std::vector<int> dims;
    double rel_tol = -1.0;
    std::string out;
    std::string format = "csv";
    std::uint64_t seed = 1;
    std::string gauge = "riemannian";
    std::string suite = "all";
    std::string kernel = "riesz-t2";
    double alpha = 1.0;
    std::string triangle = "lower";
    std::vector<int> k{16, 24, 32};
    int grid_per_decade = 8;
    std::string selection = "full";
    bool refined = false;
};

[[noreturn]] void config_error(const std::string& msg) { throw DomainError(msg); }

void emit(const Params& P, const std::string& text) {
    if (P.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream f(P.out, std::ios::binary);
    if (!f) config_error("cannot open output file '" + P.out + "'");
    f << text;
    if (!text.empty() && text.back() != '\n') f << "\n";
}

double single_c(const Params& P) {
    if (P.c.size() > 1) config_error("--c takes a single value for this command");
    return P.c.empty() ? 0.0 : P.c.front();
}

std::shared_ptr<const CrossSectionSpectrum> build_spectrum(const Params& P) {
    if (!P.spectrum_file.empty()) return std::make_shared<const CrossSectionSpectrum>(load_spectrum(P.spectrum_file));
    if (!P.torus_radii.empty())
        return std::make_shared<const CrossSectionSpectrum>(torus_spectrum(P.d, P.torus_radii, single_c(P), P.mu_cutoff));
    return std::make_shared<const CrossSectionSpectrum>(sphere_spectrum(P.d, P.radius, single_c(P), P.mu_cutoff));
}

void need(const std::vector<double>& v, const char* flag) {
    if (v.empty()) config_error(std::string("missing ") + flag);
}

int cmd_spectrum(const Params& P) {
    auto s = build_spectrum(P);
    if (P.format == "json") emit(P, spectrum_to_json(*s));
    else emit(P, spectrum_csv(*s));
    return kOk;
}

int cmd_thresholds(const Params& P) {
    std::vector<int> dims = P.dims.empty() ? std::vector<int>{P.d} : P.dims;
    std::vector<std::vector<std::string>> rows;
    auto add = [&](int d, const char* param, double v, const PInterval& iv) {
        rows.push_back({std::to_string(d), param, fmt(v), to_string(iv.basis), fmt(iv.p_lo), fmt(iv.p_hi)});
    };
    int sources = !P.c.empty() + !P.mu0.empty() + !P.mu1.empty();
    if (sources == 0) config_error("thresholds needs --c, --mu0 or --mu1");
    for (int d : dims) {
        for (double c : P.c) add(d, "c", c, threshold_interval_constant(d, c));
        for (double m : P.mu0) add(d, "mu0", m, threshold_interval(d, m));
        for (double m : P.mu1) add(d, "mu1", m, threshold_interval_zeroV(d, m));
    }
    if (P.format == "json") {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& r : rows)
            a.push_back({{"d", std::stoi(r[0])}, {"param", r[1]}, {"value", r[2]}, {"basis", r[3]}, {"p_lo", r[4]},
                         {"p_hi", r[5]}});
        emit(P, a.dump(1));
    } else {
        emit(P, csv_table({"d", "param", "value", "basis", "p_lo", "p_hi"}, rows));
    }
    return kOk;
}

int cmd_kernel(const Params& P) {
    need(P.r, "--r");
    need(P.rp, "--rp");
    need(P.gamma, "--gamma");
    auto s = build_spectrum(P);
    Gauge g = parse_gauge(P.gauge);
    struct Pt {
        double r, rp, gam, lam;
    };
    std::vector<Pt> pts;
    for (double r : P.r)
        for (double rp : P.rp)
            for (double gam : P.gamma)
                for (double lam : P.lambda) pts.push_back({r, rp, gam, lam});
    std::vector<KernelValue> vals(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        ResolventRequest q;
        q.spectrum = s.get();
        q.z = {pts[i].r, s->section().reference_point()};
        q.zp = {pts[i].rp, s->section().point_at(pts[i].gam)};
        q.lambda = pts[i].lam;
        q.gauge = g;
        if (P.rel_tol > 0) q.rel_tol = P.rel_tol;
        vals[i] = resolvent_kernel(q);
    });
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < pts.size(); ++i)
        rows.push_back({fmt(pts[i].r), fmt(pts[i].rp), fmt(pts[i].gam), fmt(pts[i].lam), fmt(vals[i].value),
                        fmt(vals[i].tail_bound), std::to_string(vals[i].modes_used), to_string(g)});
    if (P.format == "json") {
        nlohmann::json a = nlohmann::json::array();
        for (std::size_t i = 0; i < pts.size(); ++i)
            a.push_back({{"r", rows[i][0]}, {"r_prime", rows[i][1]}, {"gamma", rows[i][2]}, {"lambda", rows[i][3]},
                         {"value", rows[i][4]}, {"tail_bound", rows[i][5]}, {"modes_used", vals[i].modes_used},
                         {"gauge", rows[i][7]}, {"certified", vals[i].certified}});
        emit(P, a.dump(1));
    } else {
        emit(P, csv_table({"r", "r_prime", "gamma", "lambda", "value", "tail_bound", "modes_used", "gauge"}, rows));
    }
    return kOk;
}

int cmd_riesz(const Params& P) {
    need(P.r, "--r");
    need(P.rp, "--rp");
    need(P.gamma, "--gamma");
    auto s = build_spectrum(P);
    OffdiagOptions o;
    if (P.rel_tol > 0) o.rel_tol = P.rel_tol;
    if (P.selection == "leading") o.modes = ModeSelection::leading;
    else if (P.selection == "remainder") o.modes = ModeSelection::remainder;
    else if (P.selection != "full") config_error("--modes must be full, leading or remainder");
    if (P.refined) o.model = ModelBound::zero_v_refined;
    struct Pt {
        double r, rp, gam;
    };
    std::vector<Pt> pts;
    for (double r : P.r)
        for (double rp : P.rp)
            for (double gam : P.gamma) {
                region_of(r, rp);
                pts.push_back({r, rp, gam});
            }
    OffdiagReport rep;
    rep.rows.resize(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { rep.rows[i] = offdiag_point(*s, pts[i].r, pts[i].rp, pts[i].gam, o); });
    if (P.format == "json") {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& r : rep.rows)
            a.push_back({{"region", to_string(r.region)}, {"r", fmt(r.r)}, {"r_prime", fmt(r.r_prime)},
                         {"gamma", fmt(r.gamma)}, {"d_r_component", fmt(r.d_r)}, {"angular_component", fmt(r.angular)},
                         {"model_bound", fmt(r.model)}, {"ratio", fmt(r.ratio)}});
        emit(P, a.dump(1));
    } else {
        emit(P, offdiag_csv(rep));
    }
    return kOk;
}

int cmd_verify(const Params& P) {
    std::vector<CheckResult> res = run_suite(P.suite, P.seed);
    std::vector<std::vector<std::string>> rows;
    std::string failing;
    for (const auto& r : res) {
        rows.push_back({r.id, r.pass ? "PASS" : "FAIL", r.detail});
        if (!r.pass) failing += (failing.empty() ? "" : ",") + r.id;
    }
    if (P.format == "json") {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& r : res) a.push_back({{"check", r.id}, {"status", r.pass ? "PASS" : "FAIL"}, {"detail", r.detail}});
        emit(P, a.dump(1));
    } else if (P.format == "text") {
        emit(P, format_report(res) + (failing.empty() ? "PASS" : "FAIL") + "\n");
    } else {
        emit(P, csv_table({"check", "status", "detail"}, rows));
    }
    if (!failing.empty()) {
        std::cerr << "conekit: verification failed: " << failing << "\n";
        return kVerify;
    }
    return kOk;
}

int cmd_probe(const Params& P) {
    need(P.p, "--p");
    std::unique_ptr<RadialKernel> k;
    if (P.kernel == "model") {
        Triangle t = P.triangle == "upper" ? Triangle::upper : Triangle::lower;
        if (P.triangle != "upper" && P.triangle != "lower") config_error("--triangle must be lower or upper");
        k = std::make_unique<ModelKernel>(HomogeneousKernelSpec(P.d, P.alpha, t));
    } else if (P.kernel == "riesz-t2" || P.kernel == "riesz-t3") {
        auto s = build_spectrum(P);
        k = std::make_unique<RieszRadialKernel>(s, P.kernel == "riesz-t2" ? Region::T2 : Region::T3,
                                                P.rel_tol > 0 ? P.rel_tol : 1e-7);
    } else {
        config_error("--kernel must be model, riesz-t2 or riesz-t3");
    }
    std::vector<NormProbeResult> res;
    for (double p : P.p) res.push_back(lp_norm_probe(*k, p, P.k, P.grid_per_decade));
    if (P.format == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : res)
            for (std::size_t i = 0; i < r.norm_estimates.size(); ++i)
                rows.push_back({fmt(r.p), std::to_string(r.domain_halfwidth_exponents[i]), fmt(r.norm_estimates[i]),
                                to_string(r.verdict), r.kernel_descriptor});
        emit(P, csv_table({"p", "k", "norm", "verdict", "kernel"}, rows));
    } else {
        emit(P, probe_json(res));
    }
    return kOk;
}

void add_common(CLI::App* app, Params& P, bool spectrum) {
    app->add_option("--d", P.d, "cone dimension");
    app->add_option("--format", P.format, "csv or json")->check(CLI::IsMember({"csv", "json", "text"}));
    app->add_option("--out", P.out, "output file (default stdout)");
    app->add_option("--seed", P.seed, "seed for randomized grids");
    app->add_option("--rel-tol", P.rel_tol, "relative tolerance");
    if (!spectrum) return;
    app->add_option("--c", P.c, "constant potential V0 = c")->delimiter(',');
    app->add_option("--spectrum-file", P.spectrum_file, "spectrum JSON file");
    app->add_option("--radius", P.radius, "radius of the sphere cross-section");
    app->add_option("--torus-radii", P.torus_radii, "flat torus cross-section radii")->delimiter(',');
    app->add_option("--mu-cutoff", P.mu_cutoff, "largest tabulated mu");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conekit: resolvent and Riesz-transform kernels on metric cones"};
    app.require_subcommand(1);
    Params P;

    auto* spectrum = app.add_subcommand("spectrum", "tabulate a cross-section spectrum");
    add_common(spectrum, P, true);

    auto* thresholds = app.add_subcommand("thresholds", "Lp boundedness intervals");
    add_common(thresholds, P, true);
    thresholds->add_option("--mu0", P.mu0, "mu0 values")->delimiter(',');
    thresholds->add_option("--mu1", P.mu1, "mu1 values")->delimiter(',');
    thresholds->add_option("--dims", P.dims, "list of dimensions")->delimiter(',');

    auto* kernel = app.add_subcommand("kernel", "resolvent kernel sweep");
    add_common(kernel, P, true);
    kernel->add_option("--r", P.r, "r values")->delimiter(',');
    kernel->add_option("--rp", P.rp, "r' values")->delimiter(',');
    kernel->add_option("--gamma", P.gamma, "intrinsic distance on the cross-section")->delimiter(',');
    kernel->add_option("--lambda", P.lambda, "spectral parameters")->delimiter(',');
    kernel->add_option("--gauge", P.gauge, "riemannian or b-half");

    auto* riesz = app.add_subcommand("riesz", "Riesz kernel sweep with off-diagonal model bounds");
    add_common(riesz, P, true);
    riesz->add_option("--r", P.r, "r values")->delimiter(',');
    riesz->add_option("--rp", P.rp, "r' values")->delimiter(',');
    riesz->add_option("--gamma", P.gamma, "intrinsic distance on the cross-section")->delimiter(',');
    riesz->add_option("--modes", P.selection, "full, leading or remainder");
    riesz->add_flag("--refined", P.refined, "compare against r r'^{-1-d}");

    auto* verify = app.add_subcommand("verify", "run the check suites");
    add_common(verify, P, false);
    verify->add_option("--suite", P.suite, "suite name")->check(CLI::IsMember(suite_names()));

    auto* probe = app.add_subcommand("probe", "Lp operator norm probe");
    add_common(probe, P, true);
    probe->add_option("--p", P.p, "exponents")->delimiter(',');
    probe->add_option("--kernel", P.kernel, "model, riesz-t2 or riesz-t3");
    probe->add_option("--alpha", P.alpha, "model kernel exponent alpha");
    probe->add_option("--triangle", P.triangle, "model kernel support: lower or upper");
    probe->add_option("--k", P.k, "domain half-width exponents")->delimiter(',');
    probe->add_option("--grid-per-decade", P.grid_per_decade, "log grid density");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        for (char& ch : msg)
            if (ch == '\n') ch = ' ';
        std::cerr << "conekit: error: " << msg << "\n";
        return kConfig;
    }

    try {
        if (*spectrum) return cmd_spectrum(P);
        if (*thresholds) return cmd_thresholds(P);
        if (*kernel) return cmd_kernel(P);
        if (*riesz) return cmd_riesz(P);
        if (*verify) return cmd_verify(P);
        if (*probe) return cmd_probe(P);
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (char& ch : msg)
            if (ch == '\n') ch = ' ';
        std::cerr << "conekit: error: " << msg << "\n";
        return kConfig;
    }
    return kConfig;
}
