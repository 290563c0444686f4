// Command-line front end: QMI leakage curves, estimator convergence studies,
// and full certification sessions driven by a JSON config file.

#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cvqss/certification.hpp"
#include "cvqss/gaussian.hpp"
#include "cvqss/homodyne.hpp"
#include "cvqss/json_io.hpp"
#include "cvqss/trs03.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRuntimeFail = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitRejected = 3;

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    in >> j;
    return j;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << body;
}

cvqss::cert::EstimatorConfig estimator_from_json(const json& j, double sigma_auto) {
    double sigma = j.at("sigma").get<double>();
    if (sigma <= 0.0) sigma = sigma_auto;
    return cvqss::cert::EstimatorConfig(
        j.at("epsilon").get<double>(), j.at("tol").get<double>(),
        j.at("T").get<std::int64_t>(), sigma, j.at("delta").get<double>());
}

int cmd_qmi_curve(const json& cfg, const std::string& out_path) {
    const double zeta = cfg.at("zeta_mag").get<double>();
    const int points = cfg.at("points").get<int>();
    if (points < 1) throw std::invalid_argument("points must be >= 1");
    const double lo = cfg.at("ln_a_min").get<double>();
    const double hi = cfg.at("ln_a_max").get<double>();
    cvqss::trs03::LeakageCoefficients coef;
    coef.u2 = cfg.value("u2", 1.0);
    coef.v2 = cfg.value("v2", 1.0);

    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        grid[i] = std::exp(lo + t * (hi - lo));
    }
    const auto curve = cvqss::trs03::qmi_curve(zeta, grid, coef);
    std::string body = "ln_a,qmi_bits\n";
    for (const auto& pt : curve)
        body += fmt(pt.ln_a) + "," + fmt(pt.qmi_bits) + "\n";
    write_file(out_path, body);
    return kExitOk;
}

int cmd_convergence(const json& cfg, const std::string& out_path,
                    std::uint64_t seed) {
    const double zeta = cfg.at("zeta_mag").get<double>();
    const auto grid = cfg.at("cycles_grid").get<std::vector<std::int64_t>>();
    if (grid.empty()) throw std::invalid_argument("cycles_grid must be nonempty");
    for (auto c : grid)
        if (c < 1) throw std::invalid_argument("cycle counts must be >= 1");

    const cvqss::GaussianState source = cvqss::tmsv_state({zeta, 0.0});
    const cvqss::TwoModeState src = cvqss::to_two_mode(source);
    const double true_qmi =
        cvqss::quantum_mutual_information(source, {0}, {1});
    const double sigma_auto = std::sqrt(
        Eigen::SelfAdjointEigenSolver<cvqss::Matrix>(source.cov())
            .eigenvalues()
            .maxCoeff());
    const double tol = cfg.at("estimator").at("tol").get<double>();
    double sigma = cfg.at("estimator").at("sigma").get<double>();
    if (sigma <= 0.0) sigma = sigma_auto;

    std::string body = "cycles,eps_qmi,abs_error\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        cvqss::RngStream rng(seed, i);
        auto moments = cvqss::run_schedule([&] { return src; }, grid[i], rng);
        const auto est = cvqss::cert::estimate_covariance(moments, sigma, tol);
        const double eps_qmi =
            cvqss::cert::entropy_error_bound(est.V, est.eps_max, 2) +
            cvqss::cert::entropy_error_bound(est.V.topLeftCorner<2, 2>(),
                                             est.eps_max, 1) +
            cvqss::cert::entropy_error_bound(est.V.bottomRightCorner<2, 2>(),
                                             est.eps_max, 1);
        const auto [hj, fj] = cvqss::cert::floored_entropy(est.V);
        const auto [h0, f0] =
            cvqss::cert::floored_entropy(est.V.topLeftCorner<2, 2>());
        const auto [h1, f1] =
            cvqss::cert::floored_entropy(est.V.bottomRightCorner<2, 2>());
        (void)fj; (void)f0; (void)f1;
        const double est_qmi = h0 + h1 - hj;
        body += std::to_string(grid[i]) + "," + fmt(eps_qmi) + "," +
                fmt(std::abs(est_qmi - true_qmi)) + "\n";
    }
    write_file(out_path, body);
    return kExitOk;
}

int cmd_certify(const json& cfg, const std::string& out_path,
                std::uint64_t seed) {
    const int k = cfg.at("k").get<int>();
    const cvqss::trs03::Trs03Params params(k, cfg.at("a").get<double>(),
                                           cfg.at("zeta_mag").get<double>());
    const auto enc = cvqss::trs03::build_encoding(
        params, cfg.value("encoding_seed", std::uint64_t{1}));

    json claims_json;
    if (cfg.contains("claims_file"))
        claims_json = load_config(cfg.at("claims_file").get<std::string>());
    else
        claims_json = cfg.at("claims");
    const auto claimed = cvqss::access_structure_from_json(claims_json);
    if (claimed.players() != params.n_players())
        throw std::invalid_argument(
            "claims player count does not match 2k-1 scheme players");
    const auto check = cvqss::cert::validate_access_structure(claimed);
    if (!check.ok) {
        for (const auto& v : check.violations)
            std::cerr << "invalid access structure: " << v << "\n";
        return kExitConfigError;
    }

    const cvqss::cert::Thresholds th(
        cfg.at("thresholds").at("I_T_F").get<double>(),
        cfg.at("thresholds").at("I_T_A").get<double>());

    // Per-subset joint states from the scheme; sigma (when auto) bounds every
    // rotated-quadrature standard deviation across all subsets.
    std::vector<cvqss::TwoModeState> states(claimed.subset_count() + 1);
    double sigma_auto = 1.0;
    for (unsigned mask = 1; mask <= claimed.subset_count(); ++mask) {
        std::vector<int> subset;
        for (int p = 0; p < params.n_players(); ++p)
            if (mask & (1u << p)) subset.push_back(p);
        const auto st = cvqss::trs03::subset_joint_state(params, enc, subset);
        states[mask] = cvqss::to_two_mode(st);
        const double lam =
            Eigen::SelfAdjointEigenSolver<cvqss::Matrix>(st.cov())
                .eigenvalues()
                .maxCoeff();
        sigma_auto = std::max(sigma_auto, std::sqrt(lam));
    }
    const auto est_cfg = estimator_from_json(cfg.at("estimator"), sigma_auto);

    const auto report = cvqss::cert::certify(
        claimed, [&](unsigned mask) { return states[mask]; }, th, est_cfg,
        cvqss::RngStream(seed, 0));
    write_file(out_path, cvqss::report_to_json(report).dump(2) + "\n");

    if (!report.subsets.empty() && report.subsets.back().estimate_failed) {
        std::cerr << "estimation failed: copy budget exhausted\n";
        return kExitRuntimeFail;
    }
    return report.verdict ? kExitOk : kExitRejected;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"continuous-variable ramp secret-sharing simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::optional<std::uint64_t> seed_override;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_override, "output path (overrides config)");
        sub->add_option("--seed", seed_override, "seed (overrides config)");
    };
    auto* curve = app.add_subcommand("qmi-curve", "leakage curve CSV");
    auto* certify = app.add_subcommand("certify", "run a certification session");
    auto* conv = app.add_subcommand("convergence", "estimator error vs cycles");
    add_common(curve);
    add_common(certify);
    add_common(conv);

    CLI11_PARSE(app, argc, argv);

    try {
        const json cfg = load_config(config_path);
        const std::string out =
            !out_override.empty() ? out_override
                                  : cfg.at("out").get<std::string>();
        const std::uint64_t seed =
            seed_override ? *seed_override : cfg.value("seed", std::uint64_t{0});
        if (curve->parsed()) return cmd_qmi_curve(cfg, out);
        if (conv->parsed()) return cmd_convergence(cfg, out, seed);
        return cmd_certify(cfg, out, seed);
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntimeFail;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }
}
