#include "cvqss/certification.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cvqss::cert {

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

} // namespace

EstimatorConfig::EstimatorConfig(double epsilon_, double tol_, std::int64_t T_,
                                 double sigma_, double delta_)
    : epsilon(epsilon_), tol(tol_), T(T_), sigma(sigma_), delta(delta_) {
    require(epsilon > 0.0, "EstimatorConfig: epsilon must be positive");
    require(tol > 0.0 && tol < 0.5, "EstimatorConfig: tol must be in (0, 1/2)");
    require(T >= 1, "EstimatorConfig: copy budget must be positive");
    require(sigma > 0.0, "EstimatorConfig: sigma must be positive");
    require(delta >= 2.0 * epsilon, "EstimatorConfig: delta must be >= 2 epsilon");
}

Thresholds::Thresholds(double f, double a) : I_T_F(f), I_T_A(a) {
    require(f >= 0.0 && a >= 0.0, "Thresholds: must be nonnegative");
    require(f <= a, "Thresholds: I_T_F must not exceed I_T_A");
}

AccessStructure::AccessStructure(int players, std::vector<int> classes)
    : players_(players), classes_(std::move(classes)) {
    require(players_ >= 1 && players_ <= 20, "AccessStructure: bad player count");
    require(classes_.size() == (std::size_t{1} << players_) - 1,
            "AccessStructure: classification must cover all nonempty subsets");
    for (int c : classes_)
        require(c >= 0 && c <= 2, "AccessStructure: classes must be 0, 1 or 2");
}

int AccessStructure::claimed(unsigned mask) const {
    require(mask >= 1 && mask <= subset_count(), "AccessStructure: bad mask");
    return classes_[mask - 1];
}

StructureCheck validate_access_structure(const AccessStructure& claimed) {
    StructureCheck out;
    const unsigned count = claimed.subset_count();
    // f must be nondecreasing under inclusion; adding one player at a time
    // covers the full order.
    for (unsigned mask = 1; mask <= count; ++mask)
        for (int p = 0; p < claimed.players(); ++p) {
            const unsigned sup = mask | (1u << p);
            if (sup == mask) continue;
            if (claimed.claimed(mask) > claimed.claimed(sup))
                out.violations.push_back(
                    "monotonicity: subset " + std::to_string(mask) + " (class " +
                    std::to_string(claimed.claimed(mask)) + ") exceeds superset " +
                    std::to_string(sup) + " (class " +
                    std::to_string(claimed.claimed(sup)) + ")");
        }
    for (unsigned a = 1; a <= count; ++a) {
        if (claimed.claimed(a) != 2) continue;
        for (unsigned b = a + 1; b <= count; ++b)
            if (claimed.claimed(b) == 2 && (a & b) == 0)
                out.violations.push_back("no-cloning: disjoint subsets " +
                                         std::to_string(a) + " and " +
                                         std::to_string(b) +
                                         " are both authorized");
    }
    out.ok = out.violations.empty();
    return out;
}

double chebyshev_epsilon(double sigma, std::int64_t l, double tol) {
    require(sigma > 0.0, "chebyshev_epsilon: sigma must be positive");
    if (l < 1) throw std::invalid_argument("chebyshev_epsilon: l must be >= 1");
    require(tol > 0.0 && tol < 1.0, "chebyshev_epsilon: tol must be in (0, 1)");
    const double budget = 1.0 - std::pow(1.0 - tol, 1.0 / 14.0);
    return sigma / std::sqrt(static_cast<double>(l) * budget);
}

CovEstimate estimate_covariance(const RunningMoments& m, double sigma,
                                double tol) {
    if (m.l < 1)
        throw std::invalid_argument("estimate_covariance: no completed cycles");
    const double inv_l = 1.0 / static_cast<double>(m.l);
    const Eigen::Vector4d eta = m.hom_result * inv_l;
    const Eigen::Matrix4d S = m.second_mom * inv_l;

    Eigen::Matrix4d V = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 4; ++i) V(i, i) = S(i, i) - eta[i] * eta[i];
    for (int i : {0, 1})
        for (int j : {2, 3}) V(i, j) = V(j, i) = S(i, j) - eta[i] * eta[j];
    // Same-mode symmetrized cross terms from the pi/4 slots.
    V(0, 1) = V(1, 0) = S(0, 1) - (S(0, 0) + S(1, 1)) / 2.0 - eta[0] * eta[1];
    V(2, 3) = V(3, 2) = S(2, 3) - (S(2, 2) + S(3, 3)) / 2.0 - eta[2] * eta[3];

    const double eps = chebyshev_epsilon(sigma, m.l, tol);
    double pair_max = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            pair_max = std::max(pair_max,
                                1.0 + eta[i] * eta[i] + eta[j] * eta[j]);
    const double eps_max =
        eps * std::max({std::sqrt(pair_max),
                        std::sqrt(4.0 + eta[0] * eta[0] + eta[1] * eta[1]),
                        std::sqrt(4.0 + eta[2] * eta[2] + eta[3] * eta[3])});
    return {V, eta, eps, eps_max};
}

double entropy_error_bound(const Matrix& V, double eps_max, int n_modes) {
    require(eps_max >= 0.0, "entropy_error_bound: eps_max must be nonnegative");
    require(V.rows() == 2 * n_modes && V.cols() == 2 * n_modes,
            "entropy_error_bound: dimension mismatch");
    Eigen::JacobiSVD<Matrix> svd(V);
    const double s_max = svd.singularValues()(0);
    const double s_min = svd.singularValues()(svd.singularValues().size() - 1);
    if (!(s_min > 0.0))
        throw std::domain_error("entropy_error_bound: singular covariance");
    const double kappa = s_max / s_min;
    const double dim = 2.0 * n_modes;
    return kappa * (1.0 + std::log2(dim * s_max)) * dim * eps_max;
}

std::pair<double, bool> floored_entropy(const Eigen::MatrixXd& V) {
    const int n = static_cast<int>(V.rows()) / 2;
    const Matrix sym = (V + V.transpose()) / 2.0;
    Eigen::EigenSolver<Matrix> es(symplectic_form(n) * sym, false);
    std::vector<double> moduli(2 * n);
    for (int i = 0; i < 2 * n; ++i) moduli[i] = std::abs(es.eigenvalues()[i]);
    std::sort(moduli.begin(), moduli.end(), std::greater<>());
    double h = 0.0;
    bool floored = false;
    for (int k = 0; k < n; ++k) {
        const double nu = (moduli[2 * k] + moduli[2 * k + 1]) / 2.0;
        if (nu < 1.0 - kPhysicalityTol) floored = true;
        h += entropy_g(std::max(nu, 1.0));
    }
    return {h, floored};
}

namespace detail {

QmiEstimate estimate_qmi_impl(
    const std::function<void(RunningMoments&, RngStream&)>& one_cycle,
    const EstimatorConfig& cfg, RngStream& rng) {
    QmiEstimate out;
    if (cfg.T < kCopiesPerCycle) return out; // Fail: cannot finish one cycle

    RunningMoments m;
    Eigen::Matrix4d V;
    double eps_qmi = 0.0;
    bool reached = false;
    while (kCopiesPerCycle * (m.l + 1) <= cfg.T) {
        one_cycle(m, rng);
        const CovEstimate est = estimate_covariance(m, cfg.sigma, cfg.tol);
        V = est.V;
        // Early cycles can produce degenerate estimates; the bound only
        // gates the stopping rule once it is a finite positive number.
        if (V.diagonal().minCoeff() <= 0.0 || !V.allFinite()) continue;
        const Matrix joint = V;
        const Matrix red0 = V.topLeftCorner<2, 2>();
        const Matrix red1 = V.bottomRightCorner<2, 2>();
        Eigen::JacobiSVD<Matrix> svd(joint);
        if (!(svd.singularValues().minCoeff() > 0.0)) continue;
        eps_qmi = entropy_error_bound(joint, est.eps_max, 2) +
                  entropy_error_bound(red0, est.eps_max, 1) +
                  entropy_error_bound(red1, est.eps_max, 1);
        if (!std::isfinite(eps_qmi) || eps_qmi <= 0.0) continue;
        if (eps_qmi <= cfg.epsilon) {
            reached = true;
            break;
        }
    }
    out.cycles = m.l;
    out.copies_used = kCopiesPerCycle * m.l;
    if (!reached) return out; // Fail: budget exhausted first

    const auto [h_joint, fj] = floored_entropy(V);
    const auto [h0, f0] = floored_entropy(V.topLeftCorner<2, 2>());
    const auto [h1, f1] = floored_entropy(V.bottomRightCorner<2, 2>());
    out.status = QmiEstimate::Status::ok;
    out.est_qmi = h0 + h1 - h_joint;
    out.eps_qmi = eps_qmi;
    out.floored = fj || f0 || f1;
    return out;
}

} // namespace detail

QmiEstimate estimate_qmi(const TwoModeState& iid_source,
                         const EstimatorConfig& cfg, RngStream& rng) {
    return estimate_qmi([&iid_source] { return iid_source; }, cfg, rng);
}

int classify_estimate(double est_qmi, const Thresholds& th, double eps) {
    if (est_qmi > th.I_T_A + eps) return 2;
    if (est_qmi > th.I_T_F - eps) return 1;
    return 0;
}

CertificationReport certify(
    const AccessStructure& claimed,
    const std::function<TwoModeState(unsigned mask)>& subset_state,
    const Thresholds& th, const EstimatorConfig& cfg, const RngStream& rng) {
    CertificationReport report;
    const unsigned count = claimed.subset_count();
    unsigned matched = 0;
    for (unsigned mask = 1; mask <= count; ++mask) {
        RngStream stream(rng.seed(),
                         (rng.stream() << 24) ^ static_cast<std::uint64_t>(mask));
        const TwoModeState source = subset_state(mask);
        const QmiEstimate est = estimate_qmi(source, cfg, stream);
        SubsetRecord rec;
        rec.mask = mask;
        rec.claimed = claimed.claimed(mask);
        rec.cycles = est.cycles;
        report.copies_used += est.copies_used;
        if (!est.ok()) {
            rec.estimate_failed = true;
            report.subsets.push_back(rec);
            report.verdict = false;
            return report;
        }
        rec.est_qmi = est.est_qmi;
        rec.eps_qmi = est.eps_qmi;
        rec.floored = est.floored;
        rec.classification = classify_estimate(est.est_qmi, th, cfg.epsilon);
        rec.matched = (rec.classification == rec.claimed);
        report.subsets.push_back(rec);
        if (!rec.matched) {
            report.verdict = false;
            return report; // halt on first mismatch
        }
        ++matched;
    }
    report.verdict = (matched == count);
    return report;
}

SqueezeParam dealer_squeezing_from_uniforms(double s_max, double a, double b) {
    require(s_max > 0.0, "dealer_squeezing_from_uniforms: s_max must be positive");
    constexpr double two_pi = 6.283185307179586476925287;
    return SqueezeParam(std::sqrt(2.0 * a * s_max), two_pi * b, s_max);
}

SqueezeParam dealer_sample_squeezing(double s_max, RngStream& rng) {
    const double a = rng.uniform();
    const double b = rng.uniform();
    return dealer_squeezing_from_uniforms(s_max, a, b);
}

} // namespace cvqss::cert
