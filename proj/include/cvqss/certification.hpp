#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cvqss/gaussian.hpp"
#include "cvqss/homodyne.hpp"
#include "cvqss/rng.hpp"

namespace cvqss::cert {

// Referee configuration: target QMI error epsilon, failure probability tol,
// per-subset copy budget T, uniform bound sigma on outcome standard
// deviations, and the threshold gap delta >= 2 epsilon.
struct EstimatorConfig {
    double epsilon;
    double tol;
    std::int64_t T;
    double sigma;
    double delta;

    EstimatorConfig(double epsilon_, double tol_, std::int64_t T_,
                    double sigma_, double delta_);
};

struct Thresholds {
    double I_T_F;
    double I_T_A;

    Thresholds(double f, double a);
};

// Claimed access structure f : nonempty subsets -> {0,1,2}, indexed by the
// binary membership mask (1 .. 2^P - 1).
class AccessStructure {
public:
    AccessStructure(int players, std::vector<int> classes);

    int players() const { return players_; }
    unsigned subset_count() const { return (1u << players_) - 1u; }
    int claimed(unsigned mask) const;

private:
    int players_;
    std::vector<int> classes_; // index mask-1
};

struct StructureCheck {
    bool ok = true;
    std::vector<std::string> violations;
};

// Monotonicity (f nondecreasing under inclusion) and the no-cloning clause
// (no two disjoint authorized subsets). Diagnostic: returns every violation.
StructureCheck validate_access_structure(const AccessStructure& claimed);

// Chebyshev bound on a single expectation estimate after l schedule cycles,
// with the failure budget split across the 14 estimators:
// sigma / sqrt(l (1 - (1 - tol)^{1/14})).
double chebyshev_epsilon(double sigma, std::int64_t l, double tol);

struct CovEstimate {
    Eigen::Matrix4d V;
    Eigen::Vector4d mean;
    double eps;     // per-expectation Chebyshev bound
    double eps_max; // propagated covariance-entry bound
};

// Normalized moments -> covariance estimate (exact on exact expectations)
// plus the propagated entry-error bound from the paper's branch maxima,
// evaluated on the normalized first moments.
CovEstimate estimate_covariance(const RunningMoments& m, double sigma,
                                double tol);

// kappa(V) (1 + log2(2n sigma_max)) 2n eps_max with kappa = sigma_max/sigma_min
// the extreme singular values of V.
double entropy_error_bound(const Matrix& V, double eps_max, int n_modes);

struct QmiEstimate {
    enum class Status { ok, fail_budget };
    Status status = Status::fail_budget;
    double est_qmi = 0.0;
    double eps_qmi = 0.0;
    std::int64_t cycles = 0;
    std::int64_t copies_used = 0;
    bool floored = false;

    bool ok() const { return status == Status::ok; }
};

// Entropy of a (possibly noisy) estimated covariance: symplectic eigenvalue
// moduli floored at 1 before evaluating g. Second element reports whether
// flooring occurred beyond tolerance.
std::pair<double, bool> floored_entropy(const Eigen::MatrixXd& V);

namespace detail {
QmiEstimate estimate_qmi_impl(
    const std::function<void(RunningMoments&, RngStream&)>& one_cycle,
    const EstimatorConfig& cfg, RngStream& rng);
}

// Algorithm-3 estimation loop: schedule cycles until the summed entropy error
// bounds over the joint and both reduced estimates drop to cfg.epsilon, or the
// copy budget T runs out (Fail).
template <class Factory>
QmiEstimate estimate_qmi(Factory&& state_factory, const EstimatorConfig& cfg,
                         RngStream& rng) {
    auto one_cycle = [&](RunningMoments& m, RngStream& r) {
        run_schedule_cycle(m, state_factory, r);
    };
    return detail::estimate_qmi_impl(one_cycle, cfg, rng);
}

QmiEstimate estimate_qmi(const TwoModeState& iid_source,
                         const EstimatorConfig& cfg, RngStream& rng);

// Three-way split with the estimate margins of Algorithm 4:
// 2 if est > I_T_A + eps, 1 if I_T_F - eps < est < I_T_A + eps, else 0.
int classify_estimate(double est_qmi, const Thresholds& th, double eps);

struct SubsetRecord {
    unsigned mask = 0;
    double est_qmi = 0.0;
    double eps_qmi = 0.0;
    int classification = 0;
    int claimed = 0;
    bool matched = false;
    bool floored = false;
    bool estimate_failed = false;
    std::int64_t cycles = 0;
};

struct CertificationReport {
    bool verdict = false;
    std::int64_t copies_used = 0;
    std::vector<SubsetRecord> subsets;
};

// Algorithm 4: subsets in ascending mask order, halt on the first mismatch or
// estimation failure; certify iff all 2^P - 1 subsets match the claim.
CertificationReport certify(
    const AccessStructure& claimed,
    const std::function<TwoModeState(unsigned mask)>& subset_state,
    const Thresholds& th, const EstimatorConfig& cfg, const RngStream& rng);

// Dealer's squeezing draw from two uniforms: s = sqrt(2 a s_max), theta =
// 2 pi b. Kept verbatim, so the draw can exceed the device cap; the returned
// parameter carries cap = s_max and callers check admissibility.
SqueezeParam dealer_squeezing_from_uniforms(double s_max, double a, double b);
SqueezeParam dealer_sample_squeezing(double s_max, RngStream& rng);

} // namespace cvqss::cert
