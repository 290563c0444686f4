#include "cvqss/trs03.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cvqss/rng.hpp"

namespace cvqss::trs03 {

namespace {

constexpr double kRankTol = 1e-9;
constexpr int kMaxRandomAttempts = 64;
constexpr std::int64_t kExhaustiveSubsetLimit = 20000;
constexpr int kSampledSubsets = 10000;

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

bool family_independent(const Matrix& rows) {
    Eigen::JacobiSVD<Matrix> svd(rows);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return false;
    return sv(sv.size() - 1) >= kRankTol * sv(0);
}

std::int64_t binomial(int n, int k) {
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Candidate vectors {f_1, iota_1, ..., iota_{2k-1}}; the projection subspace
// is the full span of the f basis, so iota_i = g_i.
Matrix candidate_rows(const Matrix& g, int n) {
    Matrix rows(n + 1, n);
    rows.setZero();
    rows(0, 0) = 1.0; // f_1
    rows.bottomRows(n) = g;
    return rows;
}

bool check_subset(const Matrix& cand, const std::vector<int>& pick) {
    Matrix rows(static_cast<int>(pick.size()), cand.cols());
    for (int i = 0; i < static_cast<int>(pick.size()); ++i)
        rows.row(i) = cand.row(pick[i]);
    return family_independent(rows);
}

} // namespace

Trs03Params::Trs03Params(int k_, double a_, double zeta_mag_)
    : k(k_), a(a_), zeta_mag(zeta_mag_) {
    require(k >= 2, "Trs03Params: k must be >= 2");
    require(a > 0.0, "Trs03Params: a must be positive");
    require(zeta_mag >= 0.0, "Trs03Params: zeta_mag must be nonnegative");
}

bool check_access_independence(const Matrix& g, const Trs03Params& params) {
    const int n = params.n_players();
    require(g.rows() == n && g.cols() == n,
            "check_access_independence: dimension mismatch");
    const int total = n + 1; // f_1 plus the 2k-1 projections
    const Matrix cand = candidate_rows(g, n);

    if (binomial(total, params.k) <= kExhaustiveSubsetLimit) {
        std::vector<int> pick(params.k);
        for (int i = 0; i < params.k; ++i) pick[i] = i;
        while (true) {
            if (!check_subset(cand, pick)) return false;
            int i = params.k - 1;
            while (i >= 0 && pick[i] == total - params.k + i) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < params.k; ++j) pick[j] = pick[j - 1] + 1;
        }
        return true;
    }

    RngStream rng(0xacce55, static_cast<std::uint64_t>(n));
    std::vector<int> pool(total);
    for (int t = 0; t < kSampledSubsets; ++t) {
        for (int i = 0; i < total; ++i) pool[i] = i;
        for (int i = 0; i < params.k; ++i) {
            const int j = i + static_cast<int>(rng.next_u64() % (total - i));
            std::swap(pool[i], pool[j]);
        }
        std::vector<int> pick(pool.begin(), pool.begin() + params.k);
        if (!check_subset(cand, pick)) return false;
    }
    return true;
}

EncodingMatrix build_encoding(const Trs03Params& params, std::uint64_t seed) {
    const int n = params.n_players();
    for (int attempt = 0; attempt < kMaxRandomAttempts; ++attempt) {
        RngStream rng(seed, static_cast<std::uint64_t>(attempt));
        Matrix g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
        if (check_access_independence(g, params)) return {g};
    }
    // Vandermonde fallback with distinct nonzero nodes.
    Matrix g(n, n);
    for (int i = 0; i < n; ++i) {
        const double t = 0.5 + static_cast<double>(i) / n;
        double v = 1.0;
        for (int j = 0; j < n; ++j) {
            g(i, j) = v;
            v *= t;
        }
    }
    if (check_access_independence(g, params)) return {g};
    throw std::runtime_error(
        "build_encoding: no candidate passed the access condition");
}

DecodingMatrix build_decoding(const EncodingMatrix& enc,
                              std::vector<int> subset,
                              const Trs03Params& params) {
    const int n = params.n_players();
    const int k = params.k;
    require(enc.g.rows() == n && enc.g.cols() == n,
            "build_decoding: encoding dimension mismatch");
    std::sort(subset.begin(), subset.end());
    require(std::adjacent_find(subset.begin(), subset.end()) == subset.end(),
            "build_decoding: duplicate player index");
    require(subset.empty() || (subset.front() >= 0 && subset.back() < n),
            "build_decoding: player index out of range");
    if (static_cast<int>(subset.size()) < k)
        throw std::invalid_argument("build_decoding: insufficient collaborators");

    // Relabel so the collaborating subset occupies the first k row slots.
    std::vector<int> order(subset.begin(), subset.begin() + k);
    for (int i = 0; i < n; ++i)
        if (std::find(order.begin(), order.end(), i) == order.end())
            order.push_back(i);
    Matrix gp(n, n);
    for (int i = 0; i < n; ++i) gp.row(i) = enc.g.row(order[i]);

    // The collaborators may only combine their own rows: xi_{1..k} = C g_{1..k}.
    // The dectrans constraints fix C via the first-k components of the rows.
    const Matrix P = gp.topLeftCorner(k, k);
    Eigen::JacobiSVD<Matrix> svd(P.transpose(),
                                 Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < kRankTol * sv(0))
        throw std::domain_error(
            "build_decoding: encoding violates the access condition for this subset");

    Matrix targets(k, k);
    targets.setZero();
    targets(0, 0) = 1.0;
    targets.bottomRows(k - 1) = gp.bottomRows(k - 1).leftCols(k);

    // C = targets P^{-1}, i.e. C^T solves P^T C^T = targets^T.
    const Matrix C = svd.solve(targets.transpose()).transpose();

    Matrix xi = gp;
    xi.topRows(k) = C * gp.topRows(k);
    return {xi, std::move(order)};
}

LeakageCoefficients leakage_coefficients(const DecodingMatrix& d,
                                         const Trs03Params& params) {
    const int n = params.n_players();
    const int k = params.k;
    require(d.xi.rows() == n && d.xi.cols() == n,
            "leakage_coefficients: decoding dimension mismatch");

    // gamma_1: Z-components (columns k..2k-2) of the extracted row.
    const double v2 = d.xi.row(0).tail(k - 1).squaredNorm();

    // alpha_j = sum_i u_i beta_{ij} over the acting rows 2..k; least squares
    // when the beta block is rank deficient or non-square.
    const Matrix beta = d.xi.block(1, 1, k - 1, k - 1);
    const Vector alpha = d.xi.block(1, 0, k - 1, 1);
    Eigen::JacobiSVD<Matrix> svd(beta.transpose(),
                                 Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(0) <= 0.0 || sv(sv.size() - 1) < 1e-12 * sv(0))
        throw std::domain_error(
            "leakage_coefficients: rank-deficient expansion system");
    const Vector u = svd.solve(alpha);
    return {u.squaredNorm(), v2};
}

namespace {

struct WignerCoeffs {
    double b1, b2, b3, g1, g2, g3;
};

// Appendix coefficients in a form stable for large |zeta|: every e^{2|zeta|}
// factored so only cosh/sinh(2|zeta|) appear. The beta (position) sector
// carries v^2, the gamma (momentum) sector u^2.
WignerCoeffs wigner_coeffs(double zeta_mag, double a,
                           const LeakageCoefficients& coef) {
    const double ch = std::cosh(2.0 * zeta_mag);
    const double sh = std::sinh(2.0 * zeta_mag);
    const double a2 = a * a;
    const double den_b = a2 + coef.v2 * ch;
    const double den_g = a2 + coef.u2 * ch;
    WignerCoeffs w{};
    w.b1 = -(a2 * ch + coef.v2) / den_b;
    w.b2 = -(a2 * ch) / den_b;
    w.b3 = 2.0 * a2 * sh / den_b;
    w.g1 = -(a2 * ch + coef.u2) / den_g;
    w.g2 = -(a2 * ch) / den_g;
    w.g3 = -2.0 * a2 * sh / den_g;
    return w;
}

} // namespace

Matrix analytic_joint_covariance(double zeta_mag, double a,
                                 const LeakageCoefficients& coef) {
    require(a > 0.0, "analytic_joint_covariance: a must be positive");
    require(zeta_mag >= 0.0,
            "analytic_joint_covariance: zeta_mag must be nonnegative");
    require(coef.u2 >= 0.0 && coef.v2 >= 0.0,
            "analytic_joint_covariance: coefficients must be nonnegative");
    const WignerCoeffs w = wigner_coeffs(zeta_mag, a, coef);

    Eigen::Matrix2d mq, mp;
    mq << -2.0 * w.b1, -w.b3, -w.b3, -2.0 * w.b2;
    mp << -2.0 * w.g1, -w.g3, -w.g3, -2.0 * w.g2;
    if (mq.determinant() <= 0.0 || mp.determinant() <= 0.0 || mq(0, 0) <= 0.0 ||
        mp(0, 0) <= 0.0)
        throw std::domain_error(
            "analytic_joint_covariance: Wigner quadratic form is not normalizable");
    // Factor 2 converts the half-quantum Wigner convention to cov(vacuum) = I.
    const Eigen::Matrix2d vq = 2.0 * mq.inverse();
    const Eigen::Matrix2d vp = 2.0 * mp.inverse();

    Matrix V = Matrix::Zero(4, 4);
    V(0, 0) = vq(0, 0);
    V(0, 2) = V(2, 0) = vq(0, 1);
    V(2, 2) = vq(1, 1);
    V(1, 1) = vp(0, 0);
    V(1, 3) = V(3, 1) = vp(0, 1);
    V(3, 3) = vp(1, 1);

    const auto nu = two_mode_symplectic_eigenvalues(
        V.topLeftCorner<2, 2>(), V.bottomRightCorner<2, 2>(),
        V.topRightCorner<2, 2>());
    if (nu.second < 1.0 - 1e-6)
        throw std::domain_error(
            "analytic_joint_covariance: formula-domain violation (nu < 1)");
    return V;
}

double extracted_secret_qmi(double zeta_mag, double a,
                            const LeakageCoefficients& coef) {
    const Matrix V = analytic_joint_covariance(zeta_mag, a, coef);
    const Eigen::Matrix2d A = V.topLeftCorner<2, 2>();
    const Eigen::Matrix2d B = V.bottomRightCorner<2, 2>();
    const auto [nu_p, nu_m] = two_mode_symplectic_eigenvalues(
        A, B, V.topRightCorner<2, 2>());
    const double nu_s = std::sqrt(std::max(A.determinant(), 1.0));
    const double nu_r = std::sqrt(std::max(B.determinant(), 1.0));
    const double qmi = entropy_g(nu_s) + entropy_g(nu_r) -
                       entropy_g(std::max(nu_p, 1.0)) -
                       entropy_g(std::max(nu_m, 1.0));
    return std::max(qmi, 0.0);
}

int classify_exact(double qmi, double I_T_F, double I_T_A) {
    if (I_T_F > I_T_A)
        throw std::invalid_argument("classify_exact: inverted thresholds");
    if (qmi >= I_T_A) return 2;
    if (qmi <= I_T_F) return 0;
    return 1;
}

std::vector<CurvePoint> qmi_curve(double zeta_mag,
                                  const std::vector<double>& a_grid,
                                  const LeakageCoefficients& coef) {
    require(!a_grid.empty(), "qmi_curve: empty grid");
    std::vector<CurvePoint> out;
    out.reserve(a_grid.size());
    for (double a : a_grid) {
        require(a > 0.0, "qmi_curve: grid values must be positive");
        out.push_back({std::log(a), extracted_secret_qmi(zeta_mag, a, coef)});
    }
    return out;
}

namespace {

// Initial covariance of (share coordinates, reference): TMSV across the
// secret coordinate and the reference mode, squeezed-vacuum ancillae on the
// y (width a) and z (width 1/a) coordinates.
Matrix initial_full_covariance(const Trs03Params& params) {
    const int n = params.n_players();
    const int dim = 2 * (n + 1);
    Matrix V = Matrix::Identity(dim, dim);
    const double ch = std::cosh(2.0 * params.zeta_mag);
    const double sh = std::sinh(2.0 * params.zeta_mag);
    const int r = 2 * n; // reference mode offset
    V(0, 0) = V(1, 1) = ch;
    V(r, r) = V(r + 1, r + 1) = ch;
    V(0, r) = V(r, 0) = sh;
    V(1, r + 1) = V(r + 1, 1) = -sh;
    const double a2 = params.a * params.a;
    for (int i = 1; i < params.k; ++i) {
        V(2 * i, 2 * i) = a2;
        V(2 * i + 1, 2 * i + 1) = 1.0 / a2;
    }
    for (int i = params.k; i < n; ++i) {
        V(2 * i, 2 * i) = 1.0 / a2;
        V(2 * i + 1, 2 * i + 1) = a2;
    }
    return V;
}

// Applies the point transformation L to the share coordinates of the raw
// (shares + reference) covariance and returns the (share j, reference) pair.
// Worked on raw matrices so large ancilla variances never enter a validated
// state; the kept 4x4 block involves only O(1) terms.
GaussianState joint_with_reference(const Trs03Params& params, const Matrix& L,
                                   int share_row) {
    const int n = params.n_players();
    const Matrix V0 = initial_full_covariance(params);
    const Matrix Sp = SymplecticMap::point_transform(L).S();
    Matrix S = Matrix::Identity(2 * (n + 1), 2 * (n + 1));
    S.topLeftCorner(2 * n, 2 * n) = Sp;
    const Matrix V = S * V0 * S.transpose();

    const int a = 2 * share_row, r = 2 * n;
    Matrix Vj(4, 4);
    Vj.block<2, 2>(0, 0) = V.block<2, 2>(a, a);
    Vj.block<2, 2>(0, 2) = V.block<2, 2>(a, r);
    Vj.block<2, 2>(2, 0) = V.block<2, 2>(r, a);
    Vj.block<2, 2>(2, 2) = V.block<2, 2>(r, r);
    Vj = ((Vj + Vj.transpose()) / 2.0).eval();
    return GaussianState(2, Vector::Zero(4), std::move(Vj));
}

} // namespace

GaussianState decoded_joint_state(const Trs03Params& params,
                                  const EncodingMatrix& g,
                                  const std::vector<int>& subset) {
    const DecodingMatrix dec = build_decoding(g, subset, params);
    return joint_with_reference(params, dec.xi, 0);
}

GaussianState subset_joint_state(const Trs03Params& params,
                                 const EncodingMatrix& g,
                                 const std::vector<int>& subset) {
    require(!subset.empty(), "subset_joint_state: empty subset");
    if (static_cast<int>(subset.size()) >= params.k)
        return decoded_joint_state(params, g, subset);
    const int holder = *std::min_element(subset.begin(), subset.end());
    require(holder >= 0 && holder < params.n_players(),
            "subset_joint_state: player index out of range");
    return joint_with_reference(params, g.g, holder);
}

} // namespace cvqss::trs03
