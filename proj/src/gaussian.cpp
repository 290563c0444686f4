#include "cvqss/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cvqss {

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

void require_domain(bool cond, const char* what) {
    if (!cond) throw std::domain_error(what);
}

double max_abs(const Matrix& M) {
    return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

void check_square_even(const Matrix& M, const char* what) {
    require(M.rows() == M.cols(), what);
    require(M.rows() % 2 == 0, what);
}

void check_symmetric(const Matrix& V, double tol) {
    require_domain(max_abs(V - V.transpose()) <= tol,
                   "covariance matrix is not symmetric");
}

// Positive-definiteness via the self-adjoint spectrum; returns min eigenvalue.
double min_eigenvalue(const Matrix& V) {
    if (V.rows() == 0) return 1.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(V, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

} // namespace

Matrix symplectic_form(int n_modes) {
    require(n_modes >= 1, "symplectic_form: n_modes must be >= 1");
    Matrix omega = Matrix::Zero(2 * n_modes, 2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

bool is_symplectic(const Matrix& S, double tol) {
    check_square_even(S, "is_symplectic: matrix must be square with even dimension");
    const Matrix omega = symplectic_form(static_cast<int>(S.rows()) / 2);
    return max_abs(S * omega * S.transpose() - omega) <= tol;
}

SymplecticMap::SymplecticMap(Matrix S, Vector d) : S_(std::move(S)), d_(std::move(d)) {
    check_square_even(S_, "SymplecticMap: S must be square with even dimension");
    require(d_.size() == S_.rows(), "SymplecticMap: displacement size mismatch");
    require(is_symplectic(S_, kSymplecticTol), "SymplecticMap: S is not symplectic");
}

SymplecticMap::SymplecticMap(Matrix S) : S_(std::move(S)) {
    check_square_even(S_, "SymplecticMap: S must be square with even dimension");
    d_ = Vector::Zero(S_.rows());
    require(is_symplectic(S_, kSymplecticTol), "SymplecticMap: S is not symplectic");
}

SymplecticMap SymplecticMap::identity(int n_modes) {
    require(n_modes >= 1, "SymplecticMap::identity: n_modes must be >= 1");
    return SymplecticMap(Matrix::Identity(2 * n_modes, 2 * n_modes),
                         Vector::Zero(2 * n_modes));
}

SymplecticMap SymplecticMap::displacement(Vector d) {
    require(d.size() > 0 && d.size() % 2 == 0,
            "SymplecticMap::displacement: length must be positive and even");
    const auto dim = d.size();
    return SymplecticMap(Matrix::Identity(dim, dim), std::move(d));
}

SymplecticMap SymplecticMap::point_transform(const Matrix& L) {
    require(L.rows() == L.cols() && L.rows() >= 1,
            "point_transform: L must be square");
    Eigen::FullPivLU<Matrix> lu(L);
    require(lu.isInvertible(), "point_transform: L must be invertible");
    const Matrix Linv = lu.inverse();
    const int n = static_cast<int>(L.rows());
    Matrix S = Matrix::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            S(2 * i, 2 * j) = L(i, j);
            S(2 * i + 1, 2 * j + 1) = Linv(j, i); // (L^{-T})_{ij}
        }
    return SymplecticMap(S, Vector::Zero(2 * n));
}

SymplecticMap SymplecticMap::after(const SymplecticMap& other) const {
    require(n_modes() == other.n_modes(), "SymplecticMap::after: mode mismatch");
    return SymplecticMap(S_ * other.S(), S_ * other.d() + d_);
}

SqueezeParam::SqueezeParam(double s_, double theta_, double cap_)
    : s(s_), theta(theta_), cap(cap_) {
    require(s >= 0.0, "SqueezeParam: magnitude must be nonnegative");
    require(cap >= 0.0, "SqueezeParam: cap must be nonnegative");
    constexpr double two_pi = 6.283185307179586476925287;
    theta = std::fmod(theta, two_pi);
    if (theta < 0.0) theta += two_pi;
}

ProbabilityVector::ProbabilityVector(Vector p) : p_(std::move(p)) {
    require(p_.size() > 0, "ProbabilityVector: empty");
    require_domain(p_.minCoeff() >= 0.0, "ProbabilityVector: negative entry");
    require_domain(std::abs(p_.sum() - 1.0) <= 1e-12,
                   "ProbabilityVector: not normalized");
}

GaussianState::GaussianState(int n_modes, Vector mean, Matrix cov)
    : n_modes_(n_modes), mean_(std::move(mean)), cov_(std::move(cov)) {
    require(n_modes_ >= 0, "GaussianState: negative mode count");
    require(mean_.size() == 2 * n_modes_, "GaussianState: mean length mismatch");
    require(cov_.rows() == 2 * n_modes_ && cov_.cols() == 2 * n_modes_,
            "GaussianState: covariance dimension mismatch");
    if (n_modes_ == 0) return;
    check_symmetric(cov_, kSymmetryTol);
    cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();
    const Vector nu = symplectic_spectrum(cov_);
    require_domain(nu.minCoeff() >= 1.0 - kPhysicalityTol,
                   "GaussianState: covariance is unphysical (nu < 1)");
}

GaussianState GaussianState::vacuum(int n_modes) {
    require(n_modes >= 1, "vacuum: n_modes must be >= 1");
    return GaussianState(n_modes, Vector::Zero(2 * n_modes),
                         Matrix::Identity(2 * n_modes, 2 * n_modes));
}

Vector symplectic_spectrum(const Matrix& V) {
    check_square_even(V, "symplectic_spectrum: V must be square with even dimension");
    check_symmetric(V, kSymmetryTol * std::max(1.0, max_abs(V)));
    require_domain(min_eigenvalue(V) > 0.0,
                   "symplectic_spectrum: V is not positive definite");
    const int n = static_cast<int>(V.rows()) / 2;
    const Matrix omega_v = symplectic_form(n) * V;
    Eigen::EigenSolver<Matrix> es(omega_v, /*computeEigenvectors=*/false);
    std::vector<double> moduli(2 * n);
    for (int i = 0; i < 2 * n; ++i) moduli[i] = std::abs(es.eigenvalues()[i]);
    std::sort(moduli.begin(), moduli.end(), std::greater<>());
    Vector nu(n);
    for (int k = 0; k < n; ++k) {
        const double a = moduli[2 * k], b = moduli[2 * k + 1];
        require_domain(std::abs(a - b) <= 1e-8 * std::max(a, 1.0),
                       "symplectic_spectrum: eigenvalue moduli do not pair");
        nu[k] = (a + b) / 2.0;
    }
    return nu;
}

std::pair<double, double> two_mode_symplectic_eigenvalues(
    const Eigen::Matrix2d& A, const Eigen::Matrix2d& B,
    const Eigen::Matrix2d& C) {
    require_domain(std::abs(A(0, 1) - A(1, 0)) <= kSymmetryTol &&
                       std::abs(B(0, 1) - B(1, 0)) <= kSymmetryTol,
                   "two_mode_symplectic_eigenvalues: A and B must be symmetric");
    Eigen::Matrix4d V;
    V << A, C, C.transpose(), B;
    const double delta = A.determinant() + B.determinant() + 2.0 * C.determinant();
    const double det_v = V.determinant();
    double disc = delta * delta - 4.0 * det_v;
    require_domain(disc >= -1e-9,
                   "two_mode_symplectic_eigenvalues: negative discriminant");
    disc = std::max(disc, 0.0);
    const double root = std::sqrt(disc);
    double hi = (delta + root) / 2.0;
    double lo = (delta - root) / 2.0;
    require_domain(lo >= -1e-9,
                   "two_mode_symplectic_eigenvalues: unphysical blocks");
    hi = std::max(hi, 0.0);
    lo = std::max(lo, 0.0);
    return {std::sqrt(hi), std::sqrt(lo)};
}

double entropy_g(double nu) {
    const double np = (nu + 1.0) / 2.0;
    const double nm = (nu - 1.0) / 2.0;
    double h = np * std::log2(np);
    if (nm > 0.0) h -= nm * std::log2(nm);
    return h;
}

double von_neumann_entropy(const Matrix& V) {
    const Vector nu = symplectic_spectrum(V);
    require_domain(nu.minCoeff() >= 1.0 - kPhysicalityTol,
                   "von_neumann_entropy: unphysical covariance (nu < 1)");
    double h = 0.0;
    for (int k = 0; k < nu.size(); ++k) h += entropy_g(std::max(nu[k], 1.0));
    return h;
}

double von_neumann_entropy(const GaussianState& state) {
    return von_neumann_entropy(state.cov());
}

double shannon_entropy(const ProbabilityVector& p) {
    double h = 0.0;
    for (int i = 0; i < p.p().size(); ++i) {
        const double pi = p.p()[i];
        if (pi > 0.0) h -= pi * std::log2(pi);
    }
    return h;
}

GaussianState partial_trace(const GaussianState& state,
                            const std::vector<int>& keep) {
    require(!keep.empty(), "partial_trace: keep set must be nonempty");
    std::vector<bool> seen(state.n_modes(), false);
    for (int m : keep) {
        require(m >= 0 && m < state.n_modes(), "partial_trace: mode out of range");
        require(!seen[m], "partial_trace: duplicate mode");
        seen[m] = true;
    }
    const int nk = static_cast<int>(keep.size());
    Vector mean(2 * nk);
    Matrix cov(2 * nk, 2 * nk);
    for (int i = 0; i < nk; ++i) {
        mean[2 * i] = state.mean()[2 * keep[i]];
        mean[2 * i + 1] = state.mean()[2 * keep[i] + 1];
        for (int j = 0; j < nk; ++j)
            cov.block<2, 2>(2 * i, 2 * j) =
                state.cov().block<2, 2>(2 * keep[i], 2 * keep[j]);
    }
    return GaussianState(nk, std::move(mean), std::move(cov));
}

double quantum_mutual_information(const GaussianState& joint,
                                  const std::vector<int>& modes_a,
                                  const std::vector<int>& modes_b) {
    require(!modes_a.empty() && !modes_b.empty(),
            "quantum_mutual_information: empty split");
    std::vector<bool> seen(joint.n_modes(), false);
    for (const auto* part : {&modes_a, &modes_b})
        for (int m : *part) {
            require(m >= 0 && m < joint.n_modes(),
                    "quantum_mutual_information: mode out of range");
            require(!seen[m], "quantum_mutual_information: overlapping split");
            seen[m] = true;
        }
    require(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }),
            "quantum_mutual_information: split does not cover all modes");
    const double h_a = von_neumann_entropy(partial_trace(joint, modes_a));
    const double h_b = von_neumann_entropy(partial_trace(joint, modes_b));
    const double h_ab = von_neumann_entropy(joint);
    const double qmi = h_a + h_b - h_ab;
    require_domain(qmi >= -1e-9, "quantum_mutual_information: negative result");
    return std::max(qmi, 0.0);
}

GaussianState apply_gaussian_map(const GaussianState& state,
                                 const SymplecticMap& map) {
    require(map.n_modes() == state.n_modes(),
            "apply_gaussian_map: mode count mismatch");
    Vector mean = map.S() * state.mean() + map.d();
    Matrix cov = map.S() * state.cov() * map.S().transpose();
    cov = ((cov + cov.transpose()) / 2.0).eval();
    return GaussianState(state.n_modes(), std::move(mean), std::move(cov));
}

SymplecticMap single_mode_squeezer(const SqueezeParam& zeta) {
    require(zeta.admissible(), "single_mode_squeezer: cap violation");
    const double ch = std::cosh(zeta.s), sh = std::sinh(zeta.s);
    const double c = std::cos(zeta.theta), sn = std::sin(zeta.theta);
    Matrix S(2, 2);
    S << ch - sh * c, -sh * sn, -sh * sn, ch + sh * c;
    return SymplecticMap(S, Vector::Zero(2));
}

SymplecticMap two_mode_squeezer(const SqueezeParam& zeta) {
    require(zeta.admissible(), "two_mode_squeezer: cap violation");
    const double ch = std::cosh(zeta.s), sh = std::sinh(zeta.s);
    const double c = std::cos(zeta.theta), sn = std::sin(zeta.theta);
    Eigen::Matrix2d R;
    R << c, sn, sn, -c;
    Matrix S = Matrix::Zero(4, 4);
    S.block<2, 2>(0, 0) = ch * Eigen::Matrix2d::Identity();
    S.block<2, 2>(2, 2) = ch * Eigen::Matrix2d::Identity();
    S.block<2, 2>(0, 2) = sh * R;
    S.block<2, 2>(2, 0) = sh * R;
    return SymplecticMap(S, Vector::Zero(4));
}

SymplecticMap phase_shift(double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    Matrix S(2, 2);
    S << c, s, -s, c;
    return SymplecticMap(S, Vector::Zero(2));
}

SymplecticMap beam_splitter(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    Matrix S = Matrix::Zero(4, 4);
    S.block<2, 2>(0, 0) = c * Eigen::Matrix2d::Identity();
    S.block<2, 2>(2, 2) = c * Eigen::Matrix2d::Identity();
    S.block<2, 2>(0, 2) = s * Eigen::Matrix2d::Identity();
    S.block<2, 2>(2, 0) = -s * Eigen::Matrix2d::Identity();
    return SymplecticMap(S, Vector::Zero(4));
}

SymplecticMap embed_map(const SymplecticMap& map, int n_total,
                        const std::vector<int>& modes) {
    require(static_cast<int>(modes.size()) == map.n_modes(),
            "embed_map: mode list size mismatch");
    std::vector<bool> seen(n_total, false);
    for (int m : modes) {
        require(m >= 0 && m < n_total, "embed_map: mode out of range");
        require(!seen[m], "embed_map: duplicate mode");
        seen[m] = true;
    }
    Matrix S = Matrix::Identity(2 * n_total, 2 * n_total);
    Vector d = Vector::Zero(2 * n_total);
    const int nm = map.n_modes();
    for (int i = 0; i < nm; ++i) {
        d.segment<2>(2 * modes[i]) = map.d().segment<2>(2 * i);
        for (int j = 0; j < nm; ++j)
            S.block<2, 2>(2 * modes[i], 2 * modes[j]) =
                map.S().block<2, 2>(2 * i, 2 * j);
    }
    return SymplecticMap(S, std::move(d));
}

GaussianState tmsv_state(const SqueezeParam& zeta) {
    return apply_gaussian_map(GaussianState::vacuum(2), two_mode_squeezer(zeta));
}

WilliamsonDecomposition williamson_decomposition(const Matrix& V) {
    check_square_even(V, "williamson_decomposition: V must be square, even dim");
    check_symmetric(V, kSymmetryTol * std::max(1.0, max_abs(V)));
    const int n = static_cast<int>(V.rows()) / 2;
    Eigen::SelfAdjointEigenSolver<Matrix> es(V);
    require_domain(es.eigenvalues().minCoeff() > 0.0,
                   "williamson_decomposition: V must be positive definite");
    const Matrix root = es.operatorSqrt();
    const Matrix root_inv = es.operatorInverseSqrt();
    // Antisymmetric kernel; its canonical form carries 1/nu_k.
    Matrix A = root_inv * symplectic_form(n) * root_inv;
    A = ((A - A.transpose()) / 2.0).eval();
    Eigen::RealSchur<Matrix> schur(A);
    Matrix Q = schur.matrixU();
    const Matrix& T = schur.matrixT();

    std::vector<std::pair<double, int>> blocks(n); // (nu_k, block index)
    for (int k = 0; k < n; ++k) {
        double t = T(2 * k, 2 * k + 1);
        if (t < 0.0) {
            Q.col(2 * k).swap(Q.col(2 * k + 1));
            t = -t;
        }
        require_domain(t > 0.0, "williamson_decomposition: degenerate Schur block");
        blocks[k] = {1.0 / t, k};
    }
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    Matrix Qs(2 * n, 2 * n);
    Vector nu(n);
    for (int k = 0; k < n; ++k) {
        nu[k] = blocks[k].first;
        Qs.col(2 * k) = Q.col(2 * blocks[k].second);
        Qs.col(2 * k + 1) = Q.col(2 * blocks[k].second + 1);
    }
    Matrix f_inv = Matrix::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
        const double r = 1.0 / std::sqrt(nu[k]);
        f_inv(2 * k, 2 * k) = r;
        f_inv(2 * k + 1, 2 * k + 1) = r;
    }
    Matrix S = root * Qs * f_inv;
    return {SymplecticMap(std::move(S), Vector::Zero(2 * n)), std::move(nu)};
}

} // namespace cvqss
