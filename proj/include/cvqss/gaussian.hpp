#pragma once

#include <Eigen/Dense>
#include <limits>
#include <utility>
#include <vector>

namespace cvqss {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Tolerances used by the covariance-matrix algebra. Covariances are in the
// vacuum-normalized convention: cov(vacuum) = I, so pure modes have nu = 1.
inline constexpr double kSymmetryTol = 1e-10;
inline constexpr double kSymplecticTol = 1e-9;
inline constexpr double kPhysicalityTol = 1e-9;

// Block-diagonal direct sum of n copies of [[0,1],[-1,0]].
Matrix symplectic_form(int n_modes);

// max-norm test of S * Omega * S^T == Omega.
bool is_symplectic(const Matrix& S, double tol = kSymplecticTol);

// Affine phase-space map x -> S x + d with S symplectic.
class SymplecticMap {
public:
    SymplecticMap(Matrix S, Vector d);
    explicit SymplecticMap(Matrix S);

    static SymplecticMap identity(int n_modes);
    static SymplecticMap displacement(Vector d);
    // Linear canonical point transformation: q -> L q, p -> L^{-T} p.
    static SymplecticMap point_transform(const Matrix& L);

    const Matrix& S() const { return S_; }
    const Vector& d() const { return d_; }
    int n_modes() const { return static_cast<int>(S_.rows()) / 2; }

    // Composition: (*this) after other.
    SymplecticMap after(const SymplecticMap& other) const;

private:
    Matrix S_;
    Vector d_;
};

// Squeezing parameter zeta = s e^{i theta} with a device cap: admissible
// when |zeta| <= cap^2.
struct SqueezeParam {
    double s = 0.0;
    double theta = 0.0;
    double cap = std::numeric_limits<double>::infinity();

    SqueezeParam() = default;
    SqueezeParam(double s_, double theta_,
                 double cap_ = std::numeric_limits<double>::infinity());

    bool admissible() const { return s <= cap * cap; }
};

class ProbabilityVector {
public:
    explicit ProbabilityVector(Vector p);
    const Vector& p() const { return p_; }

private:
    Vector p_;
};

// Gaussian state of n modes: mean vector (length 2n, ordering q1,p1,...)
// and a symmetric, physical covariance matrix.
class GaussianState {
public:
    GaussianState(int n_modes, Vector mean, Matrix cov);

    static GaussianState vacuum(int n_modes);

    int n_modes() const { return n_modes_; }
    const Vector& mean() const { return mean_; }
    const Matrix& cov() const { return cov_; }

private:
    int n_modes_;
    Vector mean_;
    Matrix cov_;
};

// The n positive eigenvalue-moduli of i*Omega*V, descending.
Vector symplectic_spectrum(const Matrix& V);

// Closed-form two-mode spectrum from the 2x2 blocks of V = [[A,C],[C^T,B]]:
// nu_pm = sqrt((Delta +- sqrt(Delta^2 - 4 det V)) / 2),
// Delta = det A + det B + 2 det C.
std::pair<double, double> two_mode_symplectic_eigenvalues(
    const Eigen::Matrix2d& A, const Eigen::Matrix2d& B,
    const Eigen::Matrix2d& C);

// Single-mode entropy contribution g(nu) in bits, with nu+- = (nu +- 1)/2 and
// 0 log 0 := 0.
double entropy_g(double nu);

double von_neumann_entropy(const Matrix& V);
double von_neumann_entropy(const GaussianState& state);

double shannon_entropy(const ProbabilityVector& p);

GaussianState partial_trace(const GaussianState& state,
                            const std::vector<int>& keep);

// I(A;B) = H(A) + H(B) - H(AB); modes_a and modes_b must partition the modes.
double quantum_mutual_information(const GaussianState& joint,
                                  const std::vector<int>& modes_a,
                                  const std::vector<int>& modes_b);

GaussianState apply_gaussian_map(const GaussianState& state,
                                 const SymplecticMap& map);

SymplecticMap single_mode_squeezer(const SqueezeParam& zeta);
SymplecticMap two_mode_squeezer(const SqueezeParam& zeta);

// Passive elements (used to compose generic symplectics).
SymplecticMap phase_shift(double phi);
SymplecticMap beam_splitter(double theta);

// Embed an m-mode map into an n-mode system acting on the listed modes.
SymplecticMap embed_map(const SymplecticMap& map, int n_total,
                        const std::vector<int>& modes);

// Two-mode squeezed vacuum |zeta>_TMSV = S2(zeta)|0>.
GaussianState tmsv_state(const SqueezeParam& zeta);

struct WilliamsonDecomposition {
    SymplecticMap S;
    Vector nu; // descending
};

// V = S [ (+)_k nu_k I_2 ] S^T with S symplectic.
WilliamsonDecomposition williamson_decomposition(const Matrix& V);

} // namespace cvqss
