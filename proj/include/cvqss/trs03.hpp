#pragma once

#include <cstdint>
#include <vector>

#include "cvqss/gaussian.hpp"

namespace cvqss::trs03 {

// (k, 2k-1)-threshold scheme parameters: k collaborators suffice, `a` is the
// ancilla squeezing scale, zeta_mag the magnitude of the dealer's TMSV.
struct Trs03Params {
    int k;
    double a;
    double zeta_mag;

    Trs03Params(int k_, double a_, double zeta_mag_);
    int n_players() const { return 2 * k - 1; }
};

// Rows are the encoded coordinate functions g_i expanded over the f_j basis.
struct EncodingMatrix {
    Matrix g;
};

// Rows are the post-decoding coordinate functions xi_i, in the relabeled
// frame where the collaborating subset occupies the first k slots. `subset`
// holds the collaborating player indices in the original labeling.
struct DecodingMatrix {
    Matrix xi;
    std::vector<int> subset;
};

struct LeakageCoefficients {
    double u2 = 1.0;
    double v2 = 1.0;
};

// True iff every k-subset of {f_1, iota_1, ..., iota_{2k-1}} has full rank,
// where iota_i is the projection of g_i onto span{f_1,...,f_{2k-1}}. A family
// counts as independent when sigma_min / sigma_max >= 1e-9. Exhaustive for
// small k, 10^4 sampled subsets otherwise.
bool check_access_independence(const Matrix& g, const Trs03Params& params);

// Seeded random Gaussian candidates, Vandermonde fallback; the first matrix
// passing the access condition wins. Deterministic for a fixed seed.
EncodingMatrix build_encoding(const Trs03Params& params, std::uint64_t seed);

// Decoding transformation for a collaborating subset of >= k players (the
// first k of them act). Rows outside the subset stay equal to g's rows; the
// acting rows satisfy alpha_1 = 1, beta_1 = 0, alpha_{i+1} = alpha_{k+i},
// beta_{i+1} = beta_{k+i} with residuals <= 1e-10.
DecodingMatrix build_decoding(const EncodingMatrix& g, std::vector<int> subset,
                              const Trs03Params& params);

// v2 = |gamma_1|^2 (the Z-components of the extracted row) and u2 = |u|^2
// where u solves alpha_j = sum_i u_i beta_{ij} in least squares.
LeakageCoefficients leakage_coefficients(const DecodingMatrix& d,
                                         const Trs03Params& params);

// Closed-form 4x4 covariance of (extracted secret, reference), assembled from
// the Wigner-function coefficients; q-p cross entries vanish identically.
Matrix analytic_joint_covariance(double zeta_mag, double a,
                                 const LeakageCoefficients& coef);

// QMI of the closed-form joint covariance under the {secret}|{reference}
// split, via the two-mode symplectic eigenvalues.
double extracted_secret_qmi(double zeta_mag, double a,
                            const LeakageCoefficients& coef);

// Exact three-way classification: 2 if qmi >= I_T_A, 0 if qmi <= I_T_F,
// else 1 (intermediate).
int classify_exact(double qmi, double I_T_F, double I_T_A);

struct CurvePoint {
    double ln_a;
    double qmi_bits;
};

std::vector<CurvePoint> qmi_curve(double zeta_mag,
                                  const std::vector<double>& a_grid,
                                  const LeakageCoefficients& coef);

// Full-scheme simulation at the covariance level. The dealer's TMSV entangles
// the secret coordinate with a reference mode; shares pass through the
// encoding and (for subsets of >= k players) the decoding. Mode 0 of the
// result is the reconstructed share, mode 1 the reference.
GaussianState decoded_joint_state(const Trs03Params& params,
                                  const EncodingMatrix& g,
                                  const std::vector<int>& subset);

// Joint (share, reference) state available to a sub-threshold subset: its
// first member's share, unprocessed.
GaussianState subset_joint_state(const Trs03Params& params,
                                 const EncodingMatrix& g,
                                 const std::vector<int>& subset);

} // namespace cvqss::trs03
