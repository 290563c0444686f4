// Test-side oracles, independent of the library's computation paths:
// seeded random physical states, a matrix-exponential route to the squeezer
// generators, and brute quadrature over the closed-form Wigner function.
#pragma once

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <vector>

#include "cvqss/gaussian.hpp"
#include "cvqss/rng.hpp"

namespace oracles {

using cvqss::Matrix;
using cvqss::Vector;

// Random symplectic built from elementary layers: per-mode phase shifts and
// squeezers, nearest-neighbour beam splitters.
inline cvqss::SymplecticMap random_symplectic(int n_modes, cvqss::RngStream& rng,
                                              double max_squeeze = 0.8) {
    auto map = cvqss::SymplecticMap::identity(n_modes);
    for (int layer = 0; layer < 2; ++layer) {
        for (int m = 0; m < n_modes; ++m) {
            const auto rot = cvqss::phase_shift(rng.uniform() * 6.283185307179586);
            map = cvqss::embed_map(rot, n_modes, {m}).after(map);
            const cvqss::SqueezeParam sq(rng.uniform() * max_squeeze,
                                         rng.uniform() * 6.283185307179586);
            map = cvqss::embed_map(cvqss::single_mode_squeezer(sq), n_modes, {m})
                      .after(map);
        }
        for (int m = 0; m + 1 < n_modes; ++m) {
            const auto bs = cvqss::beam_splitter(rng.uniform() * 6.283185307179586);
            map = cvqss::embed_map(bs, n_modes, {m, m + 1}).after(map);
        }
    }
    return map;
}

// Physical covariance with symplectic spectrum drawn from [nu_min, nu_max].
inline Matrix random_physical_cov(int n_modes, cvqss::RngStream& rng,
                                  double nu_min = 1.0, double nu_max = 4.0,
                                  double max_squeeze = 0.8) {
    Matrix d = Matrix::Zero(2 * n_modes, 2 * n_modes);
    for (int m = 0; m < n_modes; ++m) {
        const double nu = nu_min + rng.uniform() * (nu_max - nu_min);
        d(2 * m, 2 * m) = nu;
        d(2 * m + 1, 2 * m + 1) = nu;
    }
    const Matrix S = random_symplectic(n_modes, rng, max_squeeze).S();
    Matrix v = S * d * S.transpose();
    return ((v + v.transpose()) / 2.0).eval();
}

// exp(s K) for the squeezer generators, evaluated numerically.
inline Matrix expm(const Matrix& m) { return m.exp(); }

inline Matrix single_mode_generator(double s, double theta) {
    Matrix k(2, 2);
    k << -std::cos(theta), -std::sin(theta), -std::sin(theta), std::cos(theta);
    return s * k;
}

inline Matrix two_mode_generator(double s, double theta) {
    Eigen::Matrix2d r;
    r << std::cos(theta), std::sin(theta), std::sin(theta), -std::cos(theta);
    Matrix k = Matrix::Zero(4, 4);
    k.block<2, 2>(0, 2) = r;
    k.block<2, 2>(2, 0) = r;
    return s * k;
}

// Second moments of exp(c1 x^2 + c2 y^2 + c3 x y) by composite-Simpson tensor
// quadrature, on axes rotated 45 degrees so the near-degenerate large-|zeta|
// direction is axis-aligned. Returns <xx>, <xy>, <yy> of the normalized
// density (no linear-algebra inversion anywhere on this path).
struct QuadMoments {
    double xx, xy, yy;
};

inline QuadMoments gaussian_moments_quadrature(double c1, double c2, double c3,
                                               int n_nodes = 1536) {
    // exponent in rotated coordinates u=(x+y)/sqrt2, w=(x-y)/sqrt2:
    // a_u u^2 + a_w w^2 + a_uw u w
    const double a_u = (c1 + c2 + c3) / 2.0;
    const double a_w = (c1 + c2 - c3) / 2.0;
    const double a_uw = c1 - c2;
    const double su = 1.0 / std::sqrt(-2.0 * a_u);
    const double sw = 1.0 / std::sqrt(-2.0 * a_w);
    // conservative half-widths; the residual u-w coupling is mild by design
    const double lu = 10.0 * su / std::sqrt(1.0 - 0.99 * std::min(
        1.0, a_uw * a_uw / (4.0 * a_u * a_w)));
    const double lw = 10.0 * sw / std::sqrt(1.0 - 0.99 * std::min(
        1.0, a_uw * a_uw / (4.0 * a_u * a_w)));

    const int n = n_nodes | 1; // odd node count for Simpson
    const double hu = 2.0 * lu / (n - 1);
    const double hw = 2.0 * lw / (n - 1);
    auto weight = [n](int i) {
        if (i == 0 || i == n - 1) return 1.0;
        return (i % 2 == 1) ? 4.0 : 2.0;
    };
    double z = 0.0, muu = 0.0, mww = 0.0, muw = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = -lu + hu * i;
        const double wi = weight(i);
        double zrow = 0.0, m_ww_row = 0.0, m_uw_row = 0.0;
        for (int j = 0; j < n; ++j) {
            const double w = -lw + hw * j;
            const double f = weight(j) * std::exp(a_u * u * u + a_w * w * w +
                                                  a_uw * u * w);
            zrow += f;
            m_ww_row += f * w * w;
            m_uw_row += f * w;
        }
        z += wi * zrow;
        muu += wi * zrow * u * u;
        mww += wi * m_ww_row;
        muw += wi * m_uw_row * u;
    }
    const double inv_z = 1.0 / z;
    const double uu = muu * inv_z, ww = mww * inv_z, uw = muw * inv_z;
    // back to original axes
    QuadMoments q{};
    q.xx = (uu + ww + 2.0 * uw) / 2.0;
    q.yy = (uu + ww - 2.0 * uw) / 2.0;
    q.xy = (uu - ww) / 2.0;
    return q;
}

} // namespace oracles
