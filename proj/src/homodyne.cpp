#include "cvqss/homodyne.hpp"

#include <stdexcept>

namespace cvqss {

std::pair<HomodyneOutcome, GaussianState> homodyne_measure(
    const GaussianState& state, int mode, double theta, RngStream& rng) {
    const int n = state.n_modes();
    if (mode < 0 || mode >= n)
        throw std::invalid_argument("homodyne_measure: mode out of range");

    const double c = std::cos(theta), s = std::sin(theta);
    const int q = 2 * mode, p = 2 * mode + 1;
    const Matrix& V = state.cov();
    const Vector& mu = state.mean();

    const double mu_th = c * mu[q] + s * mu[p];
    const double var_th =
        c * c * V(q, q) + 2.0 * c * s * V(q, p) + s * s * V(p, p);
    const double x = mu_th + std::sqrt(std::max(var_th, 0.0)) * rng.normal();

    // Remaining modes conditioned on r_theta = x; the measured mode (and with
    // it the conjugate quadrature's information) is dropped.
    std::vector<int> rest;
    rest.reserve(n - 1);
    for (int m = 0; m < n; ++m)
        if (m != mode) rest.push_back(m);

    const int nr = n - 1;
    Vector mean_r(2 * nr);
    Matrix cov_r(2 * nr, 2 * nr);
    Vector cross(2 * nr);
    for (int i = 0; i < nr; ++i) {
        const int a = 2 * rest[i];
        mean_r.segment<2>(2 * i) = mu.segment<2>(a);
        cross[2 * i] = c * V(a, q) + s * V(a, p);
        cross[2 * i + 1] = c * V(a + 1, q) + s * V(a + 1, p);
        for (int j = 0; j < nr; ++j)
            cov_r.block<2, 2>(2 * i, 2 * j) = V.block<2, 2>(a, 2 * rest[j]);
    }
    const double inv_var = 1.0 / std::max(var_th, 1e-300);
    mean_r += cross * ((x - mu_th) * inv_var);
    cov_r -= cross * cross.transpose() * inv_var;

    return {HomodyneOutcome{x, mode, theta},
            GaussianState(nr, std::move(mean_r), std::move(cov_r))};
}

TwoModeState to_two_mode(const GaussianState& state) {
    if (state.n_modes() != 2)
        throw std::invalid_argument("to_two_mode: state must have two modes");
    TwoModeState st;
    st.mean = state.mean();
    st.cov = state.cov();
    return st;
}

} // namespace cvqss
