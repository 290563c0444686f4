#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cvqss/gaussian.hpp"
#include "cvqss/rng.hpp"

namespace cvqss {

struct HomodyneOutcome {
    double value = 0.0;
    int mode = 0;
    double theta = 0.0;
};

// Homodyne detection of the rotated quadrature r_theta = q cos(theta) +
// p sin(theta) of one mode. The outcome is drawn from the Gaussian marginal;
// the returned state is the remaining modes conditioned on the outcome, with
// the measured mode removed.
std::pair<HomodyneOutcome, GaussianState> homodyne_measure(
    const GaussianState& state, int mode, double theta, RngStream& rng);

// Fixed-size two-mode state for the measurement schedule's hot path.
struct TwoModeState {
    Eigen::Vector4d mean = Eigen::Vector4d::Zero();
    Eigen::Matrix4d cov = Eigen::Matrix4d::Identity();
};

TwoModeState to_two_mode(const GaussianState& state);

// Accumulators for the 14-slot schedule. All sums; normalization happens at
// estimation time. Merging is plain addition, so partial schedules from
// independent streams can be combined in any order.
struct RunningMoments {
    Eigen::Vector4d hom_result = Eigen::Vector4d::Zero();
    Eigen::Matrix4d second_mom = Eigen::Matrix4d::Zero();
    std::int64_t l = 0;

    void merge(const RunningMoments& other) {
        hom_result += other.hom_result;
        second_mom += other.second_mom;
        l += other.l;
    }
};

struct RawOutcome {
    std::int64_t cycle;
    int slot; // 1..14
    int mode;
    double theta;
    double value;
};

namespace detail {

inline double marginal_draw(const TwoModeState& st, int mode, double c,
                            double s, RngStream& rng) {
    const int q = 2 * mode, p = 2 * mode + 1;
    const double mu = c * st.mean[q] + s * st.mean[p];
    const double var = c * c * st.cov(q, q) + 2.0 * c * s * st.cov(q, p) +
                       s * s * st.cov(p, p);
    return mu + std::sqrt(std::max(var, 0.0)) * rng.normal();
}

// Measure mode 0's rotated quadrature and condition mode 1 on the outcome.
inline double draw_and_condition(TwoModeState& st, double c, double s,
                                 RngStream& rng) {
    const double mu = c * st.mean[0] + s * st.mean[1];
    const double var = c * c * st.cov(0, 0) + 2.0 * c * s * st.cov(0, 1) +
                       s * s * st.cov(1, 1);
    const double x = mu + std::sqrt(std::max(var, 0.0)) * rng.normal();
    const Eigen::Vector2d cross(c * st.cov(0, 2) + s * st.cov(1, 2),
                                c * st.cov(0, 3) + s * st.cov(1, 3));
    const double inv_var = 1.0 / std::max(var, 1e-300);
    st.mean.segment<2>(2) += cross * ((x - mu) * inv_var);
    st.cov.block<2, 2>(2, 2) -= cross * cross.transpose() * inv_var;
    return x;
}

} // namespace detail

// One full cycle of Algorithm-3's 14-slot round robin. Slots 1-4 accumulate
// first moments, 5/8/11/12 diagonal second moments, 6/7/9/10 sequential
// cross-mode products (second measurement on the conditioned copy), 13/14 the
// pi/4-rotated quadratures used for the same-mode symmetrized cross terms.
template <class Factory>
void run_schedule_cycle(RunningMoments& m, Factory&& fresh_copy, RngStream& rng,
                        std::vector<RawOutcome>* dump = nullptr) {
    constexpr double kInvSqrt2 = 0.70710678118654752440;
    const std::int64_t cyc = m.l;
    auto record = [&](int slot, int mode, double theta, double value) {
        if (dump) dump->push_back({cyc, slot, mode, theta, value});
    };
    double x, y;
    constexpr double kPi2 = 1.5707963267948966;
    constexpr double kPi4 = 0.7853981633974483;

    { TwoModeState st = fresh_copy();
      x = detail::marginal_draw(st, 0, 1.0, 0.0, rng);
      m.hom_result[0] += x; record(1, 0, 0.0, x); }
    { TwoModeState st = fresh_copy();
      x = detail::marginal_draw(st, 0, 0.0, 1.0, rng);
      m.hom_result[1] += x; record(2, 0, kPi2, x); }
    { TwoModeState st = fresh_copy();
      x = detail::marginal_draw(st, 1, 1.0, 0.0, rng);
      m.hom_result[2] += x; record(3, 1, 0.0, x); }
    { TwoModeState st = fresh_copy();
      x = detail::marginal_draw(st, 1, 0.0, 1.0, rng);
      m.hom_result[3] += x; record(4, 1, kPi2, x); }

    { TwoModeState st = fresh_copy();
      x = detail::marginal_draw(st, 0, 1.0, 0.0, rng);
      m.second_mom(0, 0) += x * x; record(5, 0, 0.0, x); }
    { TwoModeState st = fresh_copy();
      y = detail::draw_and_condition(st, 1.0, 0.0, rng); record(6, 0, 0.0, y);
      x = detail::marginal_draw(st, 1, 1.0, 0.0, rng); record(6, 1, 0.0, x);
      m.second_mom(0, 2) += x * y; }
    { TwoModeState st = fresh_copy();
      y = detail::draw_and_condition(st, 1.0, 0.0, rng); record(7, 0, 0.0, y);
      x = detail::marginal_draw(st, 1, 0.0, 1.0, rng); record(7, 1, kPi2, x);
      m.second_mom(0, 3) += x * y; }
    { TwoModeState st = fresh_copy();
      x = detail::marginal_draw(st, 0, 0.0, 1.0, rng);
      m.second_mom(1, 1) += x * x; record(8, 0, kPi2, x); }
    { TwoModeState st = fresh_copy();
      y = detail::draw_and_condition(st, 0.0, 1.0, rng); record(9, 0, kPi2, y);
      x = detail::marginal_draw(st, 1, 1.0, 0.0, rng); record(9, 1, 0.0, x);
      m.second_mom(1, 2) += x * y; }
    { TwoModeState st = fresh_copy();
      y = detail::draw_and_condition(st, 0.0, 1.0, rng); record(10, 0, kPi2, y);
      x = detail::marginal_draw(st, 1, 0.0, 1.0, rng); record(10, 1, kPi2, x);
      m.second_mom(1, 3) += x * y; }
    { TwoModeState st = fresh_copy();
      x = detail::marginal_draw(st, 1, 1.0, 0.0, rng);
      m.second_mom(2, 2) += x * x; record(11, 1, 0.0, x); }
    { TwoModeState st = fresh_copy();
      x = detail::marginal_draw(st, 1, 0.0, 1.0, rng);
      m.second_mom(3, 3) += x * x; record(12, 1, kPi2, x); }
    { TwoModeState st = fresh_copy();
      x = detail::marginal_draw(st, 0, kInvSqrt2, kInvSqrt2, rng);
      m.second_mom(0, 1) += x * x; record(13, 0, kPi4, x); }
    { TwoModeState st = fresh_copy();
      x = detail::marginal_draw(st, 1, kInvSqrt2, kInvSqrt2, rng);
      m.second_mom(2, 3) += x * x; record(14, 1, kPi4, x); }

    m.l += 1;
}

inline constexpr int kCopiesPerCycle = 14;

// Runs the schedule for a fixed number of cycles on iid fresh copies.
template <class Factory>
RunningMoments run_schedule(Factory&& fresh_copy, std::int64_t cycles,
                            RngStream& rng,
                            std::vector<RawOutcome>* dump = nullptr) {
    if (cycles < 1)
        throw std::invalid_argument("run_schedule: cycles must be >= 1");
    RunningMoments m;
    for (std::int64_t i = 0; i < cycles; ++i)
        run_schedule_cycle(m, fresh_copy, rng, dump);
    return m;
}

} // namespace cvqss
