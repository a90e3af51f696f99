#pragma once

// Dormand-Prince 5(4) with step-size control and the continuous extension of order 4.
// The state may be real or complex; the independent variable is always real (complex
// paths are parametrized by a real variable by the caller).

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "superint/error.hpp"

namespace superint {

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_initial = 0.0;  // 0 = automatic
    double h_min = 1e-14;    // relative to the span |t_end - t0| at construction
    double h_max = std::numeric_limits<double>::infinity();
    long max_steps = 1000000;
};

template <class Scalar>
class Dopri5 {
public:
    using State = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    /// `rhs(t, y)` returns dy/dt. Integrates from t0 towards t_end (either direction).
    template <class F>
    Dopri5(F rhs, double t0, State y0, double t_end, OdeOptions options = {})
        : rhs_(std::move(rhs)), t_(t0), t_prev_(t0), y_(std::move(y0)), t_end_(t_end), opt_(options) {
        dir_ = t_end >= t0 ? 1.0 : -1.0;
        span_ = std::max(std::abs(t_end - t0), 1e-300);
        k1_ = rhs_(t_, y_);
        h_ = opt_.h_initial > 0.0 ? opt_.h_initial : initial_step();
    }

    double t() const noexcept { return t_; }
    double t_prev() const noexcept { return t_prev_; }
    const State& y() const noexcept { return y_; }
    const State& dy() const noexcept { return k1_; }
    bool done() const noexcept { return dir_ * (t_end_ - t_) <= 0.0; }
    long steps() const noexcept { return accepted_; }

    /// One accepted step (never past t_end). Throws IntegrationError on step underflow,
    /// a non-finite state, or the step budget.
    void step() {
        if (done()) return;
        for (;;) {
            if (accepted_ + rejected_ >= opt_.max_steps) throw IntegrationError("ODE step budget exhausted");
            double h = std::min(h_, opt_.h_max);
            const double remaining = std::abs(t_end_ - t_);
            bool last = false;
            if (h >= remaining) {
                h = remaining;
                last = true;
            }
            if (h < opt_.h_min * span_) throw IntegrationError("ODE step size underflow at t = " + std::to_string(t_));
            const double hs = dir_ * h;
            const State k2 = rhs_(t_ + c2 * hs, y_ + hs * (a21 * k1_));
            const State k3 = rhs_(t_ + c3 * hs, y_ + hs * (a31 * k1_ + a32 * k2));
            const State k4 = rhs_(t_ + c4 * hs, y_ + hs * (a41 * k1_ + a42 * k2 + a43 * k3));
            const State k5 = rhs_(t_ + c5 * hs, y_ + hs * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4));
            const State k6 =
                rhs_(t_ + hs, y_ + hs * (a61 * k1_ + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const State y_new = y_ + hs * (a71 * k1_ + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
            const State k7 = rhs_(t_ + hs, y_new);
            const State err = hs * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            double acc = 0.0;
            bool finite = true;
            for (Eigen::Index i = 0; i < y_.size(); ++i) {
                const double sc = opt_.atol + opt_.rtol * std::max(std::abs(y_(i)), std::abs(y_new(i)));
                const double e = std::abs(err(i)) / sc;
                if (!std::isfinite(e) || !std::isfinite(std::abs(y_new(i)))) finite = false;
                acc += e * e;
            }
            const double en = finite ? std::sqrt(acc / static_cast<double>(y_.size())) : 1e10;
            if (en <= 1.0) {
                const State dense_mid = hs * (d1 * k1_ + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                r1_ = y_;
                r2_ = y_new - y_;
                r3_ = hs * k1_ - r2_;
                r4_ = r2_ - hs * k7 - r3_;
                r5_ = dense_mid;
                t_prev_ = t_;
                t_ = last ? t_end_ : t_ + hs;
                h_last_ = hs;
                y_ = y_new;
                k1_ = k7;
                ++accepted_;
                h_ = h * std::clamp(0.9 * std::pow(std::max(en, 1e-10), -0.2), 0.2, 10.0);
                return;
            }
            ++rejected_;
            h_ = h * std::clamp(0.9 * std::pow(en, -0.2), 0.2, 0.9);
        }
    }

    /// Continuous extension on the last accepted step, t between t_prev() and t().
    State dense(double t) const {
        if (accepted_ == 0) return y_;
        const double th = (t - t_prev_) / h_last_;
        const double th1 = 1.0 - th;
        return r1_ + th * (r2_ + th1 * (r3_ + th * (r4_ + th1 * r5_)));
    }

    /// Integrate to t_end.
    const State& run() {
        while (!done()) step();
        return y_;
    }

private:
    double initial_step() {
        const double d0 = y_.norm();
        const double d1n = k1_.norm();
        double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        h0 = std::min(h0, span_);
        const State y1 = y_ + (dir_ * h0) * k1_;
        const State f1 = rhs_(t_ + dir_ * h0, y1);
        const double d2 = (f1 - k1_).norm() / h0;
        const double m = std::max(d1n, d2);
        const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 0.2);
        return std::min({100.0 * h0, h1, span_});
    }

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                            a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    std::function<State(double, const State&)> rhs_;
    double t_, t_prev_;
    State y_, k1_;
    double t_end_;
    OdeOptions opt_;
    double dir_ = 1.0, span_ = 1.0, h_ = 0.0, h_last_ = 1.0;
    long accepted_ = 0, rejected_ = 0;
    State r1_, r2_, r3_, r4_, r5_;
};

}  // namespace superint
