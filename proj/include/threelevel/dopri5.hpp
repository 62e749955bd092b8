#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta stepper with proportional-integral
// step-size control and the method's fourth-order continuous extension for
// dense output, over a fixed-size real state vector.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace threelevel {

// Thrown from an ODE right-hand side to signal that a trial point is not
// admissible. The stepper shrinks the step and retries.
struct InadmissiblePoint : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StepUnderflow : std::runtime_error {
    StepUnderflow(double t, double h)
        : std::runtime_error("step size underflow at t = " + std::to_string(t) +
                             " (h = " + std::to_string(h) + ")"),
          time(t),
          step(h) {}
    double time;
    double step;
};

template <std::size_t N>
class DormandPrince {
public:
    using State = std::array<double, N>;

    struct Options {
        double atol = 1e-10;
        double rtol = 1e-10;
        double h_max = std::numeric_limits<double>::infinity();
        double safety = 0.9;
        double fac_min = 0.2;
        double fac_max = 10.0;
        // PI controller exponents (Hairer/Wanner DOPRI5 defaults).
        double alpha = 0.7 / 5.0;
        double beta = 0.04;
        std::size_t max_steps = 50'000'000;
    };

    struct Step {
        double t0, t1;
        State y0, y1;
        // Continuous-extension coefficients (Hairer, Norsett & Wanner, II.6).
        State r3, r4, r5;

        State at(double t) const {
            const double s = (t - t0) / (t1 - t0);
            const double s1 = 1.0 - s;
            State y;
            for (std::size_t i = 0; i < N; ++i)
                y[i] = y0[i] + s * ((y1[i] - y0[i]) + s1 * (r3[i] + s * (r4[i] + s1 * r5[i])));
            return y;
        }
    };

    explicit DormandPrince(Options opt) : opt_(opt) {}

    std::size_t accepted() const { return n_accepted_; }
    std::size_t rejected() const { return n_rejected_; }
    std::size_t evaluations() const { return n_eval_; }

    // Integrates y' = f(t, y) from t0 to t1, calling on_step(step) after every
    // accepted step. f may throw InadmissiblePoint at trial points; if it
    // throws at the current accepted point the exception propagates.
    template <class F, class OnStep>
    State integrate(F&& f, double t0, double t1, State y, OnStep&& on_step) {
        State k1 = eval(f, t0, y);
        double h = initial_step(f, t0, t1, y, k1);
        double err_old = 1e-4;
        double t = t0;
        bool last_rejected = false;
        std::size_t steps = 0;
        while (t < t1) {
            if (t + 1.01 * h >= t1) h = t1 - t;
            if (h <= 1e-14 * std::max(1.0, std::abs(t)) || ++steps > opt_.max_steps)
                throw StepUnderflow(t, h);

            State y_new, k7, y_err, dense;
            bool admissible = true;
            try {
                attempt(f, t, h, y, k1, y_new, k7, y_err, dense);
            } catch (const InadmissiblePoint&) {
                admissible = false;
            }
            if (!admissible) {
                ++n_rejected_;
                h *= 0.25;
                last_rejected = true;
                continue;
            }

            const double err = error_norm(y, y_new, y_err);
            if (std::isfinite(err) && err <= 1.0) {
                ++n_accepted_;
                double fac = std::pow(std::max(err, 1e-16), -opt_.alpha) *
                             std::pow(err_old, opt_.beta);
                fac = std::clamp(opt_.safety * fac, opt_.fac_min, opt_.fac_max);
                if (last_rejected) fac = std::min(fac, 1.0);
                err_old = std::max(err, 1e-4);
                const double t_next = (h == t1 - t) ? t1 : t + h;
                Step step{t, t_next, y, y_new, {}, {}, dense};
                for (std::size_t i = 0; i < N; ++i) {
                    const double dy = y_new[i] - y[i];
                    step.r3[i] = h * k1[i] - dy;
                    step.r4[i] = dy - h * k7[i] - step.r3[i];
                }
                t = t_next;
                y = y_new;
                k1 = k7;
                on_step(step);
                h = std::min(h * fac, opt_.h_max);
                last_rejected = false;
            } else {
                ++n_rejected_;
                h *= std::isfinite(err)
                         ? std::max(opt_.fac_min, opt_.safety * std::pow(err, -0.2))
                         : opt_.fac_min;
                last_rejected = true;
            }
        }
        return y;
    }

private:
    template <class F>
    State eval(F& f, double t, const State& y) {
        ++n_eval_;
        return f(t, y);
    }

    template <class F>
    double initial_step(F& f, double t0, double t1, const State& y0, const State& f0) {
        double d0 = 0, d1 = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = opt_.atol + opt_.rtol * std::abs(y0[i]);
            d0 += (y0[i] / sc) * (y0[i] / sc);
            d1 += (f0[i] / sc) * (f0[i] / sc);
        }
        d0 = std::sqrt(d0 / N);
        d1 = std::sqrt(d1 / N);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min({h0, t1 - t0, opt_.h_max});
        State y1;
        for (std::size_t i = 0; i < N; ++i) y1[i] = y0[i] + h0 * f0[i];
        double d2 = 0;
        try {
            const State f1 = eval(f, t0 + h0, y1);
            for (std::size_t i = 0; i < N; ++i) {
                const double sc = opt_.atol + opt_.rtol * std::abs(y0[i]);
                d2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
            }
            d2 = std::sqrt(d2 / N) / h0;
        } catch (const InadmissiblePoint&) {
            return h0 * 1e-2;
        }
        const double d = std::max(d1, d2);
        const double h1 = d <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / d, 0.2);
        return std::min({100 * h0, h1, t1 - t0, opt_.h_max});
    }

    // Largest scaled component, so every component meets its own tolerance.
    double error_norm(const State& y0, const State& y1, const State& e) const {
        double worst = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc =
                opt_.atol + opt_.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
            const double r = std::abs(e[i]) / sc;
            if (!(r <= worst)) worst = r;  // propagates NaN
        }
        return worst;
    }

    template <class F>
    void attempt(F& f, double t, double h, const State& y, const State& k1, State& y_new,
                 State& k7, State& y_err, State& dense) {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                                a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                                a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double d1 = -12715105075.0 / 11282082432.0,
                                d3 = 87487479700.0 / 32700410799.0,
                                d4 = -10690763975.0 / 1880347072.0,
                                d5 = 701980252875.0 / 199316789632.0,
                                d6 = -1453857185.0 / 822651844.0,
                                d7 = 69997945.0 / 29380423.0;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        State tmp;
        auto stage = [&](auto&& combine) -> const State& {
            for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * combine(i);
            return tmp;
        };
        const State k2 = eval(f, t + c2 * h, stage([&](std::size_t i) { return a21 * k1[i]; }));
        const State k3 = eval(f, t + c3 * h, stage([&](std::size_t i) {
                                  return a31 * k1[i] + a32 * k2[i];
                              }));
        const State k4 = eval(f, t + c4 * h, stage([&](std::size_t i) {
                                  return a41 * k1[i] + a42 * k2[i] + a43 * k3[i];
                              }));
        const State k5 = eval(f, t + c5 * h, stage([&](std::size_t i) {
                                  return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i];
                              }));
        const State k6 = eval(f, t + h, stage([&](std::size_t i) {
                                  return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                         a64 * k4[i] + a65 * k5[i];
                              }));
        for (std::size_t i = 0; i < N; ++i)
            y_new[i] =
                y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        k7 = eval(f, t + h, y_new);
        for (std::size_t i = 0; i < N; ++i)
            y_err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
        for (std::size_t i = 0; i < N; ++i)
            dense[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                            d7 * k7[i]);
    }

    Options opt_;
    std::size_t n_accepted_ = 0;
    std::size_t n_rejected_ = 0;
    std::size_t n_eval_ = 0;
};

}  // namespace threelevel
