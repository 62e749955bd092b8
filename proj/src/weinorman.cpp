#include "threelevel/weinorman.hpp"

#include <cmath>
#include <limits>

namespace threelevel {

namespace {

bool is_diagonal_generator(GeneratorId id) {
    return id == GeneratorId::A3 || id == GeneratorId::C3;
}

Complex mu_of(const MuState& s, int one_based) { return s.mu[static_cast<std::size_t>(one_based - 1)]; }

constexpr std::size_t kReal = 9;
using PackedState = std::array<double, 2 * kReal>;

PackedState pack(const MuState& s) {
    PackedState y{};
    for (std::size_t k = 0; k < 8; ++k) {
        y[k] = s.mu[k].real();
        y[k + kReal] = s.mu[k].imag();
    }
    y[8] = s.delta.real();
    y[8 + kReal] = s.delta.imag();
    return y;
}

MuState unpack(const PackedState& y, double t) {
    MuState s;
    for (std::size_t k = 0; k < 8; ++k) s.mu[k] = {y[k], y[k + kReal]};
    s.delta = {y[8], y[8 + kReal]};
    s.t = t;
    return s;
}

PackedState pack_rates_real(const MuRates& r) {
    PackedState y{};
    for (std::size_t k = 0; k < 8; ++k) {
        y[k] = r.mu_dot[k].real();
        y[k + kReal] = r.mu_dot[k].imag();
    }
    y[8] = r.delta_dot.real();
    y[8 + kReal] = r.delta_dot.imag();
    return y;
}

Eigen::Matrix<Complex, 9, 1> as_vector(const LadderCoefficients& c) {
    Eigen::Matrix<Complex, 9, 1> v;
    for (std::size_t k = 0; k < 9; ++k) v(static_cast<Eigen::Index>(k)) = c.h[k];
    return v;
}

}  // namespace

Matrix3 factor_exponential(GeneratorId id, Complex mu) {
    if (id == GeneratorId::IDENTITY)
        throw std::invalid_argument("factor_exponential: identity has no factor");
    if (is_diagonal_generator(id)) {
        const Matrix3 g = ladder(id);
        Matrix3 out = Matrix3::Zero();
        for (int k = 0; k < 3; ++k) out(k, k) = std::exp(-kI * mu * g(k, k));
        return out;
    }
    // Nilpotent of degree 2: the series terminates after the linear term.
    return Matrix3::Identity() - kI * mu * ladder(id);
}

Matrix3 factor_exponential_inverse(GeneratorId id, Complex mu) {
    return factor_exponential(id, -mu);
}

Matrix3 propagator(const MuState& state) {
    Matrix3 u = std::exp(-kI * state.delta) * Matrix3::Identity();
    for (const auto& f : kFactorOrder)
        u = u * factor_exponential(f.generator, state.mu[static_cast<std::size_t>(f.mu_index)]);
    return u;
}

CoefficientMatrix coefficient_matrix(const MuState& state) {
    CoefficientMatrix m = CoefficientMatrix::Zero();
    Matrix3 left = Matrix3::Identity();
    Matrix3 left_inv = Matrix3::Identity();
    for (std::size_t c = 0; c < kFactorOrder.size(); ++c) {
        const auto& f = kFactorOrder[c];
        const Matrix3 conj = left * ladder(f.generator) * left_inv;
        m.col(static_cast<Eigen::Index>(c)) = as_vector(decompose(conj));
        const Complex mu = state.mu[static_cast<std::size_t>(f.mu_index)];
        left = left * factor_exponential(f.generator, mu);
        left_inv = factor_exponential_inverse(f.generator, mu) * left_inv;
    }
    m(0, 8) = 1.0;
    return m;
}

Eigen::Matrix<Complex, 9, 1> pack_rates(const MuRates& rates) {
    Eigen::Matrix<Complex, 9, 1> x;
    for (std::size_t c = 0; c < kFactorOrder.size(); ++c)
        x(static_cast<Eigen::Index>(c)) =
            rates.mu_dot[static_cast<std::size_t>(kFactorOrder[c].mu_index)];
    x(8) = rates.delta_dot;
    return x;
}

MuRates unpack_rates(const Eigen::Matrix<Complex, 9, 1>& x) {
    MuRates r;
    for (std::size_t c = 0; c < kFactorOrder.size(); ++c)
        r.mu_dot[static_cast<std::size_t>(kFactorOrder[c].mu_index)] =
            x(static_cast<Eigen::Index>(c));
    r.delta_dot = x(8);
    return r;
}

LadderCoefficients operator_sum(const MuState& state, const MuRates& rates) {
    const Eigen::Matrix<Complex, 9, 1> v = coefficient_matrix(state) * pack_rates(rates);
    LadderCoefficients c;
    for (std::size_t k = 0; k < 9; ++k) c.h[k] = v(static_cast<Eigen::Index>(k));
    return c;
}

AuxiliaryQuantities auxiliary_quantities(const std::array<Complex, 8>& mu,
                                         const std::array<Complex, 8>& mu_dot) {
    const auto m = [&](int k) { return mu[static_cast<std::size_t>(k - 1)]; };
    const auto d = [&](int k) { return mu_dot[static_cast<std::size_t>(k - 1)]; };
    const Complex i = kI;
    AuxiliaryQuantities q;
    q.r = d(2) - i * m(2) * (d(4) + 2.0 * d(1));
    q.s = d(3) + m(3) * m(3) * q.r + i * m(3) * (d(4) + 2.0 * d(1));
    q.v = d(5) - i * m(5) * (-i * m(3) * q.r + d(1) + 2.0 * d(4));
    q.w = d(7) - i * m(6) * q.r + i * m(5) * m(7) * m(7) * q.s -
          i * m(7) * (-i * m(3) * q.r + d(1) + i * m(6) * q.v - d(4));
    q.u = d(6) + m(6) * m(6) * q.v + i * m(6) * (-i * m(3) * q.r + d(1) + 2.0 * d(4)) -
          i * m(7) * (1.0 - m(5) * m(6)) * q.s;
    return q;
}

LadderCoefficients eq13_coefficients(const std::array<Complex, 8>& mu,
                                     const std::array<Complex, 8>& mu_dot, Complex delta_dot) {
    const auto m = [&](int k) { return mu[static_cast<std::size_t>(k - 1)]; };
    const auto d = [&](int k) { return mu_dot[static_cast<std::size_t>(k - 1)]; };
    const Complex i = kI;
    const auto [r, s, v, u, w] = auxiliary_quantities(mu, mu_dot);

    LadderCoefficients c;
    c.bp() = d(8) + i * m(5) * s + m(8) * m(8) * w +
             i * m(8) * (-i * m(3) * r + d(1) - 2.0 * m(5) * m(7) * s - d(4) + i * m(6) * v);
    c.bm() = w;
    c.cp() = u;
    c.cm() = v + i * m(8) * (r + i * m(7) * v);
    c.ap() = -i * m(8) * u + (1.0 - m(5) * m(6)) * s;
    c.am() = r + i * m(7) * v;
    c.a3() = d(1) - i * m(8) * w - i * m(3) * r - m(5) * m(7) * s;
    c.c3() = d(4) + i * m(8) * w - i * m(6) * v + m(5) * m(7) * s;
    c.id() = delta_dot;
    return c;
}

double condition_estimate(const MuState& state) {
    const Eigen::PartialPivLU<CoefficientMatrix> lu(coefficient_matrix(state));
    const double rc = lu.rcond();
    return rc > 0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

MuRates rhs(const MuState& state, const LadderCoefficients& generator) {
    for (const auto& m : state.mu)
        if (!std::isfinite(m.real()) || !std::isfinite(m.imag()))
            throw InadmissiblePoint("rhs: non-finite exponent at t = " + std::to_string(state.t));
    const Complex denom = 1.0 - mu_of(state, 5) * mu_of(state, 6);
    if (std::abs(denom) < kSingularDenominatorLimit)
        throw SingularityError(state.t, std::numeric_limits<double>::infinity());
    const Eigen::PartialPivLU<CoefficientMatrix> lu(coefficient_matrix(state));
    const double rc = lu.rcond();
    if (!(rc > 1.0 / kSingularConditionLimit))
        throw SingularityError(state.t, rc > 0 ? 1.0 / rc : std::numeric_limits<double>::infinity());
    return unpack_rates(lu.solve(as_vector(generator)));
}

MuRates eq15_rhs(const MuState& state, Complex eps, Complex J, Complex E1, Complex E2) {
    const auto m_ = [&](int k) { return mu_of(state, k); };
    const Complex denom = 1.0 - m_(5) * m_(6);
    if (std::abs(denom) < kSingularDenominatorLimit)
        throw SingularityError(state.t, std::numeric_limits<double>::infinity());
    const Complex i = kI;
    const Complex m = 2.0 * J / denom;
    const Complex n = 2.0 * J * (1.0 - m_(7) * m_(8));
    const Complex mu2 = m_(2), mu3 = m_(3), mu5 = m_(5), mu6 = m_(6), mu7 = m_(7),
                  mu8 = m_(8);

    MuRates r;
    auto& d = r.mu_dot;
    d[7] = -eps - i * mu5 * m - mu8 * mu8 * eps - i * mu8 * (E2 - E1);
    d[6] = -eps + i * mu5 * mu7 * mu7 * m + 2.0 * mu7 * mu8 * eps + i * mu7 * (E2 - E1) +
           i * mu6 * n;
    d[5] = 2.0 * i * mu7 * J - i * mu6 * mu8 * (2.0 * mu6 * J + i * eps) +
           i * mu5 * mu6 * mu7 * m - i * mu6 * E1;
    d[4] = -2.0 * i * mu8 * J - i * mu5 * mu5 * mu7 * m +
           i * mu5 * mu8 * (4.0 * mu6 * J + i * eps) + i * mu5 * E1;
    d[3] = 2.0 * mu6 * mu8 * J + i * mu8 * eps - mu5 * mu7 * m + (2.0 * E1 - E2) / 3.0;
    d[2] = m + mu3 * mu3 * n - i * mu3 * (mu5 * mu7 * m + mu8 * (2.0 * mu6 * J - i * eps) + E2);
    d[1] = n + i * mu2 * mu5 * mu7 * m + i * mu2 * mu8 * (2.0 * mu6 * J - i * eps) -
           2.0 * mu2 * mu3 * n + i * mu2 * E2;
    d[0] = i * mu3 * n + mu5 * mu7 * m - i * mu8 * eps + (2.0 * E2 - E1) / 3.0;
    r.delta_dot = (E1 + E2) / 3.0;
    return r;
}

WeiNormanSolution integrate(const GeneratorFn& generator, TimeSpan span, double tol,
                            const MuState& initial, std::span<const double> output_grid) {
    if (!(span.t1 > span.t0)) throw std::invalid_argument("integrate: requires t1 > t0");
    if (!(tol > 0)) throw std::invalid_argument("integrate: requires tol > 0");
    for (std::size_t k = 0; k < output_grid.size(); ++k) {
        if (output_grid[k] < span.t0 || output_grid[k] > span.t1 ||
            (k > 0 && !(output_grid[k] > output_grid[k - 1])))
            throw std::invalid_argument(
                "integrate: output grid must be strictly increasing within [t0, t1]");
    }

    WeiNormanSolution sol;
    std::optional<Singularity> pending;

    auto f = [&](double t, const PackedState& y) {
        const MuState s = unpack(y, t);
        try {
            return pack_rates_real(rhs(s, generator(t)));
        } catch (const SingularityError& e) {
            pending = Singularity{e.time, e.condition};
            throw;
        }
    };

    std::size_t next = 0;
    auto emit = [&](const MuState& s) { sol.samples.push_back(s); };
    if (output_grid.empty()) {
        emit(MuState{initial.mu, initial.delta, span.t0});
    } else {
        while (next < output_grid.size() && output_grid[next] <= span.t0) {
            emit(MuState{initial.mu, initial.delta, output_grid[next]});
            ++next;
        }
    }

    using Stepper = DormandPrince<2 * kReal>;
    Stepper::Options opt;
    opt.atol = tol;
    opt.rtol = tol;
    Stepper stepper(opt);
    MuState last{initial.mu, initial.delta, span.t0};

    auto on_step = [&](const Stepper::Step& step) {
        pending.reset();
        if (output_grid.empty()) {
            emit(unpack(step.y1, step.t1));
        } else {
            while (next < output_grid.size() && output_grid[next] <= step.t1) {
                const double tg = output_grid[next];
                emit(tg == step.t1 ? unpack(step.y1, tg) : unpack(step.at(tg), tg));
                ++next;
            }
        }
        last = unpack(step.y1, step.t1);
    };

    try {
        stepper.integrate(f, span.t0, span.t1, pack(initial), on_step);
    } catch (const StepUnderflow& e) {
        if (!pending) throw IntegrationError(e.what(), last);
        sol.singular = Singularity{last.t, pending->condition};
    } catch (const SingularityError& e) {
        // Raised at the initial point itself.
        sol.singular = Singularity{span.t0, e.condition};
    }
    sol.accepted_steps = stepper.accepted();
    sol.rejected_steps = stepper.rejected();
    return sol;
}

}  // namespace threelevel
