#pragma once

// Ordered product-of-exponentials representation of the 3x3 evolution operator
//
//   U = e^{-i delta} e^{-i mu8 b+} e^{-i mu7 b-} e^{-i mu6 c+} e^{-i mu5 c-}
//         e^{-i mu3 a+} e^{-i mu2 a-} e^{-i mu1 a3} e^{-i mu4 c3}
//
// and the coupled first-order ODEs that the exponents satisfy when
// i dU/dt = G(t) U for an arbitrary (not necessarily Hermitian) G.

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "threelevel/algebra.hpp"
#include "threelevel/dopri5.hpp"

namespace threelevel {

// mu[0] is mu_1, ..., mu[7] is mu_8.
struct MuState {
    std::array<Complex, 8> mu{};
    Complex delta{};
    double t = 0.0;

    static MuState origin(double t0 = 0.0) {
        MuState s;
        s.t = t0;
        return s;
    }
};

struct MuRates {
    std::array<Complex, 8> mu_dot{};
    Complex delta_dot{};
};

// One factor of the ordered product: the generator and the (0-based) index of
// its exponent in MuState::mu.
struct Factor {
    GeneratorId generator;
    int mu_index;
};

// Left-to-right factor order (the global phase factor is separate).
inline constexpr std::array<Factor, 8> kFactorOrder = {{
    {GeneratorId::BPLUS, 7},
    {GeneratorId::BMINUS, 6},
    {GeneratorId::CPLUS, 5},
    {GeneratorId::CMINUS, 4},
    {GeneratorId::APLUS, 2},
    {GeneratorId::AMINUS, 1},
    {GeneratorId::A3, 0},
    {GeneratorId::C3, 3},
}};

inline constexpr double kSingularConditionLimit = 1e12;
inline constexpr double kSingularDenominatorLimit = 1e-12;

// The factorization is locally invalid at this point: the coefficient matrix
// is (numerically) singular.
class SingularityError : public InadmissiblePoint {
public:
    SingularityError(double t, double condition)
        : InadmissiblePoint("Wei-Norman factorization singular at t = " + std::to_string(t) +
                            " (condition estimate " + std::to_string(condition) + ")"),
          time(t),
          condition(condition) {}
    double time;
    double condition;
};

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, MuState last)
        : std::runtime_error(what), last_state(last) {}
    MuState last_state;
};

// exp(-i mu O) in closed form. O must not be IDENTITY.
Matrix3 factor_exponential(GeneratorId id, Complex mu);
// Inverse of factor_exponential(id, mu).
Matrix3 factor_exponential_inverse(GeneratorId id, Complex mu);

Matrix3 propagator(const MuState& state);

using CoefficientMatrix = Eigen::Matrix<Complex, 9, 9>;

// Column c holds the ladder coefficients of the c-th factor's generator
// conjugated by all factors to its left; the last column is the identity
// (global phase). Column order follows kFactorOrder, i.e. the unknowns are
// (mu8', mu7', mu6', mu5', mu3', mu2', mu1', mu4', delta'). Rows follow the
// canonical GeneratorId order.
CoefficientMatrix coefficient_matrix(const MuState& state);

// Packs rates into the coefficient_matrix column order and back.
Eigen::Matrix<Complex, 9, 1> pack_rates(const MuRates& rates);
MuRates unpack_rates(const Eigen::Matrix<Complex, 9, 1>& x);

// Ladder coefficients of i (dU/dt) U^{-1} given exponents and their rates.
LadderCoefficients operator_sum(const MuState& state, const MuRates& rates);

struct AuxiliaryQuantities {
    Complex r, s, v, u, w;
};

AuxiliaryQuantities auxiliary_quantities(const std::array<Complex, 8>& mu,
                                         const std::array<Complex, 8>& mu_dot);

// Closed-form operator-sum coefficients, written out term by term.
LadderCoefficients eq13_coefficients(const std::array<Complex, 8>& mu,
                                     const std::array<Complex, 8>& mu_dot, Complex delta_dot);

// Solves coefficient_matrix(state) x = generator. Throws SingularityError when
// the condition estimate exceeds kSingularConditionLimit or |1 - mu5 mu6| is
// below kSingularDenominatorLimit, and InadmissiblePoint for non-finite
// exponents.
MuRates rhs(const MuState& state, const LadderCoefficients& generator);

// Reciprocal condition estimate (1-norm) of coefficient_matrix(state).
double condition_estimate(const MuState& state);

// Explicit right-hand sides for the vectorized two-level Lindblad generator
// [[E1, -eps, 0], [-eps, E2, 2J], [0, 2J, 0]], with
// m = 2J / (1 - mu5 mu6) and n = 2J (1 - mu7 mu8).
MuRates eq15_rhs(const MuState& state, Complex eps, Complex J, Complex E1, Complex E2);

using GeneratorFn = std::function<LadderCoefficients(double)>;

struct Singularity {
    double time;
    double condition;
};

struct WeiNormanSolution {
    std::vector<MuState> samples;
    std::optional<Singularity> singular;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
};

struct TimeSpan {
    double t0;
    double t1;
};

// Adaptive Dormand-Prince integration of the exponents. With an empty
// output_grid, samples are the accepted step points; otherwise they are the
// grid points (which must lie in [t0, t1] and increase), obtained from the
// stepper's continuous extension. On a factorization singularity the partial
// solution is returned with `singular` set. Throws IntegrationError on step underflow
// unrelated to a singularity, std::invalid_argument on bad arguments.
WeiNormanSolution integrate(const GeneratorFn& generator, TimeSpan span, double tol,
                            const MuState& initial, std::span<const double> output_grid = {});

}  // namespace threelevel
