#include "threelevel/oracle.hpp"

#include <boost/numeric/odeint.hpp>

namespace threelevel {

namespace {

namespace odeint = boost::numeric::odeint;
using RealState = std::vector<double>;

Eigen::MatrixXcd unflatten(const RealState& y, Eigen::Index n) {
    const auto sz = static_cast<std::size_t>(n * n);
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            const auto k = static_cast<std::size_t>(r * n + c);
            m(r, c) = {y[k], y[k + sz]};
        }
    return m;
}

void flatten(const Eigen::MatrixXcd& m, RealState& y) {
    const auto n = m.rows();
    const auto sz = static_cast<std::size_t>(n * n);
    y.resize(2 * sz);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            const auto k = static_cast<std::size_t>(r * n + c);
            y[k] = m(r, c).real();
            y[k + sz] = m(r, c).imag();
        }
}

template <class System>
OracleResult run(System system, const Eigen::MatrixXcd& initial, double t0, double tol,
                 std::span<const double> grid) {
    if (!(tol > 0)) throw std::invalid_argument("oracle: tol must be > 0");
    if (grid.empty()) throw std::invalid_argument("oracle: output grid must be non-empty");
    if (grid.front() < t0) throw std::invalid_argument("oracle: output grid starts before t0");
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1]))
            throw std::invalid_argument("oracle: output grid must be strictly increasing");

    std::vector<double> times;
    const bool prepend = grid.front() > t0;
    if (prepend) times.push_back(t0);
    times.insert(times.end(), grid.begin(), grid.end());

    OracleResult result;
    result.tol = tol;
    const auto n = initial.rows();
    RealState y;
    flatten(initial, y);
    bool skip = prepend;
    auto observer = [&](const RealState& x, double t) {
        if (skip) {
            skip = false;
            return;
        }
        result.samples.emplace_back(t, unflatten(x, n));
    };

    const double span = times.back() - times.front();
    const double dt0 = span > 0 ? std::min(1e-3, span * 1e-3) : 1e-3;
    auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_cash_karp54<RealState>());
    try {
        odeint::integrate_times(stepper, system, y, times.begin(), times.end(), dt0, observer,
                                odeint::max_step_checker(10'000'000));
    } catch (const odeint::odeint_error& e) {
        throw OracleError(std::string("oracle integration failed: ") + e.what());
    } catch (const std::overflow_error& e) {
        throw OracleError(std::string("oracle integration failed: ") + e.what());
    }
    return result;
}

}  // namespace

OracleResult propagate_direct(const std::function<Matrix3(double)>& generator, double t0,
                              double tol, std::span<const double> output_grid) {
    auto system = [&](const RealState& y, RealState& dydt, double t) {
        const Eigen::MatrixXcd u = unflatten(y, 3);
        const Eigen::MatrixXcd g = generator(t);
        flatten(Eigen::MatrixXcd(-kI * (g * u)), dydt);
    };
    return run(system, Eigen::MatrixXcd::Identity(3, 3), t0, tol, output_grid);
}

OracleResult propagate_lindblad_direct(const std::function<DensityMatrix(double)>& H,
                                       const std::vector<DensityMatrix>& L_ops,
                                       const DensityMatrix& rho0, double t0, double tol,
                                       std::span<const double> output_grid) {
    if (rho0.rows() != rho0.cols())
        throw std::invalid_argument("propagate_lindblad_direct: rho0 must be square");
    if (!is_physical(rho0, 1e-10))
        throw NonPhysicalState("propagate_lindblad_direct: rho0 is not a physical state");
    const auto n = rho0.rows();
    auto system = [&, n](const RealState& y, RealState& dydt, double t) {
        flatten(lindblad_rhs_full(H(t), L_ops, unflatten(y, n)), dydt);
    };
    return run(system, rho0, t0, tol, output_grid);
}

}  // namespace threelevel
