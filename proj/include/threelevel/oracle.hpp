#pragma once

// Reference solutions by direct integration of i dU/dt = G(t) U and of the
// full master equation on the density matrix. Shares no code with the
// Wei-Norman right-hand side.

#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "threelevel/algebra.hpp"
#include "threelevel/lindblad.hpp"

namespace threelevel {

struct OracleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OracleResult {
    std::vector<std::pair<double, Eigen::MatrixXcd>> samples;
    double tol = 0.0;
};

// U(t0) = I; samples exactly at output_grid (non-empty, increasing, >= t0).
OracleResult propagate_direct(const std::function<Matrix3(double)>& generator, double t0,
                              double tol, std::span<const double> output_grid);

OracleResult propagate_lindblad_direct(const std::function<DensityMatrix(double)>& H,
                                       const std::vector<DensityMatrix>& L_ops,
                                       const DensityMatrix& rho0, double t0, double tol,
                                       std::span<const double> output_grid);

}  // namespace threelevel
