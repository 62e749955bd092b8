#pragma once

// Two-level Lindblad dynamics in vectorized 3x3 form, the phenomenological
// -i Gamma decay model for three-level systems, and density-matrix
// diagnostics.
//
// With eta = (rho12 + rho21, rho21 - rho12, rho11 - rho22), the two-level
// master equation for H = eps/2 sigma_z + J sigma_x and a sigma_z dephasing
// channel becomes i d(eta)/dt = L(t) eta with
//
//   L = [[E, -eps, 0], [-eps, E, 2J], [0, 2J, 0]],   E = -i Gamma.
//
// The dephasing operator that produces exactly this generator through the
// full master equation is sqrt(Gamma / 2) sigma_z (see dephasing_operator).

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "threelevel/algebra.hpp"
#include "threelevel/waveform.hpp"
#include "threelevel/weinorman.hpp"

namespace threelevel {

using DensityMatrix = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;
using EtaVector = Eigen::Vector3cd;

struct NonPhysicalState : std::domain_error {
    using std::domain_error::domain_error;
};

Matrix2 pauli_x();
Matrix2 pauli_y();
Matrix2 pauli_z();

struct TwoLevelLindbladParams {
    Waveform eps;
    Waveform J;
    double gamma = 0.0;  // decay constant on the eta-space diagonal, >= 0

    void validate() const;
};

// eps/2 sigma_z + J sigma_x.
Matrix2 two_level_hamiltonian(const TwoLevelLindbladParams& p, double t);

// sqrt(Gamma / 2) sigma_z.
Matrix2 dephasing_operator(const TwoLevelLindbladParams& p);

Matrix3 liouvillian_two_level(const TwoLevelLindbladParams& p, double t);

// Coherent part of liouvillian_two_level with -i Gamma times the unit matrix
// replacing the dephasing block.
Matrix3 liouvillian_two_level_simplified(const TwoLevelLindbladParams& p, double t);

// i d(rho)/dt = [H, rho] - i/2 sum_k (Lk^+ Lk rho + rho Lk^+ Lk - 2 Lk rho Lk^+),
// returned as d(rho)/dt. All operands must be square of the same size.
DensityMatrix lindblad_rhs_full(const DensityMatrix& H, const std::vector<DensityMatrix>& L_ops,
                                const DensityMatrix& rho);

EtaVector eta_from_rho(const Matrix2& rho);
// Assumes unit trace.
Matrix2 rho_from_eta(const EtaVector& eta);

enum class DecayPlacement {
    none,          // decay already carried by complex detunings
    middle_level,  // -i Gamma added to H(2,2)
    all_levels,    // -i Gamma times the unit matrix
};

// Generator for the non-Hermitian three-level decay model.
GeneratorFn effective_three_level(std::function<Matrix3(double)> H, double gamma,
                                  DecayPlacement placement);

// Von Neumann entropy -sum l ln l. Eigenvalues below 1e-12 contribute zero;
// an eigenvalue below -1e-6 throws NonPhysicalState.
double entropy(const DensityMatrix& rho);

// Hermitian, unit trace and positive within tol.
bool is_physical(const DensityMatrix& rho, double tol = 1e-10);

}  // namespace threelevel
