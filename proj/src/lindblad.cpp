#include "threelevel/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace threelevel {

Matrix2 pauli_x() {
    Matrix2 m;
    m << 0, 1, 1, 0;
    return m;
}

Matrix2 pauli_y() {
    Matrix2 m;
    m << 0, -kI, kI, 0;
    return m;
}

Matrix2 pauli_z() {
    Matrix2 m;
    m << 1, 0, 0, -1;
    return m;
}

void TwoLevelLindbladParams::validate() const {
    if (!(gamma >= 0.0))
        throw std::invalid_argument("two-level Lindblad: Gamma must be >= 0, got " +
                                    std::to_string(gamma));
}

Matrix2 two_level_hamiltonian(const TwoLevelLindbladParams& p, double t) {
    return 0.5 * p.eps(t) * pauli_z() + p.J(t) * pauli_x();
}

Matrix2 dephasing_operator(const TwoLevelLindbladParams& p) {
    p.validate();
    return std::sqrt(0.5 * p.gamma) * pauli_z();
}

Matrix3 liouvillian_two_level(const TwoLevelLindbladParams& p, double t) {
    p.validate();
    const Complex e = -kI * p.gamma;
    const Complex eps = p.eps(t);
    const Complex two_j = 2.0 * p.J(t);
    Matrix3 m;
    m << e, -eps, 0.0,
         -eps, e, two_j,
         0.0, two_j, 0.0;
    return m;
}

Matrix3 liouvillian_two_level_simplified(const TwoLevelLindbladParams& p, double t) {
    p.validate();
    const Complex eps = p.eps(t);
    const Complex two_j = 2.0 * p.J(t);
    Matrix3 m;
    m << 0.0, -eps, 0.0,
         -eps, 0.0, two_j,
         0.0, two_j, 0.0;
    return m - kI * p.gamma * Matrix3::Identity();
}

DensityMatrix lindblad_rhs_full(const DensityMatrix& H, const std::vector<DensityMatrix>& L_ops,
                                const DensityMatrix& rho) {
    const auto n = rho.rows();
    if (rho.cols() != n || H.rows() != n || H.cols() != n)
        throw std::invalid_argument("lindblad_rhs_full: H and rho must be square of equal size");
    DensityMatrix i_rho_dot = H * rho - rho * H;
    for (const auto& L : L_ops) {
        if (L.rows() != n || L.cols() != n)
            throw std::invalid_argument("lindblad_rhs_full: Lindblad operator size mismatch");
        const DensityMatrix LdL = L.adjoint() * L;
        i_rho_dot -= 0.5 * kI * (LdL * rho + rho * LdL - 2.0 * L * rho * L.adjoint());
    }
    return -kI * i_rho_dot;
}

EtaVector eta_from_rho(const Matrix2& rho) {
    return {rho(0, 1) + rho(1, 0), rho(1, 0) - rho(0, 1), rho(0, 0) - rho(1, 1)};
}

Matrix2 rho_from_eta(const EtaVector& eta) {
    Matrix2 rho;
    rho(0, 0) = 0.5 * (1.0 + eta(2));
    rho(1, 1) = 0.5 * (1.0 - eta(2));
    rho(0, 1) = 0.5 * (eta(0) - eta(1));
    rho(1, 0) = 0.5 * (eta(0) + eta(1));
    return rho;
}

GeneratorFn effective_three_level(std::function<Matrix3(double)> H, double gamma,
                                  DecayPlacement placement) {
    if (!(gamma >= 0.0))
        throw std::invalid_argument("effective_three_level: Gamma must be >= 0");
    return [H = std::move(H), gamma, placement](double t) {
        Matrix3 h = H(t);
        switch (placement) {
            case DecayPlacement::none: break;
            case DecayPlacement::middle_level: h(1, 1) -= kI * gamma; break;
            case DecayPlacement::all_levels: h.diagonal().array() -= kI * gamma; break;
        }
        return decompose(h);
    };
}

double entropy(const DensityMatrix& rho) {
    const Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double l = es.eigenvalues()(k);
        if (l < -1e-6)
            throw NonPhysicalState("entropy: eigenvalue " + std::to_string(l) + " < 0");
        if (l > 1e-12) s -= l * std::log(l);
    }
    return std::max(s, 0.0);  // an eigenvalue of 1 + eps gives -eps log(1 + eps)
}

bool is_physical(const DensityMatrix& rho, double tol) {
    if (rho.rows() != rho.cols()) return false;
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    if (std::abs(rho.trace() - 1.0) > tol) return false;
    const Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

}  // namespace threelevel
