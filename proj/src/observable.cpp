#include "phaseborn/observable.hpp"

#include <cmath>

namespace phaseborn {

HermitianObservable::HermitianObservable(const CMatrix &matrix, std::string label)
    : label_(std::move(label)) {
    if (matrix.rows() == 0 || matrix.rows() != matrix.cols()) {
        throw InvariantError("observable matrix must be square and nonempty");
    }
    if (!matrix.allFinite()) {
        throw InvariantError("observable matrix has non-finite entries");
    }
    const double asym = detail::max_abs(matrix - matrix.adjoint());
    const double scale = detail::max_abs(matrix);
    if (asym > 1e-12 * scale) {
        throw InvariantError("observable matrix is not Hermitian: max |A - A^dagger| = " +
                             std::to_string(asym));
    }
    matrix_ = (matrix + matrix.adjoint()) / 2.0;
    for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
        matrix_(i, i) = Complex(matrix_(i, i).real(), 0.0);
    }
    scale_ = detail::max_abs(matrix_);
}

double evaluate_form(const HermitianObservable &a, const StateVector &psi,
                     const ModelConfig &config) {
    detail::require_dim(a.dim(), config.dim(), "observable");
    detail::require_dim(psi.dim(), config.dim(), "state vector");
    const Complex value = psi.amplitudes().dot(a.matrix() * psi.amplitudes());
    if (std::abs(value.imag()) > 1e-12 * (1.0 + a.scale())) {
        throw ConsistencyError("Hermitian form has imaginary part " +
                               std::to_string(value.imag()));
    }
    return config.hbar() * value.real();
}

CMatrix hermitian_exponential(const HermitianObservable &a, double angle) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(a.matrix());
    if (eig.info() != Eigen::Success) {
        throw ConsistencyError("eigendecomposition of observable failed");
    }
    const Eigen::VectorXd &lambda = eig.eigenvalues();
    CVector phases(lambda.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        phases(k) = std::polar(1.0, -angle * lambda(k));
    }
    const CMatrix &v = eig.eigenvectors();
    return v * phases.asDiagonal() * v.adjoint();
}

CMatrix flow_propagator(const HermitianObservable &a, double t) {
    return hermitian_exponential(a, kFlowRate * t);
}

FlowResult generate_flow(const HermitianObservable &a, double t, const StateVector &psi,
                         const ModelConfig &config) {
    detail::require_dim(a.dim(), config.dim(), "observable");
    detail::require_dim(psi.dim(), config.dim(), "state vector");
    if (t == 0.0) {
        return {psi, t, a.label()};
    }
    return {StateVector(flow_propagator(a, t) * psi.amplitudes()), t, a.label()};
}

} // namespace phaseborn
