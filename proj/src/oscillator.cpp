#include "phaseborn/oscillator.hpp"

#include <cmath>

namespace phaseborn {
namespace {

void require_on_shell(const PhasePoint &point, const ModelConfig &config) {
    detail::require_dim(point.dim(), config.dim(), "phase point");
    if (!point.on_shell(config)) {
        throw InvariantError("phase point is off the energy shell: sum(p^2 + q^2) = " +
                             std::to_string(2.0 * shell_energy(point)));
    }
}

} // namespace

PhasePoint::PhasePoint(Eigen::VectorXd q, Eigen::VectorXd p) : q_(std::move(q)), p_(std::move(p)) {
    if (q_.size() != p_.size()) {
        throw DimensionMismatchError("phase point q and p have different lengths");
    }
    if (q_.size() == 0) {
        throw InvariantError("phase point must have at least one degree of freedom");
    }
}

bool PhasePoint::on_shell(const ModelConfig &config) const {
    const double e2 = q_.squaredNorm() + p_.squaredNorm();
    return std::abs(e2 - config.hbar()) <= 1e-12 * config.hbar();
}

double shell_energy(const PhasePoint &point) {
    return 0.5 * (point.q().squaredNorm() + point.p().squaredNorm());
}

StateVector to_sphere(const PhasePoint &point, const ModelConfig &config) {
    require_on_shell(point, config);
    const double inv = 1.0 / std::sqrt(config.hbar());
    CVector psi(point.dim());
    for (int n = 0; n < point.dim(); ++n) {
        psi(n) = Complex(point.q()(n) * inv, point.p()(n) * inv);
    }
    return StateVector(std::move(psi));
}

PhasePoint from_sphere(const StateVector &psi, const ModelConfig &config) {
    detail::require_dim(psi.dim(), config.dim(), "state vector");
    const double root = std::sqrt(config.hbar());
    return PhasePoint(root * psi.amplitudes().real(), root * psi.amplitudes().imag());
}

PhasePoint oscillator_evolve(const PhasePoint &point, double t, const ModelConfig &config) {
    require_on_shell(point, config);
    if (t == 0.0) {
        return point;
    }
    const double c = std::cos(kOscillatorFrequency * t);
    const double s = std::sin(kOscillatorFrequency * t);
    return PhasePoint(point.q() * c + point.p() * s, point.p() * c - point.q() * s);
}

} // namespace phaseborn
