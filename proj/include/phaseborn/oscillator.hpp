#pragma once

#include <vector>

#include "phaseborn/sphere.hpp"

namespace phaseborn {

// Unit mass and unit frequency; the shell sits at E = ħω/2.
inline constexpr double kOscillatorMass = 1.0;
inline constexpr double kOscillatorFrequency = 1.0;

/// Oscillator phase-space point (q, p). Coordinates carry units of √ħ.
class PhasePoint {
  public:
    /// Unchecked: shell membership is verified by the operations that need it.
    PhasePoint(Eigen::VectorXd q, Eigen::VectorXd p);

    int dim() const noexcept { return static_cast<int>(q_.size()); }
    const Eigen::VectorXd &q() const noexcept { return q_; }
    const Eigen::VectorXd &p() const noexcept { return p_; }

    /// |Σ(p² + q²) − ħ| ≤ 1e-12·ħ
    bool on_shell(const ModelConfig &config) const;

  private:
    Eigen::VectorXd q_;
    Eigen::VectorXd p_;
};

/// Σ(p² + q²)/2, which equals ħ/2 on the shell.
double shell_energy(const PhasePoint &point);

/// ψ_n = (q_n + i p_n)/√ħ. Off-shell input throws InvariantError.
StateVector to_sphere(const PhasePoint &point, const ModelConfig &config);

/// q_n = √ħ Re ψ_n, p_n = √ħ Im ψ_n.
PhasePoint from_sphere(const StateVector &psi, const ModelConfig &config);

/// Exact harmonic rotation q cos t + p sin t, p cos t − q sin t.
PhasePoint oscillator_evolve(const PhasePoint &point, double t, const ModelConfig &config);

} // namespace phaseborn
