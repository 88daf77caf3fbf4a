#pragma once

#include <optional>
#include <string>

#include "phaseborn/core.hpp"
#include "phaseborn/sphere.hpp"

namespace phaseborn {

/// Rate of the canonical flow generated by ħψ†Aψ in sphere coordinates:
/// dψ/dt = −i·kFlowRate·Aψ. The factor comes from ψ = (q + ip)/√ħ, which
/// gives the bracket {ψ_n, ψ_m*} = −2iδ_nm/ħ.
inline constexpr double kFlowRate = 2.0;

/// Hermitian matrix A defining the observable ħψ†Aψ on the sphere.
class HermitianObservable {
  public:
    /// Accepts A when ‖A − A†‖_max ≤ 1e-12·‖A‖_max and stores (A + A†)/2;
    /// throws InvariantError otherwise.
    explicit HermitianObservable(const CMatrix &matrix, std::string label = {});

    int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
    const CMatrix &matrix() const noexcept { return matrix_; }
    const std::string &label() const noexcept { return label_; }
    /// ‖A‖_max
    double scale() const noexcept { return scale_; }

  private:
    CMatrix matrix_;
    std::string label_;
    double scale_ = 0.0;
};

struct FlowResult {
    StateVector state;
    double time = 0.0;
    std::string generator_label;
};

/// ħ·ψ†Aψ. Throws ConsistencyError if |Im ψ†Aψ| > 1e-12·(1 + ‖A‖_max).
double evaluate_form(const HermitianObservable &a, const StateVector &psi,
                     const ModelConfig &config);

/// exp(−i·angle·A) through the eigendecomposition of A.
CMatrix hermitian_exponential(const HermitianObservable &a, double angle);

/// ψ(t) = exp(−2iAt)ψ(0), exact for every t.
FlowResult generate_flow(const HermitianObservable &a, double t, const StateVector &psi,
                         const ModelConfig &config);

/// The propagator exp(−2iAt) applied by generate_flow.
CMatrix flow_propagator(const HermitianObservable &a, double t);

} // namespace phaseborn
