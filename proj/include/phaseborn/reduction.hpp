#pragma once

#include <cstdint>
#include <optional>

#include "phaseborn/classical_state.hpp"
#include "phaseborn/observable.hpp"
#include "phaseborn/sphere.hpp"

namespace phaseborn {

/// Reduced quantum state ρ_mn = ħ∫ψ_m ψ_n* ρ(ψ*,ψ) dΩ.
///
/// Construction enforces exact Hermiticity (ρ == ρ† bit for bit), positive
/// semidefiniteness (min eigenvalue ≥ −1e-10·trace), and trace ħ within
/// 1e-12·max(1, ħ). Violations throw InvariantError.
class DensityMatrix {
  public:
    DensityMatrix(CMatrix matrix, double hbar);

    int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
    const CMatrix &matrix() const noexcept { return matrix_; }
    double hbar() const noexcept { return hbar_; }
    double trace() const noexcept { return matrix_.trace().real(); }
    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

  private:
    CMatrix matrix_;
    double hbar_;
    double min_eigenvalue_;
};

enum class ReductionMethod { closed_form, monte_carlo };

const char *to_string(ReductionMethod method);

struct ReductionReport {
    DensityMatrix estimate;
    /// Entrywise standard errors of Re ρ̂ and Im ρ̂, in units of ħ like ρ̂.
    RMatrix standard_error_real;
    RMatrix standard_error_imag;
    std::size_t sample_count = 0;
    std::uint64_t seed = 0;
    ReductionMethod method = ReductionMethod::closed_form;

    double max_standard_error() const;
};

struct Expectation {
    double value = 0.0;
    double standard_error = 0.0;
};

/// Default tolerance of born_rule_verify; the same-sample identity is algebraic.
inline constexpr double kVerifyTolerance = 1e-10;

/// Classical values with magnitude below this are compared absolutely.
inline constexpr double kAbsoluteFloor = 1e-12;

struct VerificationReport {
    double classical_value = 0.0;
    double classical_standard_error = 0.0;
    double quantum_value = 0.0;
    double absolute_difference = 0.0;
    double relative_difference = 0.0;
    /// True when |classical_value| < kAbsoluteFloor and the absolute
    /// difference was used for the pass decision.
    bool absolute_comparison = false;
    double tolerance = kVerifyTolerance;
    std::size_t sample_count = 0;
    std::uint64_t seed = 0;
    bool pass = false;
    /// tr(Aρ) for the exact reduction, when the state admits one.
    std::optional<double> closed_form_quantum_value;
};

/// Exact reduction of PointMass (ħφφ†), Mixture (ħΣw_kφ_kφ_k†) and Uniform
/// (ħI/d). WeightedDensity has no closed form: UnsupportedVariantError.
DensityMatrix reduce_closed_form(const ClassicalState &state, const ModelConfig &config);

/// Self-normalized reduction ħ·Σw ψψ†/Σw of an existing batch.
ReductionReport reduce_batch(const SampleBatch &batch, const ModelConfig &config);

/// reduce_batch over draw_samples(state, config, seed, count); count ≥ 2.
ReductionReport reduce_monte_carlo(const ClassicalState &state, const ModelConfig &config,
                                   std::uint64_t seed, std::size_t count);

/// Self-normalized weighted mean of ħψ†Aψ over the batch.
Expectation classical_expectation(const HermitianObservable &a, const SampleBatch &batch,
                                  const ModelConfig &config);

/// Σ_{n,m} A_nm ρ_mn = tr(Aρ).
double quantum_expectation(const HermitianObservable &a, const DensityMatrix &rho);

/// Compares classical_expectation on one batch with quantum_expectation of
/// that same batch's reduction.
VerificationReport born_rule_verify(const HermitianObservable &a, const ClassicalState &state,
                                    const ModelConfig &config, std::uint64_t seed,
                                    std::size_t count, double tolerance = kVerifyTolerance);

/// |a − b| / |a|, or |a − b| when |a| < kAbsoluteFloor.
double relative_difference(double reference, double value);

} // namespace phaseborn
