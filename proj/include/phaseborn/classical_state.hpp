#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "phaseborn/sphere.hpp"

namespace phaseborn {

/// All probability concentrated at one sphere point.
struct PointMass {
    StateVector phi;
};

struct MixtureComponent {
    double weight;
    StateVector phi;
};

/// Finite convex combination of point masses.
class Mixture {
  public:
    /// Weights must be nonnegative and sum to 1 within 1e-12.
    explicit Mixture(std::vector<MixtureComponent> components);

    const std::vector<MixtureComponent> &components() const noexcept { return components_; }

  private:
    std::vector<MixtureComponent> components_;
};

/// The measure dΩ itself.
struct Uniform {};

/// w(ψ) = |⟨φ,ψ⟩|^{2k}
struct ProjectivePower {
    StateVector phi;
    unsigned k = 1;
};

/// w(ψ) = exp(κ|⟨φ,ψ⟩|²)
class ExponentialOverlap {
  public:
    /// κ must be finite, nonnegative, and small enough that exp(κ) is finite.
    ExponentialOverlap(StateVector phi, double kappa);

    const StateVector &phi() const noexcept { return phi_; }
    double kappa() const noexcept { return kappa_; }

  private:
    StateVector phi_;
    double kappa_;
};

using DensityKernel = std::variant<ProjectivePower, ExponentialOverlap>;

/// Unnormalized density relative to dΩ. Estimators built on it self-normalize.
struct WeightedDensity {
    DensityKernel kernel;
};

/// Classical information ρ(ψ*, ψ): a probability distribution on the sphere.
using ClassicalState = std::variant<PointMass, Mixture, Uniform, WeightedDensity>;

/// Human-readable variant tag, matching the JSON spec schema.
const char *variant_name(const ClassicalState &state);

/// Checks that every embedded vector has dimension config.dim.
void validate_dimensions(const ClassicalState &state, const ModelConfig &config);

/// Density relative to dΩ. Uniform → 1; WeightedDensity → the kernel value.
/// PointMass and Mixture have no density and raise UnsupportedVariantError.
double density_eval(const ClassicalState &state, const StateVector &psi);

/// Monte Carlo sample of the state.
///
/// PointMass repeats φ; Mixture selects components by an inverse-CDF walk
/// over uniform draws; Uniform delegates to sample_uniform; WeightedDensity
/// draws uniform points weighted by the kernel (importance sampling).
SampleBatch draw_samples(const ClassicalState &state, const ModelConfig &config,
                         std::uint64_t seed, std::size_t count);

} // namespace phaseborn
