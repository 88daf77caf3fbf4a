#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "phaseborn/core.hpp"

namespace phaseborn {

/// Dimension of the oscillator (d = 2s + 1) and the action unit ħ.
class ModelConfig {
  public:
    explicit ModelConfig(int dim, double hbar = 1.0);

    int dim() const noexcept { return dim_; }
    double hbar() const noexcept { return hbar_; }
    /// Spin s = (d − 1)/2 of the particle modelled by the oscillator.
    double spin() const noexcept { return (dim_ - 1) / 2.0; }

  private:
    int dim_;
    double hbar_;
};

/// A point ψ on the complex unit sphere Σ_n |ψ_n|² = 1.
class StateVector {
  public:
    /// Throws InvariantError unless |Σ|ψ_n|² − 1| ≤ kSphereTolerance.
    explicit StateVector(CVector amplitudes);

    /// Scales a nonzero vector onto the sphere.
    static StateVector normalized(const CVector &v);
    /// Basis vector e_{k+1} (zero-based k).
    static StateVector basis(int dim, int k);

    int dim() const noexcept { return static_cast<int>(amplitudes_.size()); }
    const CVector &amplitudes() const noexcept { return amplitudes_; }
    Complex operator[](int n) const { return amplitudes_(n); }

  private:
    CVector amplitudes_;
};

/// Weighted Monte Carlo sample of sphere points.
///
/// Points are stored as the columns of a d × count matrix. Weights are
/// nonnegative and not all zero; estimators built on a batch normalize by
/// their sum.
class SampleBatch {
  public:
    /// Validates every invariant: EmptyBatchError for zero columns,
    /// DegenerateBatchError for all-zero weights, InvariantError for negative
    /// or non-finite weights, a length mismatch, or an off-sphere column.
    SampleBatch(CMatrix points, std::vector<double> weights, std::uint64_t seed);

    /// Batch with unit weights.
    SampleBatch(CMatrix points, std::uint64_t seed);

    int dim() const noexcept { return static_cast<int>(points_.rows()); }
    std::size_t count() const noexcept { return static_cast<std::size_t>(points_.cols()); }
    std::uint64_t seed() const noexcept { return seed_; }

    const CMatrix &points() const noexcept { return points_; }
    std::span<const double> weights() const noexcept { return weights_; }
    StateVector point(std::size_t i) const;

  private:
    CMatrix points_;
    std::vector<double> weights_;
    std::uint64_t seed_;
};

/// Weighted empirical second moments M_mn = Σ w ψ_m ψ_n* / Σ w of a batch.
struct MomentReport {
    CMatrix mean;
    RMatrix standard_error_real;
    RMatrix standard_error_imag;
    /// max_mn |M_mn − δ_mn/d|
    double max_deviation = 0.0;
    /// Largest entry of either standard-error matrix.
    double max_standard_error = 0.0;
    std::size_t count = 0;

    /// Every real and imaginary part lies within `sigmas` standard errors of
    /// the reference I/d (plus a 1e-12 floor for zero-variance entries).
    bool within_envelope(double sigmas = kSigmaEnvelope) const;
};

/// Draws `count` points from the normalized unitarily invariant measure dΩ:
/// 2d standard Gaussians per point form d complex components, which are then
/// normalized. Unit weights. Bit-identical for fixed (dim, seed, count).
SampleBatch sample_uniform(const ModelConfig &config, std::uint64_t seed, std::size_t count);

MomentReport moment_report(const SampleBatch &batch, const ModelConfig &config);

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of R's diagonal absorbed into Q so the result is unique per seed.
CMatrix random_unitary(int dim, std::uint64_t seed);

/// Applies U to every point of the batch, keeping weights and seed.
SampleBatch transform(const SampleBatch &batch, const CMatrix &unitary);

} // namespace phaseborn
