#pragma once

// Data-parallel inner loops of the Monte Carlo engine.
//
// `parallel` kernels split work into fixed blocks of kBlockSize samples,
// process blocks concurrently with OpenMP, and combine per-block partial sums
// in block order. Their results depend only on the inputs, never on the
// number of threads. `reference` kernels are plain serial loops kept for
// tests and benchmarks; they agree with `parallel` up to summation roundoff.
// Sampling is the exception: both variants draw block b from substream b and
// so produce bit-identical points.

#include <cstdint>
#include <span>
#include <vector>

#include "phaseborn/core.hpp"

namespace phaseborn::kernels {

struct OuterMoments {
    /// Σ w ψψ† / Σ w, exactly Hermitian.
    CMatrix mean;
    double weight_sum = 0.0;
};

/// Entrywise Σ w² (f − μ)², real and imaginary parts separately.
struct OuterSpread {
    RMatrix real;
    RMatrix imag;
};

/// Real form values f_i = Re ψ_i†Aψ_i and the largest discarded |Im ψ_i†Aψ_i|.
struct FormValues {
    std::vector<double> values;
    double max_imag_residue = 0.0;
};

struct ScalarMoments {
    double mean = 0.0;
    double weight_sum = 0.0;
    /// Σ w² (f − μ)²
    double spread = 0.0;
};

namespace reference {

void fill_uniform_sphere(CMatrix &points, std::uint64_t seed);
OuterMoments outer_moments(const CMatrix &points, std::span<const double> weights);
OuterSpread outer_spread(const CMatrix &points, std::span<const double> weights,
                         const CMatrix &mean);
FormValues form_values(const CMatrix &observable, const CMatrix &points);
ScalarMoments scalar_moments(std::span<const double> values, std::span<const double> weights);

} // namespace reference

namespace parallel {

void fill_uniform_sphere(CMatrix &points, std::uint64_t seed);
OuterMoments outer_moments(const CMatrix &points, std::span<const double> weights);
OuterSpread outer_spread(const CMatrix &points, std::span<const double> weights,
                         const CMatrix &mean);
FormValues form_values(const CMatrix &observable, const CMatrix &points);
ScalarMoments scalar_moments(std::span<const double> values, std::span<const double> weights);

} // namespace parallel

/// Standard error of a self-normalized weighted mean from its spread term:
/// sqrt(N/(N−1) · Σw²(f−μ)²) / Σw. Zero for N < 2. With unit weights this is
/// the sample standard deviation over √N.
double standard_error(double spread, double weight_sum, std::size_t count);

/// Sets the OpenMP worker count used by `parallel` kernels (n ≥ 1).
void set_worker_count(int n);
int worker_count();

} // namespace phaseborn::kernels
