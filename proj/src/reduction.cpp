#include "phaseborn/reduction.hpp"

#include <cmath>

#include "phaseborn/kernels.hpp"

namespace phaseborn {
namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};

CMatrix projector(const StateVector &phi) {
    CMatrix p = phi.amplitudes() * phi.amplitudes().adjoint();
    // Diagonal |φ_m|² and the mirrored off-diagonal entries are already exact;
    // clearing the diagonal imaginary parts guards against -0 noise.
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        p(i, i) = Complex(p(i, i).real(), 0.0);
        for (Eigen::Index j = i + 1; j < p.cols(); ++j) {
            p(j, i) = std::conj(p(i, j));
        }
    }
    return p;
}

} // namespace

DensityMatrix::DensityMatrix(CMatrix matrix, double hbar)
    : matrix_(std::move(matrix)), hbar_(hbar), min_eigenvalue_(0.0) {
    if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
        throw InvariantError("density matrix must be square and nonempty");
    }
    if (!matrix_.allFinite()) {
        throw InvariantError("density matrix has non-finite entries");
    }
    for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
        for (Eigen::Index j = i; j < matrix_.cols(); ++j) {
            if (matrix_(i, j) != std::conj(matrix_(j, i))) {
                throw InvariantError("density matrix is not exactly Hermitian");
            }
        }
    }
    const double tr = matrix_.trace().real();
    if (!(std::abs(tr - hbar) <= 1e-12 * std::max(1.0, hbar))) {
        throw InvariantError("density matrix trace " + std::to_string(tr) +
                             " differs from hbar " + std::to_string(hbar));
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(matrix_, Eigen::EigenvaluesOnly);
    min_eigenvalue_ = eig.eigenvalues().minCoeff();
    if (min_eigenvalue_ < -1e-10 * tr) {
        throw InvariantError("density matrix is not positive semidefinite: min eigenvalue " +
                             std::to_string(min_eigenvalue_));
    }
}

const char *to_string(ReductionMethod method) {
    return method == ReductionMethod::closed_form ? "closed_form" : "monte_carlo";
}

double ReductionReport::max_standard_error() const {
    return std::max(standard_error_real.maxCoeff(), standard_error_imag.maxCoeff());
}

DensityMatrix reduce_closed_form(const ClassicalState &state, const ModelConfig &config) {
    validate_dimensions(state, config);
    const int d = config.dim();
    const double hbar = config.hbar();
    return std::visit(
        overloaded{
            [&](const PointMass &p) { return DensityMatrix(hbar * projector(p.phi), hbar); },
            [&](const Mixture &m) {
                CMatrix sum = CMatrix::Zero(d, d);
                for (const auto &c : m.components()) {
                    sum += c.weight * projector(c.phi);
                }
                return DensityMatrix(hbar * sum, hbar);
            },
            [&](const Uniform &) {
                return DensityMatrix(CMatrix::Identity(d, d) * (hbar / d), hbar);
            },
            [](const WeightedDensity &) -> DensityMatrix {
                throw UnsupportedVariantError(
                    "weighted densities have no closed-form reduction; use reduce_monte_carlo");
            },
        },
        state);
}

ReductionReport reduce_batch(const SampleBatch &batch, const ModelConfig &config) {
    detail::require_dim(batch.dim(), config.dim(), "sample batch");
    auto moments = kernels::parallel::outer_moments(batch.points(), batch.weights());
    const auto spread =
        kernels::parallel::outer_spread(batch.points(), batch.weights(), moments.mean);

    const int d = config.dim();
    const double hbar = config.hbar();
    RMatrix se_re(d, d);
    RMatrix se_im(d, d);
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            se_re(m, n) =
                hbar * kernels::standard_error(spread.real(m, n), moments.weight_sum, batch.count());
            se_im(m, n) =
                hbar * kernels::standard_error(spread.imag(m, n), moments.weight_sum, batch.count());
        }
    }
    return ReductionReport{DensityMatrix(hbar * moments.mean, hbar),
                           std::move(se_re),
                           std::move(se_im),
                           batch.count(),
                           batch.seed(),
                           ReductionMethod::monte_carlo};
}

ReductionReport reduce_monte_carlo(const ClassicalState &state, const ModelConfig &config,
                                   std::uint64_t seed, std::size_t count) {
    if (count < 2) {
        throw EmptyBatchError("reduce_monte_carlo needs at least 2 samples for standard errors");
    }
    return reduce_batch(draw_samples(state, config, seed, count), config);
}

Expectation classical_expectation(const HermitianObservable &a, const SampleBatch &batch,
                                  const ModelConfig &config) {
    detail::require_dim(a.dim(), config.dim(), "observable");
    detail::require_dim(batch.dim(), config.dim(), "sample batch");
    const auto forms = kernels::parallel::form_values(a.matrix(), batch.points());
    if (forms.max_imag_residue > 1e-12 * (1.0 + a.scale())) {
        throw ConsistencyError("Hermitian form has imaginary part " +
                               std::to_string(forms.max_imag_residue));
    }
    const auto stats = kernels::parallel::scalar_moments(forms.values, batch.weights());
    const double hbar = config.hbar();
    return {hbar * stats.mean,
            hbar * kernels::standard_error(stats.spread, stats.weight_sum, batch.count())};
}

double quantum_expectation(const HermitianObservable &a, const DensityMatrix &rho) {
    detail::require_dim(a.dim(), rho.dim(), "observable");
    // Σ_nm A_nm ρ_mn
    const Complex value = a.matrix().cwiseProduct(rho.matrix().transpose()).sum();
    const double scale = (1.0 + a.scale()) * std::max(1.0, std::abs(rho.trace()));
    if (std::abs(value.imag()) > 1e-12 * scale) {
        throw ConsistencyError("tr(A rho) has imaginary part " + std::to_string(value.imag()));
    }
    return value.real();
}

double relative_difference(double reference, double value) {
    const double diff = std::abs(reference - value);
    return std::abs(reference) < kAbsoluteFloor ? diff : diff / std::abs(reference);
}

VerificationReport born_rule_verify(const HermitianObservable &a, const ClassicalState &state,
                                    const ModelConfig &config, std::uint64_t seed,
                                    std::size_t count, double tolerance) {
    if (count < 2) {
        throw EmptyBatchError("born_rule_verify needs at least 2 samples");
    }
    const SampleBatch batch = draw_samples(state, config, seed, count);
    const Expectation classical = classical_expectation(a, batch, config);
    const ReductionReport reduced = reduce_batch(batch, config);

    VerificationReport report;
    report.classical_value = classical.value;
    report.classical_standard_error = classical.standard_error;
    report.quantum_value = quantum_expectation(a, reduced.estimate);
    report.absolute_difference = std::abs(report.classical_value - report.quantum_value);
    report.relative_difference = relative_difference(report.classical_value, report.quantum_value);
    report.absolute_comparison = std::abs(report.classical_value) < kAbsoluteFloor;
    report.tolerance = tolerance;
    report.sample_count = count;
    report.seed = seed;
    report.pass = report.relative_difference <= tolerance;
    if (!std::holds_alternative<WeightedDensity>(state)) {
        report.closed_form_quantum_value =
            quantum_expectation(a, reduce_closed_form(state, config));
    }
    return report;
}

} // namespace phaseborn
