#include "phaseborn/sphere.hpp"

#include <cmath>
#include <random>

#include "phaseborn/kernels.hpp"
#include "phaseborn/rng.hpp"

namespace phaseborn {

ModelConfig::ModelConfig(int dim, double hbar) : dim_(dim), hbar_(hbar) {
    if (dim < 1) {
        throw InvariantError("model dimension must be at least 1, got " + std::to_string(dim));
    }
    if (!(hbar > 0.0) || !std::isfinite(hbar)) {
        throw InvariantError("hbar must be a positive finite number");
    }
}

StateVector::StateVector(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) {
        throw InvariantError("state vector must have at least one component");
    }
    const double norm2 = amplitudes_.squaredNorm();
    if (!(std::abs(norm2 - 1.0) <= kSphereTolerance)) {
        throw InvariantError("state vector is off the unit sphere: |psi|^2 = " +
                             std::to_string(norm2));
    }
}

StateVector StateVector::normalized(const CVector &v) {
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw InvariantError("cannot normalize a zero or non-finite vector");
    }
    return StateVector(v / norm);
}

StateVector StateVector::basis(int dim, int k) {
    if (dim < 1 || k < 0 || k >= dim) {
        throw InvariantError("basis index out of range");
    }
    CVector v = CVector::Zero(dim);
    v(k) = 1.0;
    return StateVector(std::move(v));
}

SampleBatch::SampleBatch(CMatrix points, std::vector<double> weights, std::uint64_t seed)
    : points_(std::move(points)), weights_(std::move(weights)), seed_(seed) {
    if (points_.cols() == 0) {
        throw EmptyBatchError("sample batch has no points");
    }
    if (points_.rows() == 0) {
        throw InvariantError("sample points must have at least one component");
    }
    if (weights_.size() != count()) {
        throw InvariantError("sample batch has " + std::to_string(count()) + " points but " +
                             std::to_string(weights_.size()) + " weights");
    }
    bool any_positive = false;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw InvariantError("sample weights must be finite and nonnegative");
        }
        any_positive = any_positive || w > 0.0;
    }
    if (!any_positive) {
        throw DegenerateBatchError("all sample weights are zero");
    }
    for (Eigen::Index i = 0; i < points_.cols(); ++i) {
        if (!(std::abs(points_.col(i).squaredNorm() - 1.0) <= kSphereTolerance)) {
            throw InvariantError("sample point " + std::to_string(i) + " is off the unit sphere");
        }
    }
}

SampleBatch::SampleBatch(CMatrix points, std::uint64_t seed)
    : SampleBatch(points, std::vector<double>(static_cast<std::size_t>(points.cols()), 1.0),
                  seed) {}

StateVector SampleBatch::point(std::size_t i) const {
    return StateVector(points_.col(static_cast<Eigen::Index>(i)));
}

bool MomentReport::within_envelope(double sigmas) const {
    const auto d = mean.rows();
    for (Eigen::Index m = 0; m < d; ++m) {
        for (Eigen::Index n = 0; n < d; ++n) {
            const double ref = m == n ? 1.0 / static_cast<double>(d) : 0.0;
            const double dre = std::abs(mean(m, n).real() - ref);
            const double dim = std::abs(mean(m, n).imag());
            if (dre > sigmas * standard_error_real(m, n) + 1e-12 ||
                dim > sigmas * standard_error_imag(m, n) + 1e-12) {
                return false;
            }
        }
    }
    return true;
}

SampleBatch sample_uniform(const ModelConfig &config, std::uint64_t seed, std::size_t count) {
    if (count == 0) {
        throw EmptyBatchError("sample_uniform needs count >= 1");
    }
    CMatrix points(config.dim(), static_cast<Eigen::Index>(count));
    kernels::parallel::fill_uniform_sphere(points, seed);
    return SampleBatch(std::move(points), seed);
}

MomentReport moment_report(const SampleBatch &batch, const ModelConfig &config) {
    detail::require_dim(batch.dim(), config.dim(), "sample batch");
    auto moments = kernels::parallel::outer_moments(batch.points(), batch.weights());
    auto spread = kernels::parallel::outer_spread(batch.points(), batch.weights(), moments.mean);

    const auto d = batch.dim();
    MomentReport report;
    report.count = batch.count();
    report.standard_error_real = RMatrix::Zero(d, d);
    report.standard_error_imag = RMatrix::Zero(d, d);
    for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
            report.standard_error_real(m, n) =
                kernels::standard_error(spread.real(m, n), moments.weight_sum, batch.count());
            report.standard_error_imag(m, n) =
                kernels::standard_error(spread.imag(m, n), moments.weight_sum, batch.count());
        }
    }
    const CMatrix reference = CMatrix::Identity(d, d) / static_cast<double>(d);
    report.max_deviation = detail::max_abs(moments.mean - reference);
    report.max_standard_error = std::max(report.standard_error_real.maxCoeff(),
                                         report.standard_error_imag.maxCoeff());
    report.mean = std::move(moments.mean);
    return report;
}

CMatrix random_unitary(int dim, std::uint64_t seed) {
    if (dim < 1) {
        throw InvariantError("random_unitary needs dim >= 1");
    }
    Engine engine(substream_seed(seed, 0));
    std::normal_distribution<double> gauss(0.0, 1.0);
    CMatrix z(dim, dim);
    for (int col = 0; col < dim; ++col) {
        for (int row = 0; row < dim; ++row) {
            const double re = gauss(engine);
            const double im = gauss(engine);
            z(row, col) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < dim; ++k) {
        const double mag = std::abs(r(k, k));
        const Complex phase = mag > 0.0 ? r(k, k) / mag : Complex(1.0);
        q.col(k) *= phase;
    }
    return q;
}

SampleBatch transform(const SampleBatch &batch, const CMatrix &unitary) {
    detail::require_dim(unitary.rows(), batch.dim(), "unitary rows");
    detail::require_dim(unitary.cols(), batch.dim(), "unitary columns");
    CMatrix points = unitary * batch.points();
    return SampleBatch(std::move(points),
                       std::vector<double>(batch.weights().begin(), batch.weights().end()),
                       batch.seed());
}

} // namespace phaseborn
