#include "phaseborn/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <omp.h>

#include "phaseborn/rng.hpp"

namespace phaseborn::kernels {
namespace {

using Index = Eigen::Index;

// Draws columns [begin, end) of `points` from substream `block`.
void fill_block(CMatrix &points, std::uint64_t seed, std::size_t block) {
    const Index begin = static_cast<Index>(block * kBlockSize);
    const Index end = std::min<Index>(begin + static_cast<Index>(kBlockSize), points.cols());
    const Index dim = points.rows();
    Engine engine = make_substream(seed, block);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Index col = begin; col < end; ++col) {
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (Index n = 0; n < dim; ++n) {
                const double re = gauss(engine);
                const double im = gauss(engine);
                points(n, col) = Complex(re, im);
                norm2 += re * re + im * im;
            }
        } while (norm2 == 0.0);
        points.col(col) /= std::sqrt(norm2);
    }
}

// Mirrors the upper triangle so the result is Hermitian bit for bit.
void hermitize(CMatrix &m) {
    for (Index i = 0; i < m.rows(); ++i) {
        m(i, i) = Complex(m(i, i).real(), 0.0);
        for (Index j = i + 1; j < m.cols(); ++j) {
            m(j, i) = std::conj(m(i, j));
        }
    }
}

struct OuterPartial {
    CMatrix sum;
    double weight_sum = 0.0;
};

void accumulate_outer(const CMatrix &points, std::span<const double> weights, Index begin,
                      Index end, CMatrix &sum, double &weight_sum) {
    for (Index i = begin; i < end; ++i) {
        const double w = weights[static_cast<std::size_t>(i)];
        if (w == 0.0) {
            continue;
        }
        sum.noalias() += w * (points.col(i) * points.col(i).adjoint());
        weight_sum += w;
    }
}

void accumulate_spread(const CMatrix &points, std::span<const double> weights,
                       const CMatrix &mean, Index begin, Index end, OuterSpread &out,
                       CMatrix &scratch) {
    for (Index i = begin; i < end; ++i) {
        const double w = weights[static_cast<std::size_t>(i)];
        if (w == 0.0) {
            continue;
        }
        scratch.noalias() = points.col(i) * points.col(i).adjoint();
        scratch -= mean;
        out.real.array() += (w * w) * scratch.real().array().square();
        out.imag.array() += (w * w) * scratch.imag().array().square();
    }
}

OuterMoments finish_outer(CMatrix sum, double weight_sum) {
    if (!(weight_sum > 0.0)) {
        throw DegenerateBatchError("all sample weights are zero");
    }
    sum /= weight_sum;
    hermitize(sum);
    return {std::move(sum), weight_sum};
}

} // namespace

double standard_error(double spread, double weight_sum, std::size_t count) {
    if (count < 2 || !(weight_sum > 0.0)) {
        return 0.0;
    }
    const double n = static_cast<double>(count);
    return std::sqrt(std::max(spread, 0.0) * n / (n - 1.0)) / weight_sum;
}

void set_worker_count(int n) { omp_set_num_threads(std::max(n, 1)); }

int worker_count() { return omp_get_max_threads(); }

namespace reference {

void fill_uniform_sphere(CMatrix &points, std::uint64_t seed) {
    const std::size_t blocks = block_count(static_cast<std::size_t>(points.cols()));
    for (std::size_t b = 0; b < blocks; ++b) {
        fill_block(points, seed, b);
    }
}

OuterMoments outer_moments(const CMatrix &points, std::span<const double> weights) {
    CMatrix sum = CMatrix::Zero(points.rows(), points.rows());
    double weight_sum = 0.0;
    accumulate_outer(points, weights, 0, points.cols(), sum, weight_sum);
    return finish_outer(std::move(sum), weight_sum);
}

OuterSpread outer_spread(const CMatrix &points, std::span<const double> weights,
                         const CMatrix &mean) {
    const Index d = points.rows();
    OuterSpread out{RMatrix::Zero(d, d), RMatrix::Zero(d, d)};
    CMatrix scratch(d, d);
    accumulate_spread(points, weights, mean, 0, points.cols(), out, scratch);
    return out;
}

FormValues form_values(const CMatrix &observable, const CMatrix &points) {
    FormValues out;
    out.values.resize(static_cast<std::size_t>(points.cols()));
    for (Index i = 0; i < points.cols(); ++i) {
        const Complex f = points.col(i).dot(observable * points.col(i));
        out.values[static_cast<std::size_t>(i)] = f.real();
        out.max_imag_residue = std::max(out.max_imag_residue, std::abs(f.imag()));
    }
    return out;
}

ScalarMoments scalar_moments(std::span<const double> values, std::span<const double> weights) {
    ScalarMoments out;
    double weighted = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.weight_sum += weights[i];
        weighted += weights[i] * values[i];
    }
    if (!(out.weight_sum > 0.0)) {
        throw DegenerateBatchError("all sample weights are zero");
    }
    out.mean = weighted / out.weight_sum;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double dev = values[i] - out.mean;
        out.spread += weights[i] * weights[i] * dev * dev;
    }
    return out;
}

} // namespace reference

namespace parallel {

void fill_uniform_sphere(CMatrix &points, std::uint64_t seed) {
    const auto blocks = static_cast<std::int64_t>(block_count(static_cast<std::size_t>(points.cols())));
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < blocks; ++b) {
        fill_block(points, seed, static_cast<std::size_t>(b));
    }
}

OuterMoments outer_moments(const CMatrix &points, std::span<const double> weights) {
    const Index d = points.rows();
    const auto blocks = static_cast<std::int64_t>(block_count(static_cast<std::size_t>(points.cols())));
    std::vector<OuterPartial> partials(static_cast<std::size_t>(blocks),
                                       OuterPartial{CMatrix::Zero(d, d), 0.0});
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < blocks; ++b) {
        const Index begin = b * static_cast<Index>(kBlockSize);
        const Index end = std::min<Index>(begin + static_cast<Index>(kBlockSize), points.cols());
        auto &part = partials[static_cast<std::size_t>(b)];
        accumulate_outer(points, weights, begin, end, part.sum, part.weight_sum);
    }
    CMatrix sum = CMatrix::Zero(d, d);
    double weight_sum = 0.0;
    for (const auto &part : partials) {
        sum += part.sum;
        weight_sum += part.weight_sum;
    }
    return finish_outer(std::move(sum), weight_sum);
}

OuterSpread outer_spread(const CMatrix &points, std::span<const double> weights,
                         const CMatrix &mean) {
    const Index d = points.rows();
    const auto blocks = static_cast<std::int64_t>(block_count(static_cast<std::size_t>(points.cols())));
    std::vector<OuterSpread> partials(static_cast<std::size_t>(blocks),
                                      OuterSpread{RMatrix::Zero(d, d), RMatrix::Zero(d, d)});
#pragma omp parallel
    {
        CMatrix scratch(d, d);
#pragma omp for schedule(static)
        for (std::int64_t b = 0; b < blocks; ++b) {
            const Index begin = b * static_cast<Index>(kBlockSize);
            const Index end =
                std::min<Index>(begin + static_cast<Index>(kBlockSize), points.cols());
            accumulate_spread(points, weights, mean, begin, end,
                              partials[static_cast<std::size_t>(b)], scratch);
        }
    }
    OuterSpread out{RMatrix::Zero(d, d), RMatrix::Zero(d, d)};
    for (const auto &part : partials) {
        out.real += part.real;
        out.imag += part.imag;
    }
    return out;
}

FormValues form_values(const CMatrix &observable, const CMatrix &points) {
    FormValues out;
    const auto count = static_cast<std::int64_t>(points.cols());
    out.values.resize(static_cast<std::size_t>(count));
    double residue = 0.0;
#pragma omp parallel for schedule(static) reduction(max : residue)
    for (std::int64_t i = 0; i < count; ++i) {
        const Complex f = points.col(i).dot(observable * points.col(i));
        out.values[static_cast<std::size_t>(i)] = f.real();
        residue = std::max(residue, std::abs(f.imag()));
    }
    out.max_imag_residue = residue;
    return out;
}

ScalarMoments scalar_moments(std::span<const double> values, std::span<const double> weights) {
    const std::size_t n = values.size();
    const auto blocks = static_cast<std::int64_t>(block_count(n));
    std::vector<double> wsum(static_cast<std::size_t>(blocks), 0.0);
    std::vector<double> fsum(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < blocks; ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * kBlockSize;
        const std::size_t end = std::min(begin + kBlockSize, n);
        double ws = 0.0;
        double fs = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            ws += weights[i];
            fs += weights[i] * values[i];
        }
        wsum[static_cast<std::size_t>(b)] = ws;
        fsum[static_cast<std::size_t>(b)] = fs;
    }
    ScalarMoments out;
    double weighted = 0.0;
    for (std::size_t b = 0; b < wsum.size(); ++b) {
        out.weight_sum += wsum[b];
        weighted += fsum[b];
    }
    if (!(out.weight_sum > 0.0)) {
        throw DegenerateBatchError("all sample weights are zero");
    }
    out.mean = weighted / out.weight_sum;

    const double mean = out.mean;
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < blocks; ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * kBlockSize;
        const std::size_t end = std::min(begin + kBlockSize, n);
        double s = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            const double dev = values[i] - mean;
            s += weights[i] * weights[i] * dev * dev;
        }
        fsum[static_cast<std::size_t>(b)] = s;
    }
    for (double s : fsum) {
        out.spread += s;
    }
    return out;
}

} // namespace parallel
} // namespace phaseborn::kernels
