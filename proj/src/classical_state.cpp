#include "phaseborn/classical_state.hpp"

#include <cmath>
#include <random>

#include "phaseborn/kernels.hpp"
#include "phaseborn/rng.hpp"

namespace phaseborn {
namespace {

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};

double overlap2(const StateVector &phi, const CVector &psi) {
    return std::norm(phi.amplitudes().dot(psi));
}

double kernel_weight(const DensityKernel &kernel, const CVector &psi) {
    return std::visit(overloaded{
                          [&](const ProjectivePower &k) {
                              return std::pow(overlap2(k.phi, psi), static_cast<double>(k.k));
                          },
                          [&](const ExponentialOverlap &k) {
                              return std::exp(k.kappa() * overlap2(k.phi(), psi));
                          },
                      },
                      kernel);
}

const StateVector &kernel_phi(const DensityKernel &kernel) {
    return std::visit(overloaded{
                          [](const ProjectivePower &k) -> const StateVector & { return k.phi; },
                          [](const ExponentialOverlap &k) -> const StateVector & {
                              return k.phi();
                          },
                      },
                      kernel);
}

SampleBatch draw_mixture(const Mixture &mix, const ModelConfig &config, std::uint64_t seed,
                         std::size_t count) {
    const auto &comps = mix.components();
    std::vector<double> cdf;
    cdf.reserve(comps.size());
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t k = 0; k < comps.size(); ++k) {
        acc += comps[k].weight;
        cdf.push_back(acc);
        if (comps[k].weight > 0.0) {
            last_positive = k;
        }
    }

    CMatrix points(config.dim(), static_cast<Eigen::Index>(count));
    const auto blocks = static_cast<std::int64_t>(block_count(count));
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < blocks; ++b) {
        Engine engine = make_substream(seed, static_cast<std::uint64_t>(b));
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        const std::size_t begin = static_cast<std::size_t>(b) * kBlockSize;
        const std::size_t end = std::min(begin + kBlockSize, count);
        for (std::size_t i = begin; i < end; ++i) {
            const double u = uniform(engine);
            std::size_t pick = last_positive;
            for (std::size_t k = 0; k < cdf.size(); ++k) {
                if (u < cdf[k] && comps[k].weight > 0.0) {
                    pick = k;
                    break;
                }
            }
            points.col(static_cast<Eigen::Index>(i)) = comps[pick].phi.amplitudes();
        }
    }
    return SampleBatch(std::move(points), seed);
}

} // namespace

Mixture::Mixture(std::vector<MixtureComponent> components) : components_(std::move(components)) {
    if (components_.empty()) {
        throw InvariantError("mixture has no components");
    }
    double total = 0.0;
    for (const auto &c : components_) {
        if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) {
            throw InvariantError("mixture weights must be finite and nonnegative");
        }
        if (c.phi.dim() != components_.front().phi.dim()) {
            throw DimensionMismatchError("mixture components have different dimensions");
        }
        total += c.weight;
    }
    if (!(std::abs(total - 1.0) <= 1e-12)) {
        throw InvariantError("mixture weights sum to " + std::to_string(total) + ", not 1");
    }
}

ExponentialOverlap::ExponentialOverlap(StateVector phi, double kappa)
    : phi_(std::move(phi)), kappa_(kappa) {
    if (!(kappa >= 0.0) || !std::isfinite(std::exp(kappa))) {
        throw InvariantError("kappa must be nonnegative with finite exp(kappa)");
    }
}

const char *variant_name(const ClassicalState &state) {
    return std::visit(overloaded{
                          [](const PointMass &) { return "point_mass"; },
                          [](const Mixture &) { return "mixture"; },
                          [](const Uniform &) { return "uniform"; },
                          [](const WeightedDensity &w) {
                              return std::holds_alternative<ProjectivePower>(w.kernel)
                                         ? "projective_power"
                                         : "exponential_overlap";
                          },
                      },
                      state);
}

void validate_dimensions(const ClassicalState &state, const ModelConfig &config) {
    std::visit(overloaded{
                   [&](const PointMass &p) {
                       detail::require_dim(p.phi.dim(), config.dim(), "point mass phi");
                   },
                   [&](const Mixture &m) {
                       for (const auto &c : m.components()) {
                           detail::require_dim(c.phi.dim(), config.dim(), "mixture component phi");
                       }
                   },
                   [](const Uniform &) {},
                   [&](const WeightedDensity &w) {
                       detail::require_dim(kernel_phi(w.kernel).dim(), config.dim(),
                                           "density kernel phi");
                   },
               },
               state);
}

double density_eval(const ClassicalState &state, const StateVector &psi) {
    return std::visit(overloaded{
                          [](const PointMass &) -> double {
                              throw UnsupportedVariantError(
                                  "a point mass has no density relative to the sphere measure");
                          },
                          [](const Mixture &) -> double {
                              throw UnsupportedVariantError(
                                  "a mixture of point masses has no density relative to the "
                                  "sphere measure");
                          },
                          [](const Uniform &) { return 1.0; },
                          [&](const WeightedDensity &w) {
                              detail::require_dim(psi.dim(), kernel_phi(w.kernel).dim(),
                                                  "state vector");
                              return kernel_weight(w.kernel, psi.amplitudes());
                          },
                      },
                      state);
}

SampleBatch draw_samples(const ClassicalState &state, const ModelConfig &config,
                         std::uint64_t seed, std::size_t count) {
    if (count == 0) {
        throw EmptyBatchError("draw_samples needs count >= 1");
    }
    validate_dimensions(state, config);
    return std::visit(
        overloaded{
            [&](const PointMass &p) {
                CMatrix points = p.phi.amplitudes().replicate(1, static_cast<Eigen::Index>(count));
                return SampleBatch(std::move(points), seed);
            },
            [&](const Mixture &m) { return draw_mixture(m, config, seed, count); },
            [&](const Uniform &) { return sample_uniform(config, seed, count); },
            [&](const WeightedDensity &w) {
                CMatrix points(config.dim(), static_cast<Eigen::Index>(count));
                kernels::parallel::fill_uniform_sphere(points, seed);
                std::vector<double> weights(count);
                const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
                for (std::int64_t i = 0; i < n; ++i) {
                    weights[static_cast<std::size_t>(i)] = kernel_weight(w.kernel, points.col(i));
                }
                return SampleBatch(std::move(points), std::move(weights), seed);
            },
        },
        state);
}

} // namespace phaseborn
