#pragma once

#include <cstdint>
#include <random>

#include "phaseborn/core.hpp"
#include "phaseborn/observable.hpp"

namespace testing {

/// Random Hermitian matrix with entries of order one.
inline phaseborn::CMatrix random_hermitian(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    phaseborn::CMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            m(i, j) = {g(rng), g(rng)};
        }
    }
    return (m + m.adjoint()) / 2.0;
}

inline phaseborn::CVector random_vector(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    phaseborn::CVector v(dim);
    for (int i = 0; i < dim; ++i) {
        v(i) = {g(rng), g(rng)};
    }
    return v;
}

inline double max_abs(const phaseborn::CMatrix &m) { return m.cwiseAbs().maxCoeff(); }

} // namespace testing
