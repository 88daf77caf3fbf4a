#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace phaseborn {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

/// Tolerance on |Σ|ψ_n|² − 1| for any point accepted as lying on the sphere.
inline constexpr double kSphereTolerance = 1e-12;

/// Width of the statistical envelope used by every Monte Carlo check.
inline constexpr double kSigmaEnvelope = 5.0;

// Error hierarchy. Every failure the engine reports derives from Error so the
// CLI can map it onto the operational exit code.

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A value violates the invariant of the domain type it was meant to build.
class InvariantError : public Error {
  public:
    using Error::Error;
};

class DimensionMismatchError : public Error {
  public:
    using Error::Error;
};

/// A sample batch with zero points was requested or supplied.
class EmptyBatchError : public Error {
  public:
    using Error::Error;
};

/// Every weight in a batch is zero, so self-normalized estimators are undefined.
class DegenerateBatchError : public Error {
  public:
    using Error::Error;
};

/// The operation does not apply to this ClassicalState variant.
class UnsupportedVariantError : public Error {
  public:
    using Error::Error;
};

/// A quantity that must be real by construction carries a significant
/// imaginary residue, which means a Hermitian invariant was corrupted.
class ConsistencyError : public Error {
  public:
    using Error::Error;
};

namespace detail {

inline void require_dim(Eigen::Index got, Eigen::Index want, const std::string &what) {
    if (got != want) {
        throw DimensionMismatchError(what + ": dimension " + std::to_string(got) +
                                     " does not match " + std::to_string(want));
    }
}

inline double max_abs(const CMatrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

} // namespace detail
} // namespace phaseborn
