#pragma once

#include <stdexcept>
#include <string>

namespace specdiff {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: wrong shapes, non-finite entries, bad parameters.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Input expected to be Hermitian is not, beyond tolerance.
class NotHermitian : public Error {
public:
    NotHermitian(const std::string& what, double asymmetry)
        : Error(what), asymmetry_(asymmetry) {}
    double asymmetry() const noexcept { return asymmetry_; }

private:
    double asymmetry_;
};

/// An eigenvalue sits too close to a probe point, or two spectra touch.
class SpectralCollision : public Error {
public:
    SpectralCollision(const std::string& what, double nearest, double gap)
        : Error(what), nearest_(nearest), gap_(gap) {}
    /// Offending eigenvalue (or spectral point) closest to the probe.
    double nearest() const noexcept { return nearest_; }
    /// Measured distance.
    double gap() const noexcept { return gap_; }

private:
    double nearest_;
    double gap_;
};

/// Semigroup evaluation would overflow on growing modes.
class OverflowGuard : public Error {
public:
    OverflowGuard(const std::string& what, double exponent)
        : Error(what), exponent_(exponent) {}
    double exponent() const noexcept { return exponent_; }

private:
    double exponent_;
};

/// I + V0 T0(z) is numerically singular.
class SingularInverse : public Error {
public:
    SingularInverse(const std::string& what, double condition)
        : Error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// A declared decay or norm bound fails on the sampling grid.
class BoundViolation : public Error {
public:
    BoundViolation(const std::string& what, double where, double excess)
        : Error(what), where_(where), excess_(excess) {}
    double where() const noexcept { return where_; }
    double excess() const noexcept { return excess_; }

private:
    double where_;
    double excess_;
};

/// A discretized integral that should be finite diverges.
class Divergent : public Error {
public:
    using Error::Error;
};

}  // namespace specdiff
