#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cdsurface {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RowVec = Eigen::RowVectorXcd;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr cplx two_pi_i{0.0, 2.0 * pi};

/// Base class of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

/// A weight or kernel was evaluated at one of its poles.
struct PoleError : Error {
    using Error::Error;
};

/// A moment system is numerically singular, so the requested polynomials do not exist.
struct SingularSystem : Error {
    using Error::Error;
};

struct UnsupportedFamily : Error {
    using Error::Error;
};

/// A surface point lies in a pole set where the kernel is undefined.
struct DomainError : Error {
    using Error::Error;
};

/// Derived constants violate relations that always hold for positive weights.
struct InconsistentParameters : Error {
    using Error::Error;
};

struct GuardExceeded : Error {
    using Error::Error;
};

/// Integer power of a complex number; negative exponents invert.
cplx ipow(cplx z, int p);

/// Dense matrix power by binary exponentiation; negative exponents invert first.
Mat matrix_power(const Mat& a, int p);

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }
bool all_finite(const Mat& m);

}  // namespace cdsurface
