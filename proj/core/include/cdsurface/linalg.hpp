#pragma once

#include <string>
#include <vector>

#include <Eigen/LU>

#include "cdsurface/types.hpp"

namespace cdsurface {

inline constexpr double kDefaultMaxCondition = 1e12;
/// Moment matrices smaller than this fraction of the integrand size are treated as zero.
inline constexpr double kMomentFloor = 1e-12;

/// LU factorization with partial pivoting and a one-norm condition estimate.
///
/// Construction throws SingularSystem when the estimated condition number
/// exceeds max_condition.
class LinearSolver {
public:
    LinearSolver(const Mat& a, double max_condition = kDefaultMaxCondition, const std::string& what = "linear system");

    /// Solves A X = B.
    Mat solve(const Mat& b) const;
    /// Solves X A = B.
    Mat solve_left(const Mat& b) const;

    double condition() const { return condition_; }

private:
    Eigen::PartialPivLU<Mat> lu_, lu_t_;
    double condition_ = 0.0;
};

/// Scalar polynomial with coefficients in increasing degree.
struct ScalarPolynomial {
    std::vector<cplx> coeffs;

    cplx operator()(cplx z) const {
        cplx acc{0.0, 0.0};
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
        return acc;
    }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// Matrix polynomial sum_k C_k z^k with rectangular coefficient blocks.
struct MatrixPolynomial {
    std::vector<Mat> coeffs;
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;

    MatrixPolynomial() = default;
    MatrixPolynomial(std::vector<Mat> c);

    Mat operator()(cplx z) const;
    /// Evaluation as an explicit coefficient sum, used to cross-check Horner.
    Mat eval_naive(cplx z) const;
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    static MatrixPolynomial monomial(int k, Eigen::Index r);
};

}  // namespace cdsurface
