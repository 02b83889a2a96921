#include "cdsurface/linalg.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace cdsurface {

LinearSolver::LinearSolver(const Mat& a, double max_condition, const std::string& what) {
    if (a.rows() != a.cols() || a.rows() == 0) throw InvalidArgument(what + ": matrix must be square and non-empty");
    if (!all_finite(a)) throw SingularSystem(what + ": non-finite entries");
    lu_.compute(a);
    lu_t_.compute(a.transpose());
    const double rcond = lu_.rcond();
    condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(condition_ <= max_condition)) {
        std::ostringstream msg;
        msg << what << ": numerically singular (condition estimate " << condition_ << ")";
        throw SingularSystem(msg.str());
    }
}

Mat LinearSolver::solve(const Mat& b) const { return lu_.solve(b); }

Mat LinearSolver::solve_left(const Mat& b) const {
    // X A = B  <=>  A^T X^T = B^T
    return lu_t_.solve(b.transpose()).transpose();
}

MatrixPolynomial::MatrixPolynomial(std::vector<Mat> c) : coeffs(std::move(c)) {
    if (coeffs.empty()) throw InvalidArgument("MatrixPolynomial: no coefficients");
    rows = coeffs.front().rows();
    cols = coeffs.front().cols();
    for (const auto& m : coeffs)
        if (m.rows() != rows || m.cols() != cols) throw InvalidArgument("MatrixPolynomial: inconsistent block sizes");
}

Mat MatrixPolynomial::operator()(cplx z) const {
    Mat acc = coeffs.back();
    for (int k = degree() - 1; k >= 0; --k) acc = acc * z + coeffs[k];
    return acc;
}

Mat MatrixPolynomial::eval_naive(cplx z) const {
    Mat acc = Mat::Zero(rows, cols);
    for (int k = 0; k <= degree(); ++k) acc += coeffs[k] * std::pow(z, k);
    return acc;
}

MatrixPolynomial MatrixPolynomial::monomial(int k, Eigen::Index r) {
    std::vector<Mat> c(k + 1, Mat::Zero(r, r));
    c[k] = Mat::Identity(r, r);
    return MatrixPolynomial(std::move(c));
}

}  // namespace cdsurface
