#pragma once

#include <vector>

#include "cdsurface/contour.hpp"
#include "cdsurface/linalg.hpp"
#include "cdsurface/weights.hpp"

namespace cdsurface {

/// Bilinear pairing <P, Q> = int_gamma P(z) W(z) Q(z) dz.
Mat pairing(const MatrixPolynomial& p, const MatrixPolynomial& q, const MatrixWeight& weight,
            const ContourQuadrature& quad);

/// Moments M_k = int_gamma z^k W(z) dz for k = 0..2N.
std::vector<Mat> compute_moments(const MatrixWeight& weight, const ContourQuadrature& quad, int N);

/// Matrix orthogonal polynomials of one weight up to degree N.
///
/// PL[j], PR[j] are monic of degree j (j = 0..N). QL[j], QR[j] have degree j
/// (j = 0..N-1) and are normalized by <QL_j, z^j I> = <z^j I, QR_j> = I.
struct MOPSystem {
    int r = 0;
    int N = 0;
    std::vector<Mat> moments;
    std::vector<MatrixPolynomial> PL, PR, QL, QR;
    std::vector<Mat> kappaL, kappaR;           // leading coefficients of QL_j, QR_j
    std::vector<double> condition;             // block moment matrix of size j, scaled by the size-N norm (index j-1)
    std::vector<double> kappa_condition;       // condition of kappaL_j (equal to that of kappaR_j in exact arithmetic)
    Mat gram_inverse;                          // inverse of the block moment matrix of size N
    /// False when some block moment matrix of size j < N is singular. The
    /// polynomials of those degrees do not exist and the sum form is unavailable.
    bool complete = true;
};

/// Solves the block linear systems defining the four families.
/// Throws SingularSystem when the moment matrix of size N is numerically
/// singular; smaller singular blocks only clear `complete`.
/// reference is the size of the integrand, e.g. sum |w_j| |W(z_j)| max(1, |z_j|)^{2N}; block
/// matrices below kMomentFloor * reference count as singular. 0 disables the floor.
MOPSystem solve_mops(const std::vector<Mat>& moments, int N, double max_condition = kDefaultMaxCondition,
                     double reference = 0.0);

MOPSystem build_mops(const MatrixWeight& weight, const ContourQuadrature& quad, int N,
                     double max_condition = kDefaultMaxCondition);

struct KernelSums {
    Mat qr_pl;  // sum_j QR_j(w) PL_j(z)
    Mat pr_ql;  // sum_j PR_j(w) QL_j(z)
};

KernelSums cd_kernel_sum_both(const MOPSystem& sys, cplx w, cplx z);
/// Throws SingularSystem when the system is not complete.
Mat cd_kernel_sum(const MOPSystem& sys, cplx w, cplx z);
/// sum_{a,b} w^a G_{ab} z^b with G the inverse block moment matrix of size N.
Mat cd_kernel_moment(const MOPSystem& sys, cplx w, cplx z);

inline constexpr double kDefaultSwitch = 1e-6;

/// (z - w)^{-1} (QR_{N-1}(w) PL_N(z) - PR_N(w) QL_{N-1}(z)); falls back to the
/// moment form when |z - w| < eps_switch.
Mat cd_kernel_formula(const MOPSystem& sys, cplx w, cplx z, double eps_switch = kDefaultSwitch);

/// Block matrix [R_N(w_a, z_b)] of size r|ws| x r|zs|, same switching rule as cd_kernel_formula.
Mat cd_kernel_grid(const MOPSystem& sys, const std::vector<cplx>& ws, const std::vector<cplx>& zs,
                   double eps_switch = kDefaultSwitch);

inline constexpr double kNearContour = 1e-3;

struct YResult {
    Mat value;
    bool near_contour = false;
};

/// 2r x 2r solution of the Riemann-Hilbert problem built from PL_N and QL_{N-1}.
YResult assemble_Y(const MOPSystem& sys, const MatrixWeight& weight, const ContourQuadrature& quad, cplx z);
/// Its inverse built from QR_{N-1} and PR_N.
YResult assemble_Yinv(const MOPSystem& sys, const MatrixWeight& weight, const ContourQuadrature& quad, cplx z);

/// (2 pi i (z - w))^{-1} (0 I) Y^{-1}(w) Y(z) (I 0)^T.
Mat kernel_from_Y(const MOPSystem& sys, const MatrixWeight& weight, const ContourQuadrature& quad, cplx w, cplx z);

/// Jump matrix [[I, W], [0, I]] at a contour point.
Mat jump_matrix(const MatrixWeight& weight, cplx z);

}  // namespace cdsurface
