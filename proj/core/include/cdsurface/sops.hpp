#pragma once

#include <functional>
#include <vector>

#include "cdsurface/contour.hpp"
#include "cdsurface/linalg.hpp"
#include "cdsurface/mops.hpp"

namespace cdsurface {

using ScalarWeight = std::function<cplx(cplx)>;

/// Scalar orthogonal polynomials for a weight on a plane contour.
///
/// p[j] is monic of degree j (j = 0..n); q[j] has degree j with
/// int q_j w zeta^k dzeta = delta_{kj} for k <= j (j = 0..n-1).
struct ScalarOPSystem {
    int n = 0;
    std::vector<cplx> moments;
    std::vector<ScalarPolynomial> p, q;
    std::vector<double> condition;  // moment matrix of size j, scaled by the size-n norm (index j-1)
    std::vector<cplx> gram_inverse;   // row-major inverse of the moment matrix of size n
    bool complete = true;             // false when some p_j, j < n, does not exist
};

std::vector<cplx> scalar_moments(const ScalarWeight& weight, const ContourQuadrature& quad, int count);

ScalarOPSystem solve_scalar_ops(const ScalarWeight& weight, const ContourQuadrature& quad, int n,
                                double max_condition = kDefaultMaxCondition);

/// Throws SingularSystem when the system is not complete.
cplx scalar_cd_kernel_sum(const ScalarOPSystem& sys, cplx omega, cplx zeta);
cplx scalar_cd_kernel_moment(const ScalarOPSystem& sys, cplx omega, cplx zeta);
cplx scalar_cd_kernel(const ScalarOPSystem& sys, cplx omega, cplx zeta, double eps_switch = kDefaultSwitch);
/// [R(omega_a, zeta_b)] on two node lists.
Mat scalar_cd_kernel_grid(const ScalarOPSystem& sys, const std::vector<cplx>& omegas, const std::vector<cplx>& zetas,
                          double eps_switch = kDefaultSwitch);

/// 2 x 2 Riemann-Hilbert matrix built from p_n and q_{n-1}, and its inverse.
YResult assemble_scalar_Y(const ScalarOPSystem& sys, const ScalarWeight& weight, const ContourQuadrature& quad,
                          cplx zeta);
YResult assemble_scalar_Yinv(const ScalarOPSystem& sys, const ScalarWeight& weight, const ContourQuadrature& quad,
                             cplx zeta);
cplx scalar_kernel_from_Y(const ScalarOPSystem& sys, const ScalarWeight& weight, const ContourQuadrature& quad,
                          cplx omega, cplx zeta);

}  // namespace cdsurface
