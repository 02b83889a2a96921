#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cdsurface/contour.hpp"
#include "cdsurface/mops.hpp"
#include "cdsurface/sops.hpp"
#include "cdsurface/weights.hpp"

namespace cdsurface {

/// A zero or pole of e or e^{-1}, stored through its preimage in the zeta-plane.
struct LedgerPoint {
    std::string label;
    std::optional<cplx> preimage;  // empty means zeta = infinity
    int order = 0;                 // positive for zeros, minus the pole order for poles
    bool is_phi_infinity = false;  // the point equals phi(infinity)
};

struct PoleZeroLedger {
    std::vector<LedgerPoint> Z, Q, Zhat, Qhat;
    /// Preimages of the points infinity^(j) that differ from phi(infinity), one per sheet.
    std::vector<cplx> other_infinities;
};

struct ChartOptions {
    std::size_t nodes = 0;    // 0 selects default_node_count()
    double margin = 0.0;      // relative margin of the 2x2 (a_- != 0) circle; 0 selects the balanced radius
    double radius = 0.0;      // 0 selects the automatic radius of centered circles
};

/// Uniformization of a genus-0 spectral surface by the zeta-plane.
///
/// All maps are the closed forms of the family; e and e^{-1} are evaluated at
/// phi(zeta) directly from zeta, so no branch choice is involved.
struct Genus0Chart {
    int r = 0;
    int N = 0;  // matrix polynomial size
    WeightFamily family;
    std::optional<SpectralData> spectral;

    std::function<cplx(cplx)> phi_fn, dphi_fn, eta_fn, h_fn, hhat_fn, lambda_hat_fn;
    std::function<Vec(cplx)> evec_fn;
    std::function<RowVec(cplx)> evec_inv_fn, hhat_evec_inv_fn;
    std::function<cplx(cplx, cplx)> phi_inv_point_fn;  // (z, eta) -> zeta
    int lambda_hat_power = 1;  // lambda = lambda_hat^power * phi^{-z_power}
    int z_power = 0;

    ContourQuadrature gamma_C;
    PoleZeroLedger ledger;
    bool V_is_full = false;

    cplx phi(cplx zeta) const { return phi_fn(zeta); }
    cplx dphi(cplx zeta) const { return dphi_fn(zeta); }
    cplx eta(cplx zeta) const { return eta_fn(zeta); }
    cplx h(cplx zeta) const { return h_fn(zeta); }
    cplx hhat(cplx zeta) const { return hhat_fn(zeta); }
    Vec evec(cplx zeta) const { return evec_fn(zeta); }
    RowVec evec_inv(cplx zeta) const { return evec_inv_fn(zeta); }
    /// hhat(zeta) e^{-1}(phi(zeta)) without the removable singularities of the factors.
    RowVec hhat_evec_inv(cplx zeta) const { return hhat_evec_inv_fn(zeta); }
    cplx lambda_hat(cplx zeta) const { return lambda_hat_fn(zeta); }
    cplx lambda(cplx zeta) const;
    cplx scalar_weight(cplx zeta) const;

    int sheet_of(cplx zeta) const;
    cplx phi_inv(int sheet, cplx z) const;

    /// h and hhat recomputed from the ledger by the defining products.
    cplx h_from_ledger(cplx zeta) const;
    cplx hhat_from_ledger(cplx zeta) const;

    /// p(zeta) = P(phi(zeta)) e(phi(zeta)) h(zeta) for a 1 x r polynomial P.
    cplx v_element(const MatrixPolynomial& p, cplx zeta) const;
    /// p(zeta) = hhat(zeta) e^{-1}(phi(zeta)) P(phi(zeta)) for an r x 1 polynomial P.
    cplx vstar_element(const MatrixPolynomial& p, cplx zeta) const;
    /// The 1 x r polynomials e_i^T z^d spanning L_N.
    std::vector<MatrixPolynomial> row_basis() const;
    std::vector<MatrixPolynomial> column_basis() const;

    ScalarWeight weight_fn() const;
};

/// Closed-form chart of a family; N is the matrix polynomial size.
Genus0Chart build_chart(const WeightFamily& family, int N, const ChartOptions& options = {});

/// e^{-1}(w^(j)) R_N(w, z) e(z^(k)).
cplx r_lambda(const SpectralData& spectral, const MOPSystem& sys, int w_sheet, cplx w, int z_sheet, cplx z);
/// [R^lambda(w^(j), z^(k))]_{jk} = E(w)^{-1} R_N(w, z) E(z).
Mat r_lambda_matrix(const SpectralData& spectral, const MOPSystem& sys, cplx w, cplx z);

/// hhat(omega) R^lambda(phi(omega), phi(zeta)) h(zeta).
cplx frak_R(const Genus0Chart& chart, const MOPSystem& sys, cplx omega, cplx zeta);

/// |sum_j int_gamma f(w^(j)) lambda(w^(j)) R^lambda(w^(j), z^(k)) dw - f(z^(k))| with f = P e.
double check_reproducing_surface(const SpectralData& spectral, const MOPSystem& sys, const ContourQuadrature& gamma,
                                 const MatrixPolynomial& p, int z_sheet, cplx z);
/// |sum_j int_gamma R^lambda(w^(k), z^(j)) lambda(z^(j)) f(z^(j)) dz - f(w^(k))| with f = e^{-1} P.
double check_reproducing_surface_dual(const SpectralData& spectral, const MOPSystem& sys,
                                      const ContourQuadrature& gamma, const MatrixPolynomial& p, int w_sheet, cplx w);

using ScalarKernel = std::function<cplx(cplx, cplx)>;

/// |int_{gamma_C} p(omega) W(omega) K(omega, zeta) d omega - p(zeta)|.
double check_reproducing_plane(const Genus0Chart& chart, const ScalarKernel& kernel,
                               const std::function<cplx(cplx)>& p, cplx zeta);
/// |int_{gamma_C} K(omega, zeta) W(zeta) p(zeta) d zeta - p(omega)|.
double check_reproducing_plane_dual(const Genus0Chart& chart, const ScalarKernel& kernel,
                                    const std::function<cplx(cplx)>& p, cplx omega);

}  // namespace cdsurface
