#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "cdsurface/types.hpp"

namespace cdsurface {

/// W(z) = z^{-R} C(z)^L with C the r x r cyclic matrix (ones on the diagonal
/// and superdiagonal, z in the lower-left corner).
struct CyclicUniform {
    int r = 2;
    int L = 1;
    int R = 1;
};

/// W(z) = z^{-M} [[1, 1], [z^k, 1]]^L with k odd.
struct TwoByTwoRootK {
    int k = 1;
    int L = 1;
    int M = 2;
};

/// A(z) = [[b0, a0], [a1 z, b1]], W(z) = z^{-(M+N)/2} A(z)^L.
struct Periodic2x1 {
    double a0 = 1, a1 = 1, b0 = 1, b1 = 1;
    int L = 2, M = 2, N = 2;
};

/// A = A_0 A_1 with A_l = [[b_{l,0}, a_{l,0}], [a_{l,1} z, b_{l,1}]],
/// W(z) = z^{-(M+N)/2} A(z)^{L/2}.
struct Periodic2x2 {
    double a[2][2] = {{1, 1}, {1, 1}};
    double b[2][2] = {{1, 1}, {1, 1}};
    int L = 2, M = 2, N = 2;
};

/// W(z) = z^{-N} I_r.
struct ScalarMonomial {
    int r = 1;
    int N = 1;
};

using WeightFamily = std::variant<CyclicUniform, TwoByTwoRootK, Periodic2x1, Periodic2x2, ScalarMonomial>;

/// Throws InvalidArgument when parameters violate the family constraints.
void validate(const WeightFamily& family);
int matrix_size(const WeightFamily& family);
std::string family_name(const WeightFamily& family);

/// Pointwise r x r weight. Throws PoleError at z = 0.
Mat eval_weight(const WeightFamily& family, cplx z);

/// Transition matrix A_l(z) with A_{l+q} = A_l. Throws UnsupportedFamily for
/// families without tiling structure.
Mat eval_transition(const WeightFamily& family, int ell, cplx z);
bool has_transition(const WeightFamily& family);
int transition_period(const WeightFamily& family);

/// Type-erased matrix weight used by the orthogonal polynomial machinery.
struct MatrixWeight {
    int r = 1;
    std::function<Mat(cplx)> eval;
};

MatrixWeight as_matrix_weight(const WeightFamily& family);

/// Constants derived from the 2x2 periodic weights.
struct Periodic2x2Constants {
    double a_plus = 0, a_minus = 0, b_plus = 0, b_minus = 0;
    double c0 = 0, c1 = 0, d = 0;
    double z1 = 0;                   // a_minus = 0 branch point
    double z_plus = 0, z_minus = 0;  // a_minus != 0 branch points
    double c = 0;
};

Periodic2x2Constants periodic2x2_constants(const Periodic2x2& p);

/// Segment [a, b] of a branch cut, or the ray from a through b when ray is set.
struct CutSegment {
    cplx a;
    cplx b;
    bool ray = false;

    double distance(cplx z) const;
};

/// Sheet-indexed closed-form eigendata of a weight family.
///
/// Sheets are numbered from 0. evec is the eigenvector column of W on the
/// sheet, evec_inv the matching row of E^{-1}, lambda the eigenvalue of W and
/// lambda_hat the eigenvalue of the transition matrix.
class SpectralData {
public:
    explicit SpectralData(WeightFamily family);

    int r() const { return r_; }
    const WeightFamily& family() const { return family_; }

    /// Algebraic coordinate of the surface point above z on the sheet.
    cplx eta(int sheet, cplx z) const;
    cplx lambda(int sheet, cplx z) const;
    cplx lambda_hat(int sheet, cplx z) const;
    Vec evec(int sheet, cplx z) const;
    RowVec evec_inv(int sheet, cplx z) const;

    Mat E(cplx z) const;
    Mat E_inv(cplx z) const;
    Vec lambdas(cplx z) const;

    const std::vector<CutSegment>& cuts() const { return cuts_; }
    double distance_to_cut(cplx z) const;

private:
    WeightFamily family_;
    int r_;
    std::vector<CutSegment> cuts_;
    Periodic2x2Constants k2x2_;
};

SpectralData spectral_data(const WeightFamily& family);

struct SpectralCheck {
    double residual = 0;
    bool near_cut = false;
};

inline constexpr double kCutWarningDistance = 1e-8;

/// Largest residual of W e = lambda e, e^{-1}_j e_k = delta_jk and sum_j e_j e^{-1}_j = I.
SpectralCheck check_spectral(const SpectralData& spectral, const WeightFamily& family, cplx z);

/// Principal square root of Delta for the 2x1 family.
cplx sqrt_delta_2x1(const Periodic2x1& p, cplx z);
/// Branch of sqrt(Delta) used for the 2x2 family.
cplx sqrt_delta_2x2(const Periodic2x2Constants& k, cplx z);

}  // namespace cdsurface
