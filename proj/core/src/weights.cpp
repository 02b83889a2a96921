#include "cdsurface/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cdsurface {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& msg) {
    if (!ok) throw InvalidArgument(msg);
}

void require_nonzero(cplx z, const char* who) {
    if (z == cplx{0.0, 0.0}) throw PoleError(std::string(who) + ": z = 0 is a pole of the weight");
}

Mat cyclic_matrix(int r, cplx z) {
    Mat c = Mat::Zero(r, r);
    for (int i = 0; i < r; ++i) {
        c(i, i) = 1.0;
        if (i + 1 < r) c(i, i + 1) = 1.0;
    }
    c(r - 1, 0) += z;
    return c;
}

Mat two_by_two(cplx p, cplx q, cplx s, cplx t) {
    Mat m(2, 2);
    m << p, q, s, t;
    return m;
}

Mat periodic2x2_factor(const Periodic2x2& p, int ell, cplx z) {
    const int l = ((ell % 2) + 2) % 2;
    return two_by_two(p.b[l][0], p.a[l][0], p.a[l][1] * z, p.b[l][1]);
}

}  // namespace

void validate(const WeightFamily& family) {
    std::visit(overloaded{
                   [](const CyclicUniform& f) {
                       require(f.r >= 2, "cyclic: r must be at least 2");
                       require(f.L >= 1 && f.R >= 1, "cyclic: L and R must be positive");
                   },
                   [](const TwoByTwoRootK& f) {
                       require(f.k >= 1 && f.k % 2 == 1, "root-k: k must be odd and positive");
                       require(f.L >= 1 && f.M >= 1, "root-k: L and M must be positive");
                   },
                   [](const Periodic2x1& f) {
                       require(f.a0 > 0 && f.a1 > 0 && f.b0 > 0 && f.b1 > 0, "periodic-2x1: weights must be positive");
                       require(f.L >= 1 && f.M >= 0 && f.N >= 0, "periodic-2x1: bad sizes");
                       require((f.M + f.N) % 2 == 0, "periodic-2x1: M + N must be even");
                   },
                   [](const Periodic2x2& f) {
                       for (int l = 0; l < 2; ++l)
                           for (int j = 0; j < 2; ++j)
                               require(f.a[l][j] > 0 && f.b[l][j] > 0, "periodic-2x2: weights must be positive");
                       require(f.L >= 2 && f.L % 2 == 0, "periodic-2x2: L must be even and positive");
                       require(f.M >= 0 && f.N >= 0 && (f.M + f.N) % 2 == 0, "periodic-2x2: M + N must be even");
                   },
                   [](const ScalarMonomial& f) { require(f.r >= 1 && f.N >= 0, "scalar-monomial: bad sizes"); },
               },
               family);
}

int matrix_size(const WeightFamily& family) {
    return std::visit(overloaded{
                          [](const CyclicUniform& f) { return f.r; },
                          [](const TwoByTwoRootK&) { return 2; },
                          [](const Periodic2x1&) { return 2; },
                          [](const Periodic2x2&) { return 2; },
                          [](const ScalarMonomial& f) { return f.r; },
                      },
                      family);
}

std::string family_name(const WeightFamily& family) {
    return std::visit(overloaded{
                          [](const CyclicUniform&) { return std::string("cyclic"); },
                          [](const TwoByTwoRootK&) { return std::string("root-k"); },
                          [](const Periodic2x1&) { return std::string("periodic-2x1"); },
                          [](const Periodic2x2&) { return std::string("periodic-2x2"); },
                          [](const ScalarMonomial&) { return std::string("scalar-monomial"); },
                      },
                      family);
}

Mat eval_weight(const WeightFamily& family, cplx z) {
    require_nonzero(z, "eval_weight");
    return std::visit(overloaded{
                          [&](const CyclicUniform& f) -> Mat {
                              return matrix_power(cyclic_matrix(f.r, z), f.L) * ipow(z, -f.R);
                          },
                          [&](const TwoByTwoRootK& f) -> Mat {
                              return matrix_power(two_by_two(1.0, 1.0, ipow(z, f.k), 1.0), f.L) * ipow(z, -f.M);
                          },
                          [&](const Periodic2x1& f) -> Mat {
                              return matrix_power(two_by_two(f.b0, f.a0, f.a1 * z, f.b1), f.L) *
                                     ipow(z, -(f.M + f.N) / 2);
                          },
                          [&](const Periodic2x2& f) -> Mat {
                              const Mat a = periodic2x2_factor(f, 0, z) * periodic2x2_factor(f, 1, z);
                              return matrix_power(a, f.L / 2) * ipow(z, -(f.M + f.N) / 2);
                          },
                          [&](const ScalarMonomial& f) -> Mat {
                              return Mat::Identity(f.r, f.r) * ipow(z, -f.N);
                          },
                      },
                      family);
}

Mat eval_transition(const WeightFamily& family, int ell, cplx z) {
    return std::visit(overloaded{
                          [&](const CyclicUniform& f) -> Mat { return cyclic_matrix(f.r, z); },
                          [&](const Periodic2x1& f) -> Mat { return two_by_two(f.b0, f.a0, f.a1 * z, f.b1); },
                          [&](const Periodic2x2& f) -> Mat { return periodic2x2_factor(f, ell, z); },
                          [&](const auto& f) -> Mat {
                              throw UnsupportedFamily(family_name(WeightFamily(f)) + " has no transition matrices");
                          },
                      },
                      family);
}

bool has_transition(const WeightFamily& family) {
    return std::holds_alternative<CyclicUniform>(family) || std::holds_alternative<Periodic2x1>(family) ||
           std::holds_alternative<Periodic2x2>(family);
}

int transition_period(const WeightFamily& family) { return std::holds_alternative<Periodic2x2>(family) ? 2 : 1; }

MatrixWeight as_matrix_weight(const WeightFamily& family) {
    validate(family);
    return MatrixWeight{matrix_size(family), [family](cplx z) { return eval_weight(family, z); }};
}

Periodic2x2Constants periodic2x2_constants(const Periodic2x2& p) {
    Periodic2x2Constants k;
    const double a00 = p.a[0][0], a01 = p.a[0][1], a10 = p.a[1][0], a11 = p.a[1][1];
    const double b00 = p.b[0][0], b01 = p.b[0][1], b10 = p.b[1][0], b11 = p.b[1][1];
    k.a_plus = a11 * a00 + a01 * a10;
    k.a_minus = a11 * a00 - a01 * a10;
    k.b_plus = b01 * b11 + b00 * b10;
    k.b_minus = b01 * b11 - b00 * b10;
    k.c0 = (a00 * b11 + a10 * b00) * (a11 * b01 + a01 * b10);
    k.c1 = (a01 * b11 + a11 * b00) * (a10 * b01 + a00 * b10);
    k.d = a00 * b11 + a10 * b00;
    const double s = k.c0 + k.c1;
    k.z1 = -k.b_minus * k.b_minus / (2.0 * s);
    if (k.a_minus != 0.0) {
        const double disc = s * s - k.a_minus * k.a_minus * k.b_minus * k.b_minus;
        const double root = std::sqrt(std::max(disc, 0.0));
        const double a2 = k.a_minus * k.a_minus;
        k.z_plus = (-s + root) / a2;
        k.z_minus = (-s - root) / a2;
        const double sm = std::sqrt(std::abs(k.z_minus));
        const double sp = std::sqrt(std::abs(k.z_plus));
        k.c = (sm - sp) / (sm + sp);
    }
    return k;
}

double CutSegment::distance(cplx z) const {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(z - a);
    double t = ((z - a) * std::conj(d)).real() / len2;
    if (t < 0.0) t = 0.0;
    if (!ray && t > 1.0) t = 1.0;
    return std::abs(z - (a + t * d));
}

cplx sqrt_delta_2x1(const Periodic2x1& p, cplx z) {
    const double z1 = -(p.b0 - p.b1) * (p.b0 - p.b1) / (4.0 * p.a0 * p.a1);
    return std::sqrt(4.0 * p.a0 * p.a1 * (z - z1));
}

cplx sqrt_delta_2x2(const Periodic2x2Constants& k, cplx z) {
    if (k.a_minus == 0.0) return std::sqrt(2.0 * (k.c0 + k.c1)) * std::sqrt(z - k.z1);
    return k.a_minus * std::sqrt(z - k.z_plus) * std::sqrt(z - k.z_minus);
}

SpectralData::SpectralData(WeightFamily family) : family_(std::move(family)), r_(matrix_size(family_)) {
    validate(family_);
    const cplx origin{0.0, 0.0};
    const cplx left{-1.0, 0.0};
    std::visit(overloaded{
                   [&](const CyclicUniform&) { cuts_.push_back({origin, left, true}); },
                   [&](const TwoByTwoRootK&) { cuts_.push_back({origin, left, true}); },
                   [&](const Periodic2x1& f) {
                       const double z1 = -(f.b0 - f.b1) * (f.b0 - f.b1) / (4.0 * f.a0 * f.a1);
                       cuts_.push_back({cplx{z1, 0.0}, cplx{z1 - 1.0, 0.0}, true});
                   },
                   [&](const Periodic2x2& f) {
                       k2x2_ = periodic2x2_constants(f);
                       if (k2x2_.a_minus == 0.0)
                           cuts_.push_back({cplx{k2x2_.z1, 0.0}, cplx{k2x2_.z1 - 1.0, 0.0}, true});
                       else
                           cuts_.push_back({cplx{k2x2_.z_minus, 0.0}, cplx{k2x2_.z_plus, 0.0}, false});
                   },
                   [&](const ScalarMonomial&) {},
               },
               family_);
}

double SpectralData::distance_to_cut(cplx z) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : cuts_) best = std::min(best, c.distance(z));
    return best;
}

cplx SpectralData::eta(int sheet, cplx z) const {
    if (sheet < 0 || sheet >= r_) throw InvalidArgument("sheet index out of range");
    const double sign = sheet == 0 ? 1.0 : -1.0;
    return std::visit(overloaded{
                          [&](const CyclicUniform& f) -> cplx {
                              const cplx rho = std::polar(1.0, 2.0 * pi * sheet / f.r);
                              return rho * std::pow(z, 1.0 / f.r);
                          },
                          [&](const TwoByTwoRootK& f) -> cplx { return sign * ipow(std::sqrt(z), f.k); },
                          [&](const Periodic2x1& f) -> cplx { return sign * sqrt_delta_2x1(f, z); },
                          [&](const Periodic2x2&) -> cplx { return sign * sqrt_delta_2x2(k2x2_, z); },
                          [&](const ScalarMonomial&) -> cplx { return cplx(sheet, 0.0); },
                      },
                      family_);
}

cplx SpectralData::lambda_hat(int sheet, cplx z) const {
    const cplx e = eta(sheet, z);
    return std::visit(overloaded{
                          [&](const CyclicUniform&) -> cplx { return 1.0 + e; },
                          [&](const TwoByTwoRootK&) -> cplx { return 1.0 + e; },
                          [&](const Periodic2x1& f) -> cplx { return (f.b0 + f.b1 + e) / 2.0; },
                          [&](const Periodic2x2&) -> cplx { return (k2x2_.a_plus * z + k2x2_.b_plus + e) / 2.0; },
                          [&](const ScalarMonomial&) -> cplx {
                              throw UnsupportedFamily("scalar-monomial has no transition eigenvalue");
                          },
                      },
                      family_);
}

cplx SpectralData::lambda(int sheet, cplx z) const {
    require_nonzero(z, "lambda");
    return std::visit(overloaded{
                          [&](const CyclicUniform& f) -> cplx { return ipow(lambda_hat(sheet, z), f.L) * ipow(z, -f.R); },
                          [&](const TwoByTwoRootK& f) -> cplx { return ipow(lambda_hat(sheet, z), f.L) * ipow(z, -f.M); },
                          [&](const Periodic2x1& f) -> cplx {
                              return ipow(lambda_hat(sheet, z), f.L) * ipow(z, -(f.M + f.N) / 2);
                          },
                          [&](const Periodic2x2& f) -> cplx {
                              return ipow(lambda_hat(sheet, z), f.L / 2) * ipow(z, -(f.M + f.N) / 2);
                          },
                          [&](const ScalarMonomial& f) -> cplx {
                              (void)sheet;
                              return ipow(z, -f.N);
                          },
                      },
                      family_);
}

Vec SpectralData::evec(int sheet, cplx z) const {
    const cplx e = eta(sheet, z);
    Vec v(r_);
    std::visit(overloaded{
                   [&](const CyclicUniform&) {
                       cplx p{1.0, 0.0};
                       for (int i = 0; i < r_; ++i, p *= e) v(i) = p;
                   },
                   [&](const TwoByTwoRootK&) { v << 1.0, e; },
                   [&](const Periodic2x1& f) { v << 1.0, (f.b1 - f.b0 + e) / (2.0 * f.a0); },
                   [&](const Periodic2x2&) { v << 1.0, (k2x2_.b_minus - k2x2_.a_minus * z + e) / (2.0 * k2x2_.d); },
                   [&](const ScalarMonomial&) {
                       v.setZero();
                       v(sheet) = 1.0;
                   },
               },
               family_);
    return v;
}

RowVec SpectralData::evec_inv(int sheet, cplx z) const {
    const cplx e = eta(sheet, z);
    RowVec v(r_);
    std::visit(overloaded{
                   [&](const CyclicUniform&) {
                       const cplx inv = 1.0 / e;
                       cplx p{1.0 / r_, 0.0};
                       for (int i = 0; i < r_; ++i, p *= inv) v(i) = p;
                   },
                   [&](const TwoByTwoRootK&) { v << 0.5, 0.5 / e; },
                   [&](const Periodic2x1& f) { v << (e - f.b1 + f.b0) / (2.0 * e), f.a0 / e; },
                   [&](const Periodic2x2&) {
                       v << (k2x2_.a_minus * z + e - k2x2_.b_minus) / (2.0 * e), k2x2_.d / e;
                   },
                   [&](const ScalarMonomial&) {
                       v.setZero();
                       v(sheet) = 1.0;
                   },
               },
               family_);
    return v;
}

Mat SpectralData::E(cplx z) const {
    Mat m(r_, r_);
    for (int k = 0; k < r_; ++k) m.col(k) = evec(k, z);
    return m;
}

Mat SpectralData::E_inv(cplx z) const {
    Mat m(r_, r_);
    for (int k = 0; k < r_; ++k) m.row(k) = evec_inv(k, z);
    return m;
}

Vec SpectralData::lambdas(cplx z) const {
    Vec v(r_);
    for (int k = 0; k < r_; ++k) v(k) = lambda(k, z);
    return v;
}

SpectralData spectral_data(const WeightFamily& family) { return SpectralData(family); }

SpectralCheck check_spectral(const SpectralData& spectral, const WeightFamily& family, cplx z) {
    SpectralCheck out;
    out.near_cut = spectral.distance_to_cut(z) < kCutWarningDistance;
    const Mat w = eval_weight(family, z);
    const int r = spectral.r();
    const double wscale = std::max(1.0, w.cwiseAbs().maxCoeff());
    Mat sum = Mat::Zero(r, r);
    for (int k = 0; k < r; ++k) {
        const Vec e = spectral.evec(k, z);
        const cplx lam = spectral.lambda(k, z);
        const double escale = std::max(1.0, e.cwiseAbs().maxCoeff());
        out.residual = std::max(out.residual, (w * e - lam * e).cwiseAbs().maxCoeff() / (wscale * escale));
        for (int j = 0; j < r; ++j) {
            const cplx ip = spectral.evec_inv(j, z) * e;
            out.residual = std::max(out.residual, std::abs(ip - (j == k ? 1.0 : 0.0)));
        }
        sum += e * spectral.evec_inv(k, z);
    }
    out.residual = std::max(out.residual, (sum - Mat::Identity(r, r)).cwiseAbs().maxCoeff());
    return out;
}

}  // namespace cdsurface
