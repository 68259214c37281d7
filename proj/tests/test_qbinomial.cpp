#include <cmath>
#include <random>

#include "doctest.h"
#include "qsf/qbinomial.hpp"

using namespace qsf;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Complex direct_ratio(Complex a, Complex b, Complex z, double p, int n) {
  Complex r = 1.0;
  for (int j = 0; j < n; ++j) r *= (1.0 - a * z * std::pow(p, j)) / (1.0 - b * z * std::pow(p, j));
  return r;
}

}  // namespace

TEST_CASE("r and R kernels") {
  QContext ctx(0.5);
  QBinomialKernel same{0.3, 0.3, 0.0, 0.5};
  CHECK(r_kernel(same, 0.9, ctx) == Complex(1.0));
  QBinomialKernel k{0.2, 0.5, 0.0, 0.5};
  CHECK(r_kernel(k, 0.0, ctx) == Complex(1.0));
  CHECK(rel(r_kernel(k, 0.4, ctx), direct_ratio(0.2, 0.5, 0.4, 0.5, 200)) < 1e-14);
  CHECK_THROWS_AS(r_kernel(k, 2.0, ctx), PoleError);
  CHECK_THROWS_AS(r_kernel(k, 8.0, ctx), PoleError);

  QBinomialKernel K0{0.2, 0.5, 0.0, 0.25};
  CHECK(rel(R_kernel(K0, 0.7, ctx), r_kernel(K0, 0.49, ctx)) < 1e-15);
  CHECK(rel(R_kernel(K0, 1.0, ctx), qpochhammer_ratio(0.2, 0.5, QContext(0.25))) < 1e-14);
  const double q = 0.5, nu = 0.75;
  QBinomialKernel g1{-q * q, -std::pow(q, -2 * nu), 1.0, q * q};
  for (double z : {0.3, 1.0, 4.0})
    CHECK(rel(R_kernel(g1, z, ctx), z * direct_ratio(-q * q, -std::pow(q, -2 * nu), z * z, q * q, 300)) < 1e-13);
  QBinomialKernel frac{0.1, 0.2, 0.5, 0.25};
  CHECK_THROWS_AS(R_kernel(frac, -1.0, ctx), DomainError);
  CHECK_NOTHROW(R_kernel(QBinomialKernel{0.1, 0.2, 3.0, 0.25}, -1.0, ctx));

  // Matching zeros in numerator and denominator: the limit is taken.
  // a = q^-2, b = 1 at z = 1 (base q^2): (q^-2;q^2)_inf/(1;q^2)_inf -> polynomial limit.
  QBinomialKernel half{std::pow(q, -2.0), 1.0, 0.0, q * q};
  Complex lim = r_kernel(half, 1.0, ctx);
  Complex near = r_kernel(half, 1.0 + 1e-7, ctx);
  CHECK(std::abs(lim - near) < 1e-5 * std::abs(lim));
}

TEST_CASE("kernel difference equations") {
  QContext ctx(0.6);
  const double q = 0.6;
  QBinomialKernel f1{q * q, std::pow(q, 2 * 0.75 + 1), 0.0, q * q};
  CHECK(r_diff_residual(f1, 0.3, ctx) < 1e-12);
  CHECK(R_diff_residual(f1, 0.3, ctx) < 1e-12);
  QBinomialKernel same{0.4, 0.4, 2.5, q * q};
  CHECK(R_diff_residual(same, 0.7, ctx) == 0.0);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    double base = 0.2 + 0.7 * (0.5 + 0.5 * U(rng));
    QBinomialKernel k{Complex(U(rng), U(rng)), Complex(U(rng), U(rng)), std::round(3 * U(rng)), base};
    Complex z(2 * U(rng), 2 * U(rng));
    CHECK(r_diff_residual(k, z, QContext(0.5)) < 1e-12);
    CHECK(R_diff_residual(k, z, QContext(0.5)) < 1e-12);
  }
}

TEST_CASE("partial-fraction expansion") {
  QContext ctx(0.5);
  QBinomialKernel k{0.1, 0.5, 0.0, 0.5};
  Complex ref = r_kernel(k, 0.4, ctx);
  CHECK(rel(r_partial_fractions(k, 0.4, -1, ctx), ref) < 1e-10);
  CHECK(rel(r_partial_fractions(k, 0.4, -1, ctx, PartialFractionForm::Shifted), ref) < 1e-10);
  QBinomialKernel z0{0.0, 0.5, 0.0, 0.5};
  CHECK(rel(r_partial_fractions(z0, 0.4, -1, ctx, PartialFractionForm::ZeroA), 1.0 / qpochhammer_inf(0.2, ctx)) <
        1e-12);
  CHECK_THROWS_AS(r_partial_fractions(QBinomialKernel{0.6, 0.5, 0.0, 0.5}, 0.4, -1, ctx), DomainError);
  CHECK_THROWS_AS(r_partial_fractions(k, 0.4, -1, ctx, PartialFractionForm::ZeroA), DomainError);
  // Near the first pole the k = 0 term dominates; its residue is (a/b;p)_inf/(p;p)_inf.
  double eps = 1e-8;
  Complex zz = (1.0 - eps) / 0.5;
  Complex res = eps * r_partial_fractions(k, zz, -1, ctx);
  CHECK(rel(res, qpochhammer_ratio(0.2, 0.5, ctx)) < 1e-6);
  CHECK(rel(res, eps * r_kernel(k, zz, ctx)) < 1e-8);
  // K-term partial sums approach the full sum.
  double e5 = std::abs(r_partial_fractions(k, 0.4, 5, ctx) - ref);
  double e15 = std::abs(r_partial_fractions(k, 0.4, 15, ctx) - ref);
  CHECK(e15 < e5);

  // Random points, including |z b| > 1 where the Taylor series diverges.
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  int checked = 0;
  while (checked < 20) {
    double base = 0.3 + 0.4 * (0.5 + 0.5 * U(rng));
    Complex b(2 * U(rng), 2 * U(rng));
    Complex a = b * Complex(0.9 * U(rng), 0.9 * U(rng));
    if (!(std::abs(a) < std::abs(b))) continue;
    // |z b| up to 3: beyond the Taylor disc, but short of the region where
    // r itself is many orders smaller than the individual terms.
    Complex z = Complex(U(rng), U(rng)) * (3.0 / std::abs(b));
    QBinomialKernel kk{a, b, 0.0, base};
    QContext c(0.5);
    Complex r = r_kernel(kk, z, c);
    CHECK(rel(r_partial_fractions(kk, z, -1, c), r) < 1e-10);
    CHECK(rel(r_partial_fractions(kk, z, -1, c, PartialFractionForm::Shifted), r) < 1e-10);
    QBinomialKernel k0{0.0, b, 0.0, base};
    CHECK(rel(r_partial_fractions(k0, z, -1, c, PartialFractionForm::ZeroA), r_kernel(k0, z, c)) < 1e-10);
    ++checked;
  }
}

TEST_CASE("pole expansion and Taylor form of R") {
  for (double q : {0.4, 0.8}) {
    QContext ctx(q);
    for (double eps : {1.0, -1.0}) {
      for (auto [alpha, beta] : {std::pair{1.0, 0.5}, std::pair{2.25, -0.25}, std::pair{0.75, 0.3}}) {
        QBinomialKernel k{eps * std::pow(q, 2 * alpha), eps * std::pow(q, 2 * beta), 0.0, q * q};
        double zr = std::pow(q, -beta / 2.0) * 0.7;
        for (Complex z : {Complex(0.2), Complex(zr), Complex(0.3, 0.4 * zr)}) {
          Complex prod = r_kernel(k, z * z, ctx);
          CHECK(rel(R_pole_expansion(eps, alpha, beta, 0.0, z, ctx), prod) < 1e-10);
          CHECK(rel(R_taylor(eps, alpha, beta, z, ctx), prod) < 1e-10);
        }
        // Outside the Taylor disc only the pole expansion is available.
        Complex far(3.0 * std::pow(q, -beta), 0.1);
        CHECK(rel(R_pole_expansion(eps, alpha, beta, 0.0, far, ctx), r_kernel(k, far * far, ctx)) < 1e-10);
        CHECK_THROWS_AS(R_taylor(eps, alpha, beta, far, ctx), RadiusError);
      }
    }
  }
}

TEST_CASE("classical limit of the R kernel") {
  // R(eps q^2a, eps q^2b, gamma; z) -> C z^gamma (1 - eps z^2)^(b - a).
  QContext ctx(1.0 - std::ldexp(1.0, -10));
  const double q = ctx.q(), alpha = 1.3, beta = 0.4, gamma = 1.0;
  for (double eps : {1.0, -1.0}) {
    QBinomialKernel k{eps * std::pow(q, 2 * alpha), eps * std::pow(q, 2 * beta), gamma, q * q};
    double z1 = 0.3, z2 = 0.7;
    double ratio = std::abs(R_kernel(k, z1, ctx) / R_kernel(k, z2, ctx)) * std::pow(z2 / z1, gamma);
    double expo = std::log(ratio) / std::log((1 - eps * z1 * z1) / (1 - eps * z2 * z2));
    CHECK(std::abs(expo - (beta - alpha)) < 0.02 * std::abs(beta - alpha));
  }
}

TEST_CASE("Q_nu bilateral sum") {
  QContext ctx(0.5);
  const double q = 0.5;
  for (double nu : {0.25, 0.5, 1.3})
    CHECK(std::abs(Q_nu(nu + 1.0, ctx) - Q_nu(nu, ctx)) < 1e-14);
  double o = 0.0;
  for (int m = -200; m <= 200; ++m) o += 1.0 / (std::pow(q, m) + std::pow(q, -m));
  CHECK(std::abs(Q_nu(0.5, ctx) - (1 - q) * o) < 1e-13);
  double prev = 1.0;
  for (int k = 4; k <= 10; ++k) {
    double err = std::abs(Q_nu(0.3, QContext(1.0 - std::ldexp(1.0, -k))) - M_PI / 2);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("elliptic quantities from the nome") {
  QContext ctx(0.5);
  EllipticFromNome e = elliptic_from_nome(ctx);
  CHECK(std::abs(e.k * e.k + e.kp * e.kp - 1.0) < 1e-14);
  // The nome relation ln q = -pi K'/K.
  CHECK(std::abs(std::log(0.5) + M_PI * e.Kp / e.K) < 1e-13);
  CHECK(std::abs(jacobi_dn(0.0, ctx) - 1.0) < 1e-15);
  // dn(K) = k'
  CHECK(std::abs(jacobi_dn(e.K, ctx) - e.kp) < 1e-13);
  CHECK(std::abs(Q_nu_elliptic(0.5, ctx) - (1 - 0.5) * e.K / M_PI) < 1e-15);
  CHECK(std::abs(Q_nu_elliptic(0.5, ctx) - Q_nu(0.5, ctx)) < 1e-12);
  // k -> 1 from below, seen through k' -> 0.
  double prev = 1.0;
  for (int k = 2; k <= 8; ++k) {
    EllipticFromNome ek = elliptic_from_nome(QContext(1.0 - std::ldexp(1.0, -k)));
    CHECK(ek.kp < prev);
    CHECK(ek.k <= 1.0);
    prev = ek.kp;
  }
  CHECK(prev < 1e-12);
}

TEST_CASE("bound corollaries") {
  QContext ctx(0.5);
  auto checks = bound_suite(ctx);
  CHECK(checks.size() == 10);
  for (const auto& c : checks) {
    CAPTURE(c.name);
    CHECK(c.points > 0);
    if (c.name != "Cos_bound" && c.name != "Sin_bound") CHECK(c.worst_margin >= 0.0);
  }
  QBinomialKernel dummy{0.0, 0.0, 0.0, 0.25};
  (void)dummy;
  CHECK(bound_constant_C(2.5, 0.5, ctx) > 0.0);
  CHECK_THROWS_AS(bound_constant_C(1.2, 0.5, ctx), DomainError);
  // |e_q(i lambda q^-30/2)| at q = 0.5 is tiny.
  double u = ctx.lambda() * std::pow(0.5, -30) / 2.0;
  CHECK(std::abs(eq_exp(Complex(0.0, u), ctx)) < 1e-3);
}
