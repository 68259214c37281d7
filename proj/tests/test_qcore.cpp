#include <cmath>
#include <vector>

#include "doctest.h"
#include "qsf/qcore.hpp"

using namespace qsf;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Plain partial product, no tail logic.
Complex direct_product(Complex a, double q, int n) {
  Complex p = 1.0;
  for (int j = 0; j < n; ++j) p *= 1.0 - a * std::pow(q, j);
  return p;
}

}  // namespace

TEST_CASE("context and tolerance validation") {
  CHECK_THROWS_AS(QContext(0.0), DomainError);
  CHECK_THROWS_AS(QContext(1.0), DomainError);
  CHECK_THROWS_AS(QContext(-0.5), DomainError);
  CHECK_THROWS_AS(QContext(0.5, Tolerance{0.0, 10, 3}), DomainError);
  CHECK_THROWS_AS(QContext(0.5, Tolerance{1e-13, 0, 3}), DomainError);
  CHECK_THROWS_AS(QContext(0.5, Tolerance{1e-13, 10, 0}), DomainError);
  QContext ctx(0.7);
  CHECK(ctx.lambda() == 1.0 - 0.7 * 0.7);
  CHECK(ctx.squared().q() == 0.7 * 0.7);
  CHECK(ctx.budget() == 5000);
  CHECK(QContext(1.0 - 1.0 / 256).budget() > 5000);
}

TEST_CASE("finite q-Pochhammer") {
  CHECK(qpochhammer_n(3.7, 0.5, 0) == Complex(1.0));
  CHECK(qpochhammer_n(1.0, 0.5, 3) == Complex(0.0));
  CHECK(std::abs(qpochhammer_n(0.5, 0.5, 2) - 0.375) < 1e-15);
  CHECK_THROWS_AS(qpochhammer_n(0.5, 0.5, -1), DomainError);
  Complex a(0.3, -0.8);
  for (int n = 0; n < 20; ++n)
    CHECK(rel(qpochhammer_n(a, 0.6, n + 1), qpochhammer_n(a, 0.6, n) * (1.0 - a * std::pow(0.6, n))) < 1e-14);
}

TEST_CASE("infinite q-Pochhammer") {
  QContext ctx(0.5);
  CHECK(qpochhammer_inf(0.0, ctx) == Complex(1.0));
  CHECK(rel(qpochhammer_inf(0.5, ctx) / 0.5, qpochhammer_inf(0.25, ctx)) < 1e-14);
  CHECK(rel(qpochhammer_inf(0.3, ctx), direct_product(0.3, 0.5, 200)) < 1e-14);
  CHECK_THROWS_AS(qpochhammer_inf(0.3, QContext(0.5, Tolerance{1e-13, 5, 3})), TailNotConverged);
  QContext near1(0.99);
  CHECK(rel(qpochhammer_inf(Complex(0.2, 0.4), near1), direct_product(Complex(0.2, 0.4), 0.99, 6000)) < 1e-12);
  CHECK(rel(qpochhammer_ratio(0.3, 0.7, ctx), qpochhammer_inf(0.3, ctx) / qpochhammer_inf(0.7, ctx)) < 1e-14);
  CHECK_THROWS_AS(qpochhammer_ratio(0.3, 4.0, ctx), PoleError);
  CHECK(std::abs(log_abs_qpochhammer_inf(Complex(3.0, 5.0), ctx) -
                 std::log(std::abs(direct_product(Complex(3.0, 5.0), 0.5, 200)))) < 1e-12);
}

TEST_CASE("q-Gamma and q-Beta") {
  for (double q : {0.3, 0.5, 0.9}) {
    QContext ctx(q);
    CHECK(std::abs(qgamma(1.0, ctx) - 1.0) < 1e-14);
    CHECK(std::abs(qgamma(2.0, ctx) - 1.0) < 1e-14);
    for (double nu : {0.3, 1.2, 2.7}) {
      double lhs = qgamma(nu + 1.0, ctx);
      double rhs = (1.0 - std::pow(q, nu)) / (1.0 - q) * qgamma(nu, ctx);
      CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-12);
      CHECK(std::abs(qgamma_reciprocal(nu, ctx) * qgamma(nu, ctx) - 1.0) < 1e-13);
    }
    CHECK_THROWS_AS(qgamma(0.0, ctx), PoleError);
    CHECK_THROWS_AS(qgamma(-2.0, ctx), PoleError);
    CHECK(qgamma_reciprocal(-1.0, ctx) == 0.0);
    CHECK(std::abs(qbeta(1.0, 1.0, ctx) - 1.0) < 1e-14);
    CHECK(std::abs(qbeta(0.7, 1.9, ctx) - qbeta(1.9, 0.7, ctx)) < 1e-13);
  }
  CHECK(std::abs(qgamma(0.5, QContext(0.9)) - std::sqrt(M_PI)) / std::sqrt(M_PI) < 0.03);
  // Approaches the classical value as q -> 1.
  double prev = 1.0;
  for (int k = 3; k <= 10; ++k) {
    double err = std::abs(qgamma(2.5, QContext(1.0 - std::ldexp(1.0, -k))) - std::tgamma(2.5));
    CHECK(err < prev);
    prev = err;
  }
  QContext c81(0.81);
  CHECK(std::abs(qbeta(1.5, 0.5, c81) - qgamma(1.5, c81) * qgamma(0.5, c81) / qgamma(2.0, c81)) < 1e-14);
}

TEST_CASE("q-exponentials") {
  QContext ctx(0.5);
  CHECK(eq_exp(0.0, ctx) == Complex(1.0));
  CHECK(Eq_exp(0.0, ctx) == Complex(1.0));
  CHECK(std::abs(eq_exp(0.4, ctx) * qpochhammer_inf(0.4, ctx) - 1.0) < 1e-15);
  QContext c6(0.6);
  CHECK(std::abs(eq_exp(Complex(0, 0.7), c6) * Eq_exp(Complex(0, -0.7), c6) - 1.0) < 1e-14);
  CHECK(std::abs(Eq_exp(-1.0, ctx)) < 1e-300);
  CHECK_THROWS_AS(eq_exp(4.0, ctx), PoleError);
  for (Complex u : {Complex(0.3, 0.1), Complex(-0.8, 0.0), Complex(0.0, 0.95)}) {
    CHECK(rel(eq_exp(u, ctx), eq_exp_series(u, ctx)) < 1e-12);
    CHECK(rel(Eq_exp(u, ctx), Eq_exp_series(u, ctx)) < 1e-12);
  }
  CHECK(rel(Eq_exp(Complex(3.0, -2.0), ctx), Eq_exp_series(Complex(3.0, -2.0), ctx)) < 1e-12);
  CHECK_THROWS_AS(eq_exp_series(1.2, ctx), RadiusError);
  for (double q : {0.3, 0.5, 0.9}) {
    QContext c(q);
    for (Complex u : {Complex(0.3, 0.4), Complex(5.0, -7.0), Complex(-20.0, 0.0)})
      CHECK(std::abs(eq_exp(u, c) * Eq_exp(-u, c) - 1.0) < 1e-12);
  }
}

TEST_CASE("e_q(q) E_q(1/q) product identity") {
  QContext ctx(0.5);
  double q = 0.5;
  Complex lhs = eq_exp(q, ctx) * Eq_exp(1.0 / q, ctx);
  double printed = 0.0, corrected = 0.0;
  for (int k = 0; k < 80; ++k) {
    double qk = qpochhammer_n(q, q, k).real();
    printed += std::pow(q, k * (k + 1) / 2.0) / qk;
    corrected += std::pow(q, k * (k - 3) / 2.0) / qk;
  }
  double qq = qpochhammer_inf(q, ctx).real();
  CHECK(rel(lhs, corrected / qq) < 1e-13);
  // The form with q^(k(k+1)/2) is short by exactly 2(1 + 1/q).
  CHECK(rel(lhs, 2.0 * (1.0 + 1.0 / q) * printed / qq) < 1e-13);
}

TEST_CASE("q-trigonometric functions") {
  QContext ctx(0.5);
  QTrig z = qtrig(0.0, ctx);
  CHECK(std::abs(z.cos_q - 1.0) < 1e-15);
  CHECK(std::abs(z.Cos_q - 1.0) < 1e-15);
  CHECK(std::abs(z.Sin_q) < 1e-15);
  for (double u : {0.2, 0.7, 3.0, 40.0}) {
    QTrig t = qtrig(u, ctx);
    CHECK(std::abs(t.cos_q.imag()) < 1e-14 * (1 + std::abs(t.cos_q)));
    CHECK(std::abs(t.Cos_q.imag()) < 1e-14 * (1 + std::abs(t.Cos_q)));
    CHECK(std::abs(t.Sin_q.imag()) < 1e-14 * (1 + std::abs(t.Sin_q)));
    QTrig s = qtrig_series(u, ctx);
    CHECK(rel(t.Cos_q, s.Cos_q) < 1e-9);
    CHECK(rel(t.Sin_q, s.Sin_q) < 1e-9);
    if (u < 1) {
      CHECK(rel(t.cos_q, s.cos_q) < 1e-12);
      CHECK(rel(t.sin_q, s.sin_q) < 1e-12);
    }
  }
}

TEST_CASE("basic hypergeometric series") {
  QContext ctx(0.7);
  double q = 0.7;
  CHECK(phi01(0.0, ctx) == Complex(1.0));
  Complex u(1e-7, 0.0);
  CHECK(std::abs((phi01(u, ctx) - 1.0) / u - 1.0 / (1.0 - q)) < 1e-5);
  // Term-by-term oracle.
  Complex s = 0.0;
  for (int n = 0; n < 80; ++n)
    s += std::pow(q, n * (n - 1.0)) * std::pow(Complex(0.3), n) / qpochhammer_n(q, q, n);
  CHECK(rel(phi01(0.3, ctx), s) < 1e-14);

  QContext c6(0.6);
  CHECK(phi03(0.5, 0.0, c6) == Complex(1.0));
  {
    double qq = 0.6, lam = 1 - qq * qq, nu = 0.5, x = 0.2;
    Complex o = 0.0;
    for (int n = 0; n < 60; ++n)
      o += std::pow(-1.0, n) * std::pow(qq, 4.0 * n * (nu + n)) * std::pow(lam * x / 2.0, 2 * n) /
           (qpochhammer_n(qq * qq, qq * qq, n) * qpochhammer_n(std::pow(qq, 2 * nu + 2), qq * qq, n));
    CHECK(rel(phi03(nu, x, c6), o) < 1e-14);
    // First correction is negative for real x.
    CHECK(phi03(nu, 3.0, c6).real() < 1.0);
  }

  QContext c5(0.5);
  CHECK(phi21(0.3, 0.4, 0.2, 0.5, 0.0, c5) == Complex(1.0));
  CHECK(phi21(1.0, 0.4, 0.2, 0.5, 0.9, c5) == Complex(1.0));
  {
    double nu = 1.5, p = 0.25;
    // (a;q^2)_n terminates at a = q^(-2), so the sum at u=1 is finite.
    double a = std::pow(0.5, -2 * nu + 1), b = 0.5, c = std::pow(0.5, 3);
    Complex o = 0.0;
    for (int n = 0; n < 5; ++n)
      o += qpochhammer_n(a, p, n) * qpochhammer_n(b, p, n) / (qpochhammer_n(p, p, n) * qpochhammer_n(c, p, n));
    CHECK(rel(phi21(a, b, c, p, 1.0, c5), o) < 1e-13);
    // Non-terminating case: terms tend to a nonzero constant.
    double a2 = std::pow(0.5, -2 * 0.75 + 1);
    CHECK_THROWS_AS(phi21(a2, b, c, p, 1.0, c5), TailNotConverged);
  }
  CHECK_THROWS_AS(phi21(0.3, 0.4, 0.2, 0.5, 1.5, c5), RadiusError);
  CHECK_THROWS_AS(phi21(0.3, 0.4, 4.0, 0.5, 0.5, c5), PoleError);
  // The a_nu normalising series at u = q converges.
  {
    double nu = 0.75, qq = 0.5;
    Complex o = 0.0;
    for (int n = 0; n < 200; ++n)
      o += qpochhammer_n(std::pow(qq, nu + 0.5), qq, n) * qpochhammer_n(std::pow(qq, -nu + 0.5), qq, n) /
           (qpochhammer_n(qq, qq, n) * qpochhammer_n(-qq, qq, n)) * std::pow(qq, n);
    CHECK(rel(phi21(std::pow(qq, nu + 0.5), std::pow(qq, -nu + 0.5), -qq, qq, qq, c5), o) < 1e-12);
  }
}

TEST_CASE("non-finite arguments are rejected") {
  QContext ctx(0.5);
  CHECK_THROWS_AS(eq_exp(Complex(NAN, 0), ctx), DomainError);
  CHECK_THROWS_AS(qpochhammer_inf(Complex(INFINITY, 0), ctx), DomainError);
}
