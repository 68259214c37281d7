#include "qsf/qcore.hpp"

#include <cfloat>
#include <cmath>
#include <string>

namespace qsf {

namespace {

void require_finite(Complex x, const char* what) {
  if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
    throw DomainError(std::string(what) + ": non-finite argument");
}

// Factor 1 - x treated as zero.
bool vanishes(Complex f, Complex x) { return std::abs(f) <= 64 * DBL_EPSILON * (1 + std::abs(x)); }

}  // namespace

void Tolerance::validate() const {
  if (!(eps_rel > 0) || !std::isfinite(eps_rel)) throw DomainError("Tolerance: eps_rel must be positive");
  if (max_terms < 1) throw DomainError("Tolerance: max_terms must be >= 1");
  if (consecutive_small < 1) throw DomainError("Tolerance: consecutive_small must be >= 1");
}

QContext::QContext(double q, Tolerance tol) : q_(q), tol_(tol) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("QContext: q must lie in (0,1), got " + std::to_string(q));
  tol_.validate();
}

std::int64_t QContext::budget() const { return budget(tol_.max_terms); }

std::int64_t QContext::budget(std::int64_t base) const {
  double scale = 0.1 / (1.0 - q_);
  if (scale < 1.0) scale = 1.0;
  return static_cast<std::int64_t>(static_cast<double>(base) * scale);
}

Complex cpow(Complex x, double p) {
  if (x == Complex(0.0)) {
    if (p == 0.0) return 1.0;
    if (p > 0.0) return 0.0;
    throw PoleError("cpow: zero to a negative power");
  }
  if (x.imag() == 0.0 && x.real() > 0.0) return std::pow(x.real(), p);
  return std::pow(x, p);
}

Complex qpochhammer_n(Complex a, double q, int n) {
  if (n < 0) throw DomainError("qpochhammer_n: negative n");
  if (!(q > 0.0 && q < 1.0)) throw DomainError("qpochhammer_n: q must lie in (0,1)");
  require_finite(a, "qpochhammer_n");
  Complex p = 1.0;
  Complex aq = a;
  for (int j = 0; j < n; ++j, aq *= q) p *= 1.0 - aq;
  return p;
}

Complex qpochhammer_inf(Complex a, const QContext& ctx) {
  require_finite(a, "qpochhammer_inf");
  const double q = ctx.q();
  const double stop = DBL_EPSILON * (1.0 - q);
  TailCounter tail(ctx.tol().consecutive_small);
  Complex p = 1.0;
  Complex aq = a;
  const std::int64_t nmax = ctx.budget();
  for (std::int64_t n = 0; n < nmax; ++n, aq *= q) {
    p *= 1.0 - aq;
    if (tail.update(std::abs(aq) < stop)) return p;
  }
  throw TailNotConverged("qpochhammer_inf: product did not converge");
}

Complex qpochhammer_ratio(Complex a, Complex b, const QContext& ctx) {
  require_finite(a, "qpochhammer_ratio");
  require_finite(b, "qpochhammer_ratio");
  const double q = ctx.q();
  const double stop = DBL_EPSILON * (1.0 - q);
  TailCounter tail(ctx.tol().consecutive_small);
  Complex p = 1.0;
  Complex aq = a, bq = b;
  const std::int64_t nmax = ctx.budget();
  for (std::int64_t n = 0; n < nmax; ++n, aq *= q, bq *= q) {
    Complex den = 1.0 - bq;
    if (vanishes(den, bq)) throw PoleError("qpochhammer_ratio: denominator factor vanishes");
    p *= (1.0 - aq) / den;
    if (tail.update(std::abs(aq) < stop && std::abs(bq) < stop)) return p;
  }
  throw TailNotConverged("qpochhammer_ratio: product did not converge");
}

double log_abs_qpochhammer_inf(Complex a, const QContext& ctx) {
  require_finite(a, "log_abs_qpochhammer_inf");
  const double q = ctx.q();
  const double stop = DBL_EPSILON * (1.0 - q);
  TailCounter tail(ctx.tol().consecutive_small);
  double s = 0.0;
  Complex aq = a;
  const std::int64_t nmax = ctx.budget();
  for (std::int64_t n = 0; n < nmax; ++n, aq *= q) {
    s += std::log(std::abs(1.0 - aq));
    if (tail.update(std::abs(aq) < stop)) return s;
  }
  throw TailNotConverged("log_abs_qpochhammer_inf: product did not converge");
}

namespace {

bool nonpositive_integer(double nu) { return nu <= 0.0 && nu == std::floor(nu); }

}  // namespace

double qgamma(double nu, const QContext& ctx) {
  if (!std::isfinite(nu)) throw DomainError("qgamma: non-finite order");
  if (nonpositive_integer(nu)) throw PoleError("qgamma: pole at nonpositive integer");
  const double q = ctx.q();
  // (q;q)_inf / (q^nu;q)_inf as one product of ratios.
  Complex r = qpochhammer_ratio(q, std::pow(q, nu), ctx);
  return r.real() * std::pow(1.0 - q, 1.0 - nu);
}

double qgamma_reciprocal(double nu, const QContext& ctx) {
  if (nonpositive_integer(nu)) return 0.0;
  const double q = ctx.q();
  Complex r = qpochhammer_ratio(std::pow(q, nu), q, ctx);
  return r.real() * std::pow(1.0 - q, nu - 1.0);
}

double qbeta(double a, double b, const QContext& ctx) {
  return qgamma(a, ctx) * qgamma(b, ctx) / qgamma(a + b, ctx);
}

Complex eq_exp(Complex u, const QContext& ctx) {
  require_finite(u, "eq_exp");
  const double q = ctx.q();
  const double stop = DBL_EPSILON * (1.0 - q);
  TailCounter tail(ctx.tol().consecutive_small);
  Complex p = 1.0;
  Complex uq = u;
  const std::int64_t nmax = ctx.budget();
  for (std::int64_t n = 0; n < nmax; ++n, uq *= q) {
    Complex f = 1.0 - uq;
    if (vanishes(f, uq)) throw PoleError("eq_exp: argument on the pole set q^-k");
    p *= f;
    if (tail.update(std::abs(uq) < stop)) return 1.0 / p;
  }
  throw TailNotConverged("eq_exp: product did not converge");
}

namespace {

// Sum of a series given by its first term and term ratio; stops on the
// shared tail criterion.
template <class Ratio>
Complex sum_series(Complex first, Ratio ratio, const QContext& ctx, const char* name, int* terms = nullptr) {
  CompensatedSum sum;
  TailCounter tail(ctx.tol().consecutive_small);
  Complex t = first;
  const std::int64_t nmax = ctx.budget();
  for (std::int64_t n = 0; n < nmax; ++n) {
    sum.add(t);
    if (t == Complex(0.0) || tail.update(std::abs(t) < ctx.tol().eps_rel * (std::abs(sum.value()) + 1.0))) {
      if (terms) *terms = static_cast<int>(n + 1);
      return sum.value();
    }
    t *= ratio(n);
  }
  throw TailNotConverged(std::string(name) + ": series did not converge");
}

}  // namespace

Complex eq_exp_series(Complex u, const QContext& ctx) {
  require_finite(u, "eq_exp_series");
  if (std::abs(u) >= 1.0) throw RadiusError("eq_exp_series: |u| >= 1");
  const double q = ctx.q();
  return sum_series(1.0, [&](std::int64_t n) { return u / (1.0 - std::pow(q, n + 1)); }, ctx, "eq_exp_series");
}

Complex Eq_exp(Complex u, const QContext& ctx) {
  require_finite(u, "Eq_exp");
  return qpochhammer_inf(-u, ctx);
}

Complex Eq_exp_series(Complex u, const QContext& ctx) {
  require_finite(u, "Eq_exp_series");
  const double q = ctx.q();
  return sum_series(
      1.0, [&](std::int64_t n) { return std::pow(q, static_cast<double>(n)) * u / (1.0 - std::pow(q, n + 1)); }, ctx,
      "Eq_exp_series");
}

QTrig qtrig(Complex u, const QContext& ctx) {
  const Complex i(0.0, 1.0);
  Complex ep = eq_exp(i * u, ctx), em = eq_exp(-i * u, ctx);
  Complex Ep = Eq_exp(i * u, ctx), Em = Eq_exp(-i * u, ctx);
  return {(ep + em) / 2.0, (ep - em) / (2.0 * i), (Ep + Em) / 2.0, (Ep - Em) / (2.0 * i)};
}

QTrig qtrig_series(Complex u, const QContext& ctx) {
  require_finite(u, "qtrig_series");
  const double q = ctx.q();
  const bool small = std::abs(u) < 1.0;
  CompensatedSum c, s, C, S;
  TailCounter tail(ctx.tol().consecutive_small);
  // t = u^k/(q;q)_k, w = q^(k(k-1)/2)
  Complex t = 1.0;
  double w = 1.0;
  const std::int64_t nmax = ctx.budget();
  for (std::int64_t k = 0; k < nmax; ++k) {
    double sign = (k % 4 == 0 || k % 4 == 1) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      if (small) c.add(sign * t);
      C.add(sign * w * t);
    } else {
      if (small) s.add(sign * t);
      S.add(sign * w * t);
    }
    double mag = std::abs(w * t) + (small ? std::abs(t) : 0.0);
    double ref = std::abs(C.value()) + std::abs(S.value()) + 1.0;
    if (tail.update(mag < ctx.tol().eps_rel * ref)) {
      const double nan = std::nan("");
      return {small ? c.value() : Complex(nan), small ? s.value() : Complex(nan), C.value(), S.value()};
    }
    t *= u / (1.0 - std::pow(q, k + 1));
    w *= std::pow(q, static_cast<double>(k));
  }
  throw TailNotConverged("qtrig_series: series did not converge");
}

Complex phi01(Complex u, const QContext& ctx) {
  require_finite(u, "phi01");
  const double q = ctx.q();
  return sum_series(
      1.0, [&](std::int64_t n) { return std::pow(q, 2.0 * n) * u / (1.0 - std::pow(q, n + 1)); }, ctx, "phi01");
}

Complex phi03(double nu, Complex x, const QContext& ctx) {
  require_finite(x, "phi03");
  const double q = ctx.q();
  const double lam = ctx.lambda();
  const Complex w = lam * lam * x * x / 4.0;
  return sum_series(
      1.0,
      [&](std::int64_t n) {
        double den = 1.0 - std::pow(q, 2.0 * nu + 2.0 + 2.0 * n);
        if (std::abs(den) < 64 * DBL_EPSILON) throw PoleError("phi03: denominator Pochhammer vanishes");
        return -std::pow(q, 4.0 * (nu + 2.0 * n + 1.0)) * w / ((1.0 - std::pow(q, 2.0 * n + 2.0)) * den);
      },
      ctx, "phi03");
}

Complex phi21(Complex a, Complex b, Complex c, double base, Complex u, const QContext& ctx) {
  return phi21(a, b, c, base, u, ctx, nullptr);
}

Complex phi21(Complex a, Complex b, Complex c, double base, Complex u, const QContext& ctx, int* terms) {
  require_finite(a, "phi21");
  require_finite(b, "phi21");
  require_finite(c, "phi21");
  require_finite(u, "phi21");
  if (!(base > 0.0 && base < 1.0)) throw DomainError("phi21: base must lie in (0,1)");
  if (std::abs(u) > 1.0 + 1e-15) throw RadiusError("phi21: |u| > 1");
  QContext bctx = ctx.with_base(base);
  return sum_series(
      1.0,
      [&](std::int64_t n) {
        double bn = std::pow(base, static_cast<double>(n));
        Complex den = 1.0 - c * bn;
        if (vanishes(den, c * bn)) throw PoleError("phi21: (c;base)_n vanishes");
        return (1.0 - a * bn) * (1.0 - b * bn) * u / ((1.0 - base * bn) * den);
      },
      bctx, "phi21", terms);
}

}  // namespace qsf
