#include "qsf/qbessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace qsf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kIntegerGuard = 1e-8;

bool real_positive(Complex s) { return s.imag() == 0.0 && s.real() > 0.0; }

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite argument");
}

void require_finite(Complex x, const char* what) {
  require_finite(x.real(), what);
  require_finite(x.imag(), what);
}

double sin_nu_pi(double nu) {
  // sin(nu pi) with exact zeros at integers
  const double r = nu - 2.0 * std::round(nu / 2.0);
  return std::sin(kPi * r);
}

}  // namespace

std::string to_string(BesselKind k) {
  switch (k) {
    case BesselKind::J1: return "J1";
    case BesselKind::J2: return "J2";
    case BesselKind::I1: return "I1";
    case BesselKind::I2: return "I2";
    case BesselKind::K1: return "K1";
    case BesselKind::K2: return "K2";
  }
  return "?";
}

BesselKind bessel_kind_from_string(const std::string& name) {
  for (BesselKind k : {BesselKind::J1, BesselKind::J2, BesselKind::I1, BesselKind::I2, BesselKind::K1, BesselKind::K2})
    if (to_string(k) == name) return k;
  throw DomainError("unknown Bessel function '" + name + "'");
}

double first_kind_radius(const QContext& ctx) { return 1.0 / ctx.lambda(); }

Complex bessel_series(BesselKind kind, double nu, Complex s, const QContext& ctx, BesselSeriesInfo* info) {
  require_finite(nu, "bessel_series");
  require_finite(s, "bessel_series");
  const bool second = kind == BesselKind::J2 || kind == BesselKind::I2;
  const double sign = (kind == BesselKind::J1 || kind == BesselKind::J2) ? -1.0 : 1.0;
  if (kind == BesselKind::K1 || kind == BesselKind::K2) throw DomainError("bessel_series: K has no direct series");

  const QContext c2 = ctx.squared();
  const double p = c2.q(), lam = ctx.lambda();
  const Complex lead = qgamma_reciprocal(nu + 1.0, c2) * cpow(s / 2.0, nu);
  if (lead == Complex(0.0)) {
    if (info) info->terms = 0;
    return 0.0;
  }
  const Complex w = sign * (lam * s / 2.0) * (lam * s / 2.0);

  // Sum of the normalised series 1 + sum_n t_n; the lead factor multiplies at
  // the end.
  CompensatedSum sum;
  TailCounter tail(ctx.tol().consecutive_small);
  Complex t = 1.0;
  const std::int64_t nmax = ctx.budget();
  for (std::int64_t n = 0; n < nmax; ++n) {
    sum.add(t);
    const double S = std::abs(sum.value());
    if (t == Complex(0.0) || tail.update(std::abs(t) <= ctx.tol().eps_rel * S)) {
      if (info) info->terms = static_cast<int>(n + 1);
      return lead * sum.value();
    }
    const double dn = static_cast<double>(n);
    const double den = (1.0 - std::pow(p, dn + 1.0)) * (1.0 - std::pow(p, nu + 1.0 + dn));
    if (den == 0.0) throw PoleError("bessel_series: (q^(2nu+2);q^2)_n vanishes");
    t *= w / den;
    if (second) t *= std::pow(p, nu + 2.0 * dn + 1.0);
  }
  throw TailNotConverged("bessel_series: " + to_string(kind) + " did not converge");
}

double J1_series_limit(const QContext& ctx) { return std::min(0.5 * first_kind_radius(ctx), 2.0); }

std::vector<Complex> J1_on_lattice(double nu, double s, int m_lo, int m_hi, const QContext& ctx) {
  require_finite(nu, "J1_on_lattice");
  require_finite(s, "J1_on_lattice");
  if (!(s > 0.0)) throw DomainError("J1_on_lattice: requires s > 0");
  if (m_lo > m_hi) throw DomainError("J1_on_lattice: empty node range");
  const double q = ctx.q(), lam = ctx.lambda();
  const double safe = J1_series_limit(ctx);
  const std::size_t n = static_cast<std::size_t>(m_hi - m_lo) + 1;
  std::vector<Complex> out(n);
  auto node = [&](int m) { return s * std::pow(q, m); };
  // first node inside the series region
  int ms = static_cast<int>(std::ceil(std::log(safe / s) / std::log(q)));
  while (node(ms) >= safe) ++ms;
  for (int m = std::max(ms, m_lo); m <= m_hi; ++m) out[m - m_lo] = bessel_series(BesselKind::J1, nu, node(m), ctx);
  if (ms <= m_lo) return out;
  Complex f_in = bessel_series(BesselKind::J1, nu, node(ms + 1), ctx);
  Complex f_mid = bessel_series(BesselKind::J1, nu, node(ms), ctx);
  const double A = std::pow(q, -nu) + std::pow(q, nu);
  for (int m = ms - 1; m >= m_lo; --m) {
    const double y = node(m + 1);
    const Complex f_out = (A * f_mid - f_in) / (1.0 + lam * lam * y * y / (4.0 * q * q));
    if (m <= m_hi) out[m - m_lo] = f_out;
    f_in = f_mid;
    f_mid = f_out;
  }
  return out;
}

Complex J1_continued(double nu, double s, const QContext& ctx) {
  if (!(s > 0.0)) throw DomainError("J1_continued: requires s > 0");
  if (s < J1_series_limit(ctx)) return bessel_series(BesselKind::J1, nu, s, ctx);
  return J1_on_lattice(nu, s, 0, 0, ctx)[0];
}

double a_nu(double nu, const QContext& ctx) {
  require_finite(nu, "a_nu");
  const double q = ctx.q(), lam = ctx.lambda();
  const Complex I2 = bessel_series(BesselKind::I2, nu, 2.0 / lam, ctx);
  const Complex den = phi21(std::pow(q, nu + 0.5), std::pow(q, -nu + 0.5), -q, q, q, ctx);
  if (std::abs(den) == 0.0) throw PoleError("a_nu: 2Phi1 denominator vanishes");
  return (std::sqrt(2.0 / lam) * eq_exp(-1.0, ctx) * I2 / den).real();
}

double a_nu_product_closed_form(double nu, const QContext& ctx) {
  const double sn = sin_nu_pi(nu);
  if (std::abs(sn) < kIntegerGuard) throw IntegerOrderError("a_nu_product_closed_form: integer order");
  const QContext c2 = ctx.squared();
  return std::pow(ctx.q(), -nu + 0.5) * qgamma_reciprocal(nu, c2) * qgamma_reciprocal(1.0 - nu, c2) / (2.0 * sn);
}

namespace {

Complex macdonald(BesselKind first, double nu, Complex s, const QContext& ctx) {
  const double sn = sin_nu_pi(nu);
  const double ap = a_nu(nu, ctx), am = a_nu(-nu, ctx);
  const Complex prod32 = cpow(Complex(ap * am), 1.5);
  const Complex pref = std::pow(ctx.q(), -nu * nu + 0.5) / (4.0 * prod32 * sn);
  return pref * (ap * bessel_series(first, -nu, s, ctx) - am * bessel_series(first, nu, s, ctx));
}

}  // namespace

Complex bessel_eval(BesselKind kind, const BesselParams& p) {
  const double nu = p.nu;
  const Complex s = p.s;
  const QContext& ctx = p.ctx;
  require_finite(nu, "bessel_eval");
  require_finite(s, "bessel_eval");
  switch (kind) {
    case BesselKind::J1:
    case BesselKind::I1:
      if (std::abs(s) >= first_kind_radius(ctx))
        throw RadiusError("bessel_eval: |s| outside the radius of the " + to_string(kind) + " series");
      return bessel_series(kind, nu, s, ctx);
    case BesselKind::J2:
    case BesselKind::I2:
      return bessel_series(kind, nu, s, ctx);
    case BesselKind::K1:
    case BesselKind::K2: {
      if (std::abs(sin_nu_pi(nu)) < kIntegerGuard)
        throw IntegerOrderError("bessel_eval: K at integer order; use bessel_integer_order_estimate");
      if (!real_positive(s)) throw DomainError("bessel_eval: K requires real s > 0");
      if (kind == BesselKind::K2) return macdonald(BesselKind::I2, nu, s, ctx);
      if (std::abs(s) < first_kind_radius(ctx)) return macdonald(BesselKind::I1, nu, s, ctx);
      const double lam = ctx.lambda();
      const Complex den = qpochhammer_inf(lam * lam * s * s / 4.0, ctx.squared());
      if (den == Complex(0.0)) throw PoleError("bessel_eval: K1 pole at s = 2q^-r/(1-q^2)");
      return macdonald(BesselKind::I2, nu, s, ctx) / den;
    }
  }
  throw DomainError("bessel_eval: unknown kind");
}

double diff_eq_residual(BesselKind kind, const BesselParams& p) {
  const double q = p.ctx.q(), lam = p.ctx.lambda();
  const Complex s = p.s;
  const double sign = (kind == BesselKind::J1 || kind == BesselKind::J2) ? -1.0 : 1.0;
  const bool first = kind == BesselKind::J1 || kind == BesselKind::I1 || kind == BesselKind::K1;
  auto f = [&](Complex x) { return bessel_eval(kind, {p.nu, x, p.ctx}); };
  const Complex fu = f(s / q), f0 = f(s), fd = f(q * s);
  const Complex mid = -(std::pow(q, -p.nu) + std::pow(q, p.nu)) * f0;
  Complex up, down;
  if (first) {
    up = (1.0 - sign * (lam / 2.0) * (lam / 2.0) * s * s / (q * q)) * fu;
    down = fd;
  } else {
    up = fu;
    down = (1.0 - sign * (lam / 2.0) * (lam / 2.0) * s * s) * fd;
  }
  const double scale = std::max({std::abs(up), std::abs(mid), std::abs(down)});
  if (scale == 0.0) return 0.0;
  return std::abs(up + mid + down) / scale;
}

Complex asymptotic_phi(double nu, Complex s, const QContext& ctx) {
  const double q = ctx.q();
  const Complex u = 2.0 * q / (ctx.lambda() * s);
  if (!(std::abs(u) < 1.0)) throw DomainError("asymptotic_phi: s too small, |2q/((1-q^2)s)| >= 1");
  return phi21(std::pow(q, nu + 0.5), std::pow(q, -nu + 0.5), -q, q, u, ctx);
}

Complex asymptotic_eval(BesselKind kind, const BesselParams& p) {
  const double nu = p.nu, q = p.ctx.q();
  const Complex s = p.s;
  const QContext& ctx = p.ctx;
  const double lam = ctx.lambda();
  const Complex i(0.0, 1.0);
  if (kind == BesselKind::I2) {
    const double an = a_nu(nu, ctx);
    const Complex plus = Eq_exp(lam * s / 2.0, ctx) * asymptotic_phi(nu, s, ctx);
    const Complex minus = Eq_exp(-lam * s / 2.0, ctx) * asymptotic_phi(nu, -s, ctx);
    return an / std::sqrt(s) * (plus + i * std::exp(i * (nu * kPi)) * minus);
  }
  if (kind == BesselKind::K2) {
    const double ap = a_nu(nu, ctx), am = a_nu(-nu, ctx);
    const Complex pref = std::pow(q, -nu * nu + 0.5) / (2.0 * std::sqrt(Complex(ap * am) * s));
    return pref * Eq_exp(-lam * s / 2.0, ctx) * asymptotic_phi(nu, s, ctx);
  }
  throw DomainError("asymptotic_eval: only I2 and K2 have large-s forms");
}

namespace {

double classical_I(double nu, double s) {
  // sum (s/2)^(nu+2k) / (k! Gamma(nu+k+1)) with the reciprocal gamma by
  // recurrence to cross negative arguments safely
  const double x = s / 2.0;
  double rg = 0.0;  // 1/Gamma(nu+1)
  {
    const double g = nu + 1.0;
    if (g <= 0.0 && g == std::round(g))
      rg = 0.0;
    else
      rg = 1.0 / std::tgamma(g);
  }
  double sum = 0.0, t = std::pow(x, nu);
  // leading terms can vanish at negative integer nu; step past them
  double k = 0.0, term = t * rg;
  for (int n = 0; n < 100000; ++n) {
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && n > 5 && k > -nu) break;
    k += 1.0;
    const double g = nu + k + 1.0;
    double rgk;
    if (g <= 0.0 && g == std::round(g))
      rgk = 0.0;
    else
      rgk = 1.0 / std::tgamma(g);
    t *= x * x / k;
    term = t * rgk;
    if (!std::isfinite(term)) throw TailNotConverged("classical_oracle: overflow");
  }
  return sum;
}

}  // namespace

double classical_oracle(ClassicalKind kind, double nu, double s) {
  require_finite(nu, "classical_oracle");
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("classical_oracle: requires s > 0");
  if (kind == ClassicalKind::I) return classical_I(nu, s);
  const double sn = sin_nu_pi(nu);
  if (std::abs(sn) < kIntegerGuard) throw IntegerOrderError("classical_oracle: K at integer order");
  return kPi * (classical_I(-nu, s) - classical_I(nu, s)) / (2.0 * sn);
}

Complex bessel_integer_order_estimate(BesselKind kind, int n, Complex s, const QContext& ctx) {
  if (kind != BesselKind::K1 && kind != BesselKind::K2)
    return bessel_eval(kind, {static_cast<double>(n), s, ctx});
  auto even = [&](double e) {
    return 0.5 * (bessel_eval(kind, {n + e, s, ctx}) + bessel_eval(kind, {n - e, s, ctx}));
  };
  const Complex a1 = even(1e-2), a2 = even(5e-3);
  return (4.0 * a2 - a1) / 3.0;
}

}  // namespace qsf
