#include "qsf/qbinomial.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

namespace qsf {

namespace {

bool vanishes(Complex f, Complex x) { return std::abs(f) <= 64 * DBL_EPSILON * (1 + std::abs(x)); }

void check_base(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("QBinomialKernel: base must lie in (0,1)");
}

}  // namespace

Complex r_kernel(const QBinomialKernel& k, Complex z, const QContext& ctx) {
  check_base(k.base);
  const double p = k.base;
  const double stop = DBL_EPSILON * (1.0 - p);
  QContext pc = ctx.with_base(p);
  TailCounter tail(ctx.tol().consecutive_small);
  std::vector<Complex> num_zero, den_zero;  // derivative of the vanishing factor
  Complex prod = 1.0;
  Complex az = k.a * z, bz = k.b * z;
  const std::int64_t nmax = pc.budget();
  for (std::int64_t j = 0; j < nmax; ++j, az *= p, bz *= p) {
    Complex num = 1.0 - az, den = 1.0 - bz;
    bool nz = vanishes(num, az), dz = vanishes(den, bz);
    if (nz) num_zero.push_back(az);
    if (dz) den_zero.push_back(bz);
    if (!nz) prod *= num;
    if (!dz) prod /= den;
    if (tail.update(std::abs(az) < stop && std::abs(bz) < stop)) {
      if (den_zero.size() > num_zero.size()) throw PoleError("r_kernel: denominator vanishes");
      if (num_zero.size() > den_zero.size()) return 0.0;
      // 0/0: d/dz(1 - a z p^i) / d/dz(1 - b z p^j) = (a z p^i)/(b z p^j).
      for (size_t i = 0; i < num_zero.size(); ++i) prod *= num_zero[i] / den_zero[i];
      return prod;
    }
  }
  throw TailNotConverged("r_kernel: product did not converge");
}

namespace {

bool is_integer(double g) { return g == std::floor(g); }

Complex zpow(Complex z, double gamma) {
  if (gamma == 0.0) return 1.0;
  if (is_integer(gamma) && std::abs(gamma) < 1e9) {
    if (z == Complex(0.0)) {
      if (gamma > 0) return 0.0;
      throw PoleError("R_kernel: z = 0 with negative gamma");
    }
    return std::pow(z, static_cast<int>(gamma));
  }
  if (z.imag() != 0.0 || z.real() <= 0.0) throw DomainError("R_kernel: non-integer gamma needs real z > 0");
  return std::pow(z.real(), gamma);
}

}  // namespace

Complex R_kernel(const QBinomialKernel& k, Complex z, const QContext& ctx) {
  Complex zg = zpow(z, k.gamma);
  return r_kernel(k, z * z, ctx) * zg;
}

double r_diff_residual(const QBinomialKernel& k, Complex z, const QContext& ctx) {
  const double p = k.base;
  Complex r0 = r_kernel(k, z, ctx), r1 = r_kernel(k, p * z, ctx);
  Complex t1 = z * k.b * r0, t2 = z * k.a * r1;
  Complex lhs = t1 - t2, rhs = r0 - r1;
  double scale = std::max({std::abs(t1), std::abs(t2), std::abs(r0), std::abs(r1)});
  return scale == 0.0 ? std::abs(lhs - rhs) : std::abs(lhs - rhs) / scale;
}

double R_diff_residual(const QBinomialKernel& k, Complex z, const QContext& ctx) {
  const double t = std::sqrt(k.base);
  const double tg = std::pow(t, k.gamma);
  // R(tz) written as t^gamma z^gamma r((tz)^2) so that a = b cancels exactly.
  Complex zg = zpow(z, k.gamma);
  Complex R0 = zg * r_kernel(k, z * z, ctx), R1 = tg * zg * r_kernel(k, k.base * z * z, ctx);
  Complex t1 = z * z * k.b * tg * R0, t2 = z * z * k.a * R1;
  Complex lhs = t1 - t2, rhs = tg * R0 - R1;
  double scale = std::max({std::abs(t1), std::abs(t2), std::abs(tg * R0), std::abs(R1)});
  return scale == 0.0 ? std::abs(lhs - rhs) : std::abs(lhs - rhs) / scale;
}

Complex r_partial_fractions(const QBinomialKernel& k, Complex z, int K, const QContext& ctx,
                            PartialFractionForm form) {
  check_base(k.base);
  const double p = k.base;
  QContext pc = ctx.with_base(p);
  if (k.b == Complex(0.0)) throw DomainError("r_partial_fractions: b = 0");
  if (form == PartialFractionForm::ZeroA) {
    if (k.a != Complex(0.0)) throw DomainError("r_partial_fractions: zero-a form needs a = 0");
  } else {
    if (!(std::abs(k.a) < std::abs(k.b))) throw DomainError("r_partial_fractions: needs |a| < |b|");
    if (form == PartialFractionForm::Shifted && k.a == Complex(0.0))
      throw DomainError("r_partial_fractions: shifted form needs a != 0");
  }
  const Complex x = k.a / k.b;
  const Complex pref = form == PartialFractionForm::ZeroA ? 1.0 / qpochhammer_inf(p, pc)
                                                          : qpochhammer_ratio(x, p, pc);
  const Complex pp_inf = qpochhammer_inf(p, pc);
  CompensatedSum sum;
  TailCounter tail(ctx.tol().consecutive_small);
  const std::int64_t kmax = K >= 0 ? K + 1 : pc.budget();
  double pk = 1.0;  // p^k
  for (std::int64_t n = 0; n < kmax; ++n, pk *= p) {
    Complex den = 1.0 - z * k.b * pk;
    if (vanishes(den, z * k.b * pk)) throw PoleError("r_partial_fractions: z on a pole");
    Complex c;
    switch (form) {
      case PartialFractionForm::General: {
        // (-1)^n p^(n(n+1)/2) (x p^-n;p)_inf = prod_{i=1..n} (x - p^i) * (x;p)_inf
        Complex f = 1.0;
        for (std::int64_t i = 1; i <= n; ++i) f *= x - std::pow(p, static_cast<double>(i));
        c = f * qpochhammer_inf(x, pc) / (pp_inf * qpochhammer_n(p, p, static_cast<int>(n)));
        break;
      }
      case PartialFractionForm::Shifted:
        c = pref * qpochhammer_n(p / x, p, static_cast<int>(n)) * std::pow(x, static_cast<int>(n)) /
            qpochhammer_n(p, p, static_cast<int>(n));
        break;
      case PartialFractionForm::ZeroA: {
        double sgn = n % 2 == 0 ? 1.0 : -1.0;
        c = pref * sgn * std::pow(p, n * (n + 1) / 2.0) / qpochhammer_n(p, p, static_cast<int>(n));
        break;
      }
    }
    Complex t = c / den;
    sum.add(t);
    if (K < 0 && tail.update(std::abs(t) < ctx.tol().eps_rel * (std::abs(sum.value()) + 1.0))) return sum.value();
  }
  if (K >= 0) return sum.value();
  throw TailNotConverged("r_partial_fractions: expansion did not converge");
}

Complex R_pole_expansion(double eps, double alpha, double beta, double gamma, Complex z, const QContext& ctx) {
  const double q = ctx.q(), p = q * q;
  QContext pc = ctx.squared();
  Complex pref = qpochhammer_ratio(std::pow(q, 2 * (alpha - beta)), p, pc) * zpow(z, gamma);
  const double c = std::pow(q, 2 * (beta - alpha + 1));
  const double x = std::pow(q, 2 * (alpha - beta));
  CompensatedSum sum;
  TailCounter tail(ctx.tol().consecutive_small);
  Complex coef = 1.0;  // (c;p)_k x^k / (p;p)_k
  const std::int64_t kmax = pc.budget();
  for (std::int64_t k = 0; k < kmax; ++k) {
    Complex w = eps * z * z * std::pow(q, 2 * (beta + k));
    Complex den = 1.0 - w;
    if (vanishes(den, w)) throw PoleError("R_pole_expansion: z on a pole");
    Complex t = coef / den;
    sum.add(t);
    if (tail.update(std::abs(t) < ctx.tol().eps_rel * (std::abs(sum.value()) + 1.0))) return pref * sum.value();
    double pk = std::pow(p, static_cast<double>(k));
    coef *= (1.0 - c * pk) * x / (1.0 - p * pk);
  }
  throw TailNotConverged("R_pole_expansion: expansion did not converge");
}

Complex R_taylor(double eps, double alpha, double beta, Complex z, const QContext& ctx) {
  const double q = ctx.q(), p = q * q;
  if (!(std::abs(z) < std::pow(q, -beta))) throw RadiusError("R_taylor: |z| >= q^-beta");
  QContext pc = ctx.squared();
  const double c = std::pow(q, 2 * (alpha - beta));
  const Complex w = eps * std::pow(q, 2 * beta) * z * z;
  CompensatedSum sum;
  TailCounter tail(ctx.tol().consecutive_small);
  Complex t = 1.0;
  const std::int64_t kmax = pc.budget();
  for (std::int64_t k = 0; k < kmax; ++k) {
    sum.add(t);
    if (tail.update(std::abs(t) < ctx.tol().eps_rel * (std::abs(sum.value()) + 1.0))) return sum.value();
    double pk = std::pow(p, static_cast<double>(k));
    t *= (1.0 - c * pk) * w / (1.0 - p * pk);
  }
  throw TailNotConverged("R_taylor: series did not converge");
}

double Q_nu(double nu, const QContext& ctx) {
  const double q = ctx.q(), lq = std::log(q);
  auto term = [&](double m) { return 0.5 / std::cosh((m - nu + 0.5) * lq); };
  const double thr = (1.0 - q) * ctx.tol().eps_rel;
  const std::int64_t nmax = ctx.budget();
  double total = 0.0;
  for (int dir : {+1, -1}) {
    CompensatedSum half;
    TailCounter tail(ctx.tol().consecutive_small);
    bool done = false;
    for (std::int64_t k = 0; k < nmax && !done; ++k) {
      double m = dir > 0 ? static_cast<double>(k) : -static_cast<double>(k + 1);
      double t = term(m);
      half.add(t);
      // Terms grow while |m - nu + 1/2| decreases; only stop past the peak.
      bool past_peak = dir * (m - nu + 0.5) > 0;
      done = tail.update(past_peak && t < thr * (std::abs(half.value()) + 1.0));
    }
    if (!done) throw TailNotConverged("Q_nu: bilateral sum did not converge");
    total += half.value().real();
  }
  return (1.0 - q) * total;
}

namespace {

struct Theta {
  double t2, t3, t4;
};

// Theta constants from their product forms; all factors are positive, so
// theta_4 keeps full relative accuracy as q -> 1.
Theta theta_constants(double q, const QContext& ctx) {
  double l2 = 0.0, l3 = 0.0, l4 = 0.0;  // logs of the products
  TailCounter tail(ctx.tol().consecutive_small);
  const std::int64_t nmax = ctx.budget();
  for (std::int64_t n = 1; n < nmax; ++n) {
    double even = std::pow(q, 2.0 * n), odd = std::pow(q, 2.0 * n - 1.0);
    l2 += std::log1p(-even) + 2 * std::log1p(even);
    l3 += std::log1p(-even) + 2 * std::log1p(odd);
    l4 += std::log1p(-even) + 2 * std::log1p(-odd);
    if (tail.update(odd < DBL_EPSILON * (1.0 - q))) {
      return {2.0 * std::pow(q, 0.25) * std::exp(l2), std::exp(l3), std::exp(l4)};
    }
  }
  throw TailNotConverged("theta_constants: product did not converge");
}

double agm(double a, double b) {
  for (int i = 0; i < 200; ++i) {
    double an = 0.5 * (a + b), bn = std::sqrt(a * b);
    if (std::abs(an - bn) <= 4 * DBL_EPSILON * an) return an;
    a = an;
    b = bn;
  }
  return a;
}

}  // namespace

EllipticFromNome elliptic_from_nome(const QContext& ctx) {
  Theta th = theta_constants(ctx.q(), ctx);
  EllipticFromNome e;
  e.k = std::min(1.0, (th.t2 * th.t2) / (th.t3 * th.t3));
  e.kp = (th.t4 * th.t4) / (th.t3 * th.t3);
  e.K = M_PI / (2.0 * agm(1.0, e.kp));
  e.Kp = M_PI / (2.0 * agm(1.0, e.k));
  return e;
}

double jacobi_dn(double u, const QContext& ctx) {
  // dn = (theta_4(0) theta_3(v)) / (theta_3(0) theta_4(v)), v = pi u/(2K), from
  // the product forms with factors 1 -+ 2x cos 2v + x^2 = (1 -+ x)^2 +- 4x sin^2 v.
  EllipticFromNome e = elliptic_from_nome(ctx);
  const double q = ctx.q();
  const double sv = std::sin(M_PI * u / (2.0 * e.K));
  const double s2 = sv * sv;
  double l = 0.0;
  TailCounter tail(ctx.tol().consecutive_small);
  const std::int64_t nmax = ctx.budget();
  for (std::int64_t n = 1; n < nmax; ++n) {
    double x = std::pow(q, 2.0 * n - 1.0);
    double a = (1 - x) * (1 - x), b = (1 + x) * (1 + x);
    l += std::log(a / b) + std::log((b - 4 * x * s2) / (a + 4 * x * s2));
    if (tail.update(x < DBL_EPSILON * (1.0 - q))) return std::exp(l);
  }
  throw TailNotConverged("jacobi_dn: product did not converge");
}

double Q_nu_elliptic(double nu, const QContext& ctx) {
  EllipticFromNome e = elliptic_from_nome(ctx);
  double u = 2.0 * (-nu + 0.5) * std::log(ctx.q()) / M_PI * e.Kp;
  return (1.0 - ctx.q()) * e.K * jacobi_dn(u, ctx) / M_PI;
}

namespace {

// sum_k |(c;p)_k x^k/(p;p)_k|
double abs_binomial_series(double c, double x, const QContext& pc) {
  const double p = pc.q();
  double sum = 0.0, t = 1.0;
  TailCounter tail(pc.tol().consecutive_small);
  const std::int64_t kmax = pc.budget();
  for (std::int64_t k = 0; k < kmax; ++k) {
    sum += std::abs(t);
    if (tail.update(std::abs(t) < pc.tol().eps_rel * sum)) return sum;
    double pk = std::pow(p, static_cast<double>(k));
    t *= (1.0 - c * pk) * x / (1.0 - p * pk);
  }
  throw TailNotConverged("abs_binomial_series: series did not converge");
}

struct MarginTracker {
  BoundCheck c;
  explicit MarginTracker(std::string n) { c = {std::move(n), std::numeric_limits<double>::infinity(), 0}; }
  void bound(double value, double bound) {
    c.worst_margin = std::min(c.worst_margin, (bound - value) / bound);
    ++c.points;
  }
  // log-values of a sequence that must decrease strictly.
  void decay(double log_prev, double log_next) {
    c.worst_margin = std::min(c.worst_margin, -std::expm1(log_next - log_prev));
    ++c.points;
  }
};

}  // namespace

double bound_constant_C(double alpha, double beta, const QContext& ctx) {
  if (!(alpha > beta + 1)) throw DomainError("bound_constant_C: needs alpha > beta + 1");
  const double q = ctx.q(), p = q * q;
  QContext pc = ctx.squared();
  double pref = qpochhammer_ratio(std::pow(q, 2 * (alpha - beta)), p, pc).real();
  return pref * abs_binomial_series(std::pow(q, 2 * (beta - alpha + 1)), std::pow(q, 2 * (alpha - beta - 1)), pc);
}

std::vector<BoundCheck> bound_suite(const QContext& ctx, const BoundGrid& grid) {
  const double q = ctx.q(), lam = ctx.lambda(), p = q * q;
  const Complex I(0.0, 1.0);
  QContext pc = ctx.squared();
  const double eqq = eq_exp(q, ctx).real();
  const double Eq_inv = Eq_exp(1.0 / q, ctx).real();
  const double Eq_one = Eq_exp(1.0, ctx).real();
  std::vector<BoundCheck> out;

  MarginTracker c32("exp_imag_bound"), c32d("exp_imag_decay");
  MarginTracker c33("cos_bound");
  MarginTracker c34("exp_neg_bound"), c34d("exp_neg_decay");
  MarginTracker c35c("Cos_bound"), c35s("Sin_bound");
  for (double s : grid.s) {
    for (int m = grid.m_min; m <= grid.m_max; ++m) {
      const double u = lam * std::pow(q, -m) * s / 2.0;
      double e_abs = std::exp(-log_abs_qpochhammer_inf(I * u, ctx));
      c32.bound(e_abs, Eq_inv * eqq / std::sqrt(1.0 + u * u));
      QTrig t = qtrig(u, ctx);
      c33.bound(std::abs(t.cos_q), Eq_inv * eqq / (1.0 + u * u));
      if (s > 0) c34.bound(std::exp(-log_abs_qpochhammer_inf(-u, ctx)), Eq_one * eqq / std::abs(1.0 + u));
      c35c.bound(std::abs(t.Cos_q), 1.0);
      c35s.bound(std::abs(t.Sin_q), 0.5 * std::pow(q, -m) * (1 + q) * std::abs(s));
    }
    for (int m = 1; m < grid.decay_m_max; ++m) {
      const double u0 = lam * std::pow(q, -m) * s / 2.0, u1 = u0 / q;
      c32d.decay(-log_abs_qpochhammer_inf(I * u0, ctx), -log_abs_qpochhammer_inf(I * u1, ctx));
      if (s > 0) c34d.decay(-log_abs_qpochhammer_inf(-u0, ctx), -log_abs_qpochhammer_inf(-u1, ctx));
    }
  }
  for (auto* t : {&c32, &c32d, &c33, &c34, &c34d, &c35c, &c35s}) out.push_back(t->c);

  MarginTracker c36("binomial_ratio_bound");
  MarginTracker c37("binomial_ratio_limit_bound"), c37d("binomial_ratio_limit_decay");
  for (auto [alpha, beta] : grid.alpha_beta) {
    if (alpha > beta + 1) {
      const double C = bound_constant_C(alpha, beta, ctx);
      for (double z : grid.z) {
        QBinomialKernel k{-std::pow(q, 2 * alpha), -std::pow(q, 2 * beta), 0.0, p};
        double v = r_kernel(k, z * z, ctx).real();
        c36.bound(v, C / (1.0 + z * z * std::pow(q, 2 * beta)));
      }
    }
    if (alpha > beta + 0.5) {
      double pref = qpochhammer_ratio(std::pow(q, 2 * (alpha - beta)), p, pc).real();
      double S = abs_binomial_series(std::pow(q, 2 * (beta - alpha + 1)), std::pow(q, 2 * (alpha - beta - 0.5)), pc);
      // ratio_m = (-q^(2(alpha-m));q^2)_inf / (-q^(2(beta-m));q^2)_inf
      auto log_ratio = [&](int m) {
        QBinomialKernel k{-std::pow(q, 2 * alpha), -std::pow(q, 2 * beta), 0.0, p};
        return std::log(std::abs(r_kernel(k, std::pow(q, -2.0 * m), ctx)));
      };
      for (int m = 1; m <= grid.decay_m_max; ++m) {
        double lr = log_ratio(m);
        double lb = std::log(std::pow(q, m - beta) / 2.0 * pref * S);
        c37.bound(std::exp(lr - lb), 1.0);
        if (m < grid.decay_m_max) c37d.decay(lr, log_ratio(m + 1));
      }
    }
  }
  for (auto* t : {&c36, &c37, &c37d}) out.push_back(t->c);
  return out;
}

}  // namespace qsf
