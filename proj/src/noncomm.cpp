#include "qsf/noncomm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsf/errors.hpp"

namespace qsf {

namespace {

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-12; }

void require_q(double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("commutation parameter q must lie in (0,1)");
}

}  // namespace

OrderedSeries::OrderedSeries(double q, int cap, double z_grade, double s_grade)
    : q_(q), cap_(cap), zg_(z_grade), sg_(s_grade) {
  require_q(q);
  if (cap < 0) throw DomainError("series cap must be nonnegative");
  if (!std::isfinite(z_grade) || !std::isfinite(s_grade)) throw DomainError("series grade must be finite");
}

OrderedSeries OrderedSeries::monomial(double q, int cap, int m, int n, Complex c, double z_grade,
                                      double s_grade) {
  OrderedSeries x(q, cap, z_grade, s_grade);
  x.add(m, n, c);
  return x;
}

Complex OrderedSeries::at(int m, int n) const {
  auto it = c_.find({m, n});
  return it == c_.end() ? Complex(0.0) : it->second;
}

void OrderedSeries::add(int m, int n, Complex c) {
  if (m < 0 || n < 0) throw DomainError("series index must be nonnegative");
  if (m + n > cap_ || c == Complex(0.0)) return;
  c_[{m, n}] += c;
}

void OrderedSeries::check_compatible(const OrderedSeries& o) const {
  if (q_ != o.q_) throw DomainError("series use different commutation parameters");
  if (cap_ != o.cap_) throw DomainError("series caps differ");
  if (zg_ != o.zg_ || sg_ != o.sg_) throw DomainError("series grades differ");
}

OrderedSeries OrderedSeries::operator+(const OrderedSeries& o) const {
  check_compatible(o);
  OrderedSeries r = *this;
  for (const auto& [k, v] : o.c_) r.add(k.first, k.second, v);
  return r;
}

OrderedSeries OrderedSeries::operator-(const OrderedSeries& o) const { return *this + o * Complex(-1.0); }

OrderedSeries OrderedSeries::operator*(Complex c) const {
  OrderedSeries r(q_, cap_, zg_, sg_);
  for (const auto& [k, v] : c_) r.add(k.first, k.second, v * c);
  return r;
}

OrderedSeries nc_mul(const OrderedSeries& x, const OrderedSeries& y) {
  if (x.q() != y.q()) throw DomainError("series use different commutation parameters");
  if (x.cap() != y.cap()) throw DomainError("series caps differ");
  const double q = x.q();
  OrderedSeries r(q, x.cap(), x.z_grade() + y.z_grade(), x.s_grade() + y.s_grade());
  const double lq = std::log(q);
  for (const auto& [kx, vx] : x.coeffs()) {
    const double f1 = kx.second + x.s_grade();
    for (const auto& [ky, vy] : y.coeffs()) {
      const int m = kx.first + ky.first, n = kx.second + ky.second;
      if (m + n > r.cap()) continue;
      const double e2 = ky.first + y.z_grade();
      r.add(m, n, vx * vy * std::exp(-f1 * e2 * lq));
    }
  }
  return r;
}

OrderedSeries zs_power(double mu, double q, int cap) {
  require_q(q);
  const double c = std::pow(q, -mu * (mu - 1.0) / 2.0);
  if (is_integer(mu) && mu >= 0) {
    const int r = static_cast<int>(std::lround(mu));
    return OrderedSeries::monomial(q, cap, r, r, c);
  }
  return OrderedSeries::monomial(q, cap, 0, 0, c, mu, mu);
}

OrderedSeries expand_product(const PowerSeries& f, double q, int cap) {
  if (f.step < 1) throw DomainError("power series step must be positive");
  OrderedSeries base = zs_power(f.mu, q, cap);
  const OrderedSeries zs = OrderedSeries::monomial(q, cap, 1, 1, 1.0);
  OrderedSeries step_pow = OrderedSeries::one(q, cap);
  for (int i = 0; i < f.step; ++i) step_pow = nc_mul(step_pow, zs);

  OrderedSeries result(q, cap, base.z_grade(), base.s_grade());
  OrderedSeries term = base;
  for (std::size_t r = 0; r < f.a.size(); ++r) {
    if (term.coeffs().empty()) break;
    result = result + term * f.a[r];
    term = nc_mul(term, step_pow);
  }
  return result;
}

OrderedSeries normal_order(const PowerSeries& f, double q, int cap) {
  if (f.step < 1) throw DomainError("power series step must be positive");
  const bool integral = is_integer(f.mu) && f.mu >= 0;
  const int shift = integral ? static_cast<int>(std::lround(f.mu)) : 0;
  const double grade = integral ? 0.0 : f.mu;
  OrderedSeries r(q, cap, grade, grade);
  for (std::size_t k = 0; k < f.a.size(); ++k) {
    const int e = shift + f.step * static_cast<int>(k);
    if (2 * e > cap) break;
    r.add(e, e, f.a[k]);
  }
  return r;
}

double qnumber(double x, double q) { return -std::expm1(x * std::log(q)) / (1.0 - q); }

OrderedSeries d_z(const OrderedSeries& x) {
  OrderedSeries r(x.q(), x.cap(), x.z_grade() - 1.0, x.s_grade());
  for (const auto& [k, v] : x.coeffs()) r.add(k.first, k.second, v * qnumber(k.first + x.z_grade(), x.q()));
  return r;
}

OrderedSeries d_s(const OrderedSeries& x, SDerivative conv) {
  OrderedSeries r(x.q(), x.cap(), x.z_grade(), x.s_grade() - 1.0);
  for (const auto& [k, v] : x.coeffs()) {
    const double e = k.first + x.z_grade(), f = k.second + x.s_grade();
    Complex c = v * qnumber(f, x.q());
    if (conv == SDerivative::Left) c *= std::pow(x.q(), e);
    r.add(k.first, k.second, c);
  }
  return r;
}

OrderedSeries left_z(const OrderedSeries& x, double p, Complex c) {
  OrderedSeries r(x.q(), x.cap(), x.z_grade() + p, x.s_grade());
  for (const auto& [k, v] : x.coeffs()) r.add(k.first, k.second, v * c);
  return r;
}

OrderedSeries right_s(const OrderedSeries& x, double p, Complex c) {
  OrderedSeries r(x.q(), x.cap(), x.z_grade(), x.s_grade() + p);
  for (const auto& [k, v] : x.coeffs()) r.add(k.first, k.second, v * c);
  return r;
}

double max_abs_difference(const OrderedSeries& x, const OrderedSeries& y) {
  const double dz = x.z_grade() - y.z_grade(), ds = x.s_grade() - y.s_grade();
  if (!is_integer(dz) || !is_integer(ds)) throw DomainError("series grades differ by a non-integer");
  const int oz = static_cast<int>(std::lround(dz)), os = static_cast<int>(std::lround(ds));

  // Value of a series at an index of the other; nullopt-style flag when the
  // monomial lies beyond that series' cap and is therefore unknown.
  auto lookup = [](const OrderedSeries& s, int m, int n, bool& known) -> Complex {
    known = true;
    if (m < 0 || n < 0) return 0.0;
    if (m + n > s.cap()) {
      known = false;
      return 0.0;
    }
    return s.at(m, n);
  };
  double worst = 0.0;
  bool known = false;
  for (const auto& [k, v] : x.coeffs()) {
    const Complex w = lookup(y, k.first + oz, k.second + os, known);
    if (known) worst = std::max(worst, std::abs(v - w));
  }
  for (const auto& [k, v] : y.coeffs()) {
    const Complex w = lookup(x, k.first - oz, k.second - os, known);
    if (known) worst = std::max(worst, std::abs(v - w));
  }
  return worst;
}

Complex scalar_reduce(const OrderedSeries& x, Complex z, Complex s, const QContext& ctx) {
  CompensatedSum sum;
  double top = 0.0;
  const int band = std::min(x.cap(), 4);
  for (const auto& [k, v] : x.coeffs()) {
    const Complex t = v * cpow(z, k.first + x.z_grade()) * cpow(s, k.second + x.s_grade());
    sum.add(t);
    if (k.first + k.second > x.cap() - band) top = std::max(top, std::abs(t));
  }
  const Complex S = sum.value();
  if (x.cap() > 0 && top >= ctx.tol().eps_rel * (std::abs(S) + 1.0))
    throw TailNotConverged("scalar_reduce: terms near the series cap are not negligible");
  return S;
}

PowerSeries series_eq(Complex a, double q, int n) {
  PowerSeries f;
  Complex t = 1.0;
  for (int r = 0; r <= n; ++r) {
    f.a.push_back(t);
    t *= a / (1.0 - std::pow(q, r + 1));
  }
  return f;
}

PowerSeries series_Eq(Complex a, double q, int n) {
  PowerSeries f;
  Complex t = 1.0;
  for (int r = 0; r <= n; ++r) {
    f.a.push_back(t);
    t *= a * std::pow(q, r) / (1.0 - std::pow(q, r + 1));
  }
  return f;
}

PowerSeries series_phi01(Complex a, double q, int n) {
  PowerSeries f;
  Complex t = 1.0;
  for (int r = 0; r <= n; ++r) {
    f.a.push_back(t);
    t *= a * std::pow(q, 2 * r) / (1.0 - std::pow(q, r + 1));
  }
  return f;
}

namespace {

// Coefficients of x^(nu+2k) in J^(1) (extra = 0) or J^(2) (extra = 1) of
// argument (1-q^2) a x, base q^2.
PowerSeries series_J(double nu, Complex a, double q, int n, int extra) {
  require_q(q);
  const double p = q * q, lam = 1.0 - p;
  const QContext ctx2(p);
  PowerSeries f;
  f.mu = nu;
  f.step = 2;
  Complex t = qgamma_reciprocal(nu + 1.0, ctx2) * cpow(a / 2.0, nu);
  const Complex w = -(lam * a / 2.0) * (lam * a / 2.0);
  for (int k = 0; k <= n; ++k) {
    f.a.push_back(t);
    const double num = extra ? std::pow(p, nu + 2 * k + 1) : 1.0;
    t *= w * num / ((1.0 - std::pow(p, k + 1)) * (1.0 - std::pow(p, nu + 1 + k)));
  }
  return f;
}

}  // namespace

PowerSeries series_J1(double nu, Complex a, double q, int n) { return series_J(nu, a, q, n, 0); }
PowerSeries series_J2(double nu, Complex a, double q, int n) { return series_J(nu, a, q, n, 1); }

PowerSeries series_phi03(double nu, Complex a, double q, int n) {
  require_q(q);
  const double p = q * q, lam = 1.0 - p;
  PowerSeries f;
  f.step = 2;
  Complex t = 1.0;
  const Complex w = -(lam * a / 2.0) * (lam * a / 2.0);
  for (int k = 0; k <= n; ++k) {
    f.a.push_back(t);
    t *= w * std::pow(p, 2.0 * (nu + 2 * k + 1)) /
         ((1.0 - std::pow(p, k + 1)) * (1.0 - std::pow(p, nu + 1 + k)));
  }
  return f;
}

namespace {

double scale_of(const OrderedSeries& x) {
  double m = 1.0;
  for (const auto& [k, v] : x.coeffs()) m = std::max(m, std::abs(v));
  return m;
}

double relative_mismatch(const OrderedSeries& lhs, const OrderedSeries& rhs) {
  return max_abs_difference(lhs, rhs) / std::max(scale_of(lhs), scale_of(rhs));
}

}  // namespace

Prop21Residuals verify_prop21(const QContext& ctx, int N) {
  if (N < 0) throw DomainError("order must be nonnegative");
  const double q = ctx.q();
  const int cap = 2 * N;
  const Complex u = ctx.lambda() / 2.0;
  Prop21Residuals r;
  r.phi01_vs_Eq = max_abs_difference(expand_product(series_phi01(u, q, N), q, cap),
                                     normal_order(series_Eq(u, q, N), q, cap));
  r.Eq_vs_eq = max_abs_difference(expand_product(series_Eq(u, q, N), q, cap),
                                  normal_order(series_eq(u, q, N), q, cap));
  return r;
}

Prop22Residuals verify_prop22(double nu, const QContext& ctx, int N) {
  if (!(nu > 0)) throw DomainError("order nu must be positive");
  if (N < 0) throw DomainError("order must be nonnegative");
  const double q = ctx.q();
  const int cap = 2 * N + 2 * static_cast<int>(std::ceil(nu));
  const int terms = cap;
  const Complex pref = std::pow(q, -nu * nu / 2.0);

  // (Gamma_{q^2}(nu+1))^-1 (q^-1/2 zs/2)^nu times the 0Phi3 series at q^-1/2 zs.
  PowerSeries lhs = series_phi03(nu, std::pow(q, -0.5), q, terms);
  lhs.mu = nu;
  const Complex lead = qgamma_reciprocal(nu + 1.0, ctx.squared()) * std::pow(q, -nu / 2.0) * std::pow(2.0, -nu);
  for (auto& c : lhs.a) c *= lead;

  Prop22Residuals r;
  r.phi03_vs_J2 = relative_mismatch(expand_product(lhs, q, cap), normal_order(series_J2(nu, 1.0, q, terms), q, cap) * pref);
  r.J2_vs_J1 = relative_mismatch(expand_product(series_J2(nu, std::pow(q, -0.5), q, terms), q, cap),
                                 normal_order(series_J1(nu, 1.0, q, terms), q, cap) * pref);
  return r;
}

std::map<std::string, double> verify_derivative_relations(double nu, Complex a, const QContext& ctx, int N,
                                                          SDerivative conv) {
  if (!(nu > 0)) throw DomainError("order nu must be positive");
  if (N < 0) throw DomainError("order must be nonnegative");
  const double q = ctx.q(), lam = ctx.lambda();
  const int cap = 2 * N + 2 * static_cast<int>(std::ceil(nu)) + 2;
  const int terms = cap;
  const Complex k = 2.0 / (1.0 + q);
  const Complex u = lam * a / 2.0;
  const double two_nu = std::pow(2.0, nu);

  auto N_ = [&](const PowerSeries& f) { return normal_order(f, q, cap); };
  auto Dz = [&](const OrderedSeries& x) { return d_z(x) * k; };
  auto Ds = [&](const OrderedSeries& x) { return d_s(x, conv) * k; };
  auto zl = [&](const OrderedSeries& x, double p, Complex c) { return left_z(x, p, c); };
  auto sr = [&](const OrderedSeries& x, double p, Complex c) { return right_s(x, p, c); };

  std::map<std::string, double> out;
  out["eq_dz"] = relative_mismatch(Dz(N_(series_eq(u, q, terms))), sr(N_(series_eq(u, q, terms)), 1, a));
  out["eq_ds"] = relative_mismatch(Ds(N_(series_eq(u, q, terms))), zl(N_(series_eq(u * q, q, terms)), 1, a * q));
  out["Eq_dz"] = relative_mismatch(Dz(N_(series_Eq(u, q, terms))), sr(N_(series_Eq(u * q, q, terms)), 1, a));
  out["Eq_ds"] =
      relative_mismatch(Ds(N_(series_Eq(u, q, terms))), zl(N_(series_Eq(u * q * q, q, terms)), 1, a * q));

  const auto J1 = [&](double v, Complex b) { return N_(series_J1(v, b, q, terms)); };
  const auto J2 = [&](double v, Complex b) { return N_(series_J2(v, b, q, terms)); };
  const double qn1 = std::pow(q, nu + 1), qn2 = std::pow(q, nu + 2), qm1 = std::pow(q, 1 - nu);

  out["J1_dz_raise"] = relative_mismatch(Dz(zl(J1(nu, a), -nu, two_nu)), sr(zl(J1(nu + 1, a), -nu, two_nu), 1, -a));
  out["J1_ds_raise"] =
      relative_mismatch(Ds(sr(J1(nu, a), -nu, two_nu)), zl(sr(J1(nu + 1, a * q), -nu, two_nu), 1, -a * q));
  out["J1_dz_lower"] =
      relative_mismatch(Dz(zl(J1(nu, a), nu, 1.0 / two_nu)), sr(zl(J1(nu - 1, a), nu, 1.0 / two_nu), 1, a));
  out["J2_dz_raise"] =
      relative_mismatch(Dz(zl(J2(nu, a), -nu, two_nu)), sr(zl(J2(nu + 1, a * q), -nu, two_nu), 1, -a * qn1));
  out["J2_ds_raise"] =
      relative_mismatch(Ds(sr(J2(nu, a), -nu, two_nu)), zl(sr(J2(nu + 1, a * q * q), -nu, two_nu), 1, -a * qn2));
  out["J2_dz_lower"] =
      relative_mismatch(Dz(zl(J2(nu, a), nu, 1.0 / two_nu)), sr(zl(J2(nu - 1, a * q), nu, 1.0 / two_nu), 1, a * qm1));
  return out;
}

}  // namespace qsf
