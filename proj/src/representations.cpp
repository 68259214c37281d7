#include "qsf/representations.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "qsf/noncomm.hpp"

namespace qsf {

namespace {

using R = RepresentationId;

const Complex kI(0.0, 1.0);

bool is_scalar_id(R id) {
  switch (id) {
    case R::I1_unit_scalar:
    case R::I2_unit_scalar:
    case R::K1_line_scalar:
    case R::K2_line_scalar:
    case R::K1_half_scalar:
    case R::K2_half_scalar:
    case R::K1_double_scalar:
    case R::K2_double_scalar:
      return true;
    default:
      return false;
  }
}

// J1 values at the lattice z = q^m, argument z s; lazily extended outward.
class J1Lattice {
 public:
  J1Lattice(double nu, double s, const QContext& ctx) : nu_(nu), s_(s), ctx_(ctx) {}

  Complex operator()(double z) {
    const double q = ctx_.q();
    const double x = z * s_;
    if (x < J1_series_limit(ctx_)) return bessel_series(BesselKind::J1, nu_, x, ctx_);
    const long m = std::lround(std::log(z) / std::log(q));
    if (std::abs(std::pow(q, static_cast<double>(m)) - z) > 1e-12 * z) return J1_continued(nu_, x, ctx_);
    if (vals_.empty() || m < lo_ || m > hi_) {
      lo_ = vals_.empty() ? m : std::min<long>(m, 2 * lo_ - 8);
      hi_ = std::max<long>(hi_, m);
      vals_ = J1_on_lattice(nu_, s_, static_cast<int>(lo_), static_cast<int>(hi_), ctx_);
    }
    return vals_[static_cast<std::size_t>(m - lo_)];
  }

 private:
  double nu_, s_;
  QContext ctx_;
  long lo_ = 0, hi_ = 0;
  std::vector<Complex> vals_;
};

// J^(2) = (-lambda^2 x^2/4; q^2)_inf J^(1); the product form stays accurate
// where the alternating series cancels.
Complex J2_accurate(double nu, double x, const QContext& ctx) {
  if (x < first_kind_radius(ctx)) return bessel_series(BesselKind::J2, nu, x, ctx);
  const double lam = ctx.lambda();
  return qpochhammer_inf(-lam * lam * x * x / 4.0, ctx.squared()) * J1_continued(nu, x, ctx);
}

Complex phi21_unit(double a, double b, double c, const QContext& ctx) {
  const double p = ctx.q() * ctx.q();
  return phi21(a, b, c, p, 1.0, ctx);
}

}  // namespace

const std::vector<RepresentationId>& all_representations() {
  static const std::vector<R> ids = {R::I1_unit,        R::I2_unit,        R::J1_unit,          R::J2_unit,
                                     R::K1_line,        R::K2_line,        R::K1_half,          R::K2_half,
                                     R::K1_double,      R::I1_unit_scalar, R::I2_unit_scalar,   R::K1_line_scalar,
                                     R::K2_line_scalar, R::K1_half_scalar, R::K2_half_scalar,   R::K1_double_scalar,
                                     R::K2_double_scalar};
  return ids;
}

std::string to_string(RepresentationId id) {
  switch (id) {
    case R::I1_unit: return "I1_unit";
    case R::I2_unit: return "I2_unit";
    case R::J1_unit: return "J1_unit";
    case R::J2_unit: return "J2_unit";
    case R::K1_line: return "K1_line";
    case R::K2_line: return "K2_line";
    case R::K1_half: return "K1_half";
    case R::K2_half: return "K2_half";
    case R::K1_double: return "K1_double";
    case R::I1_unit_scalar: return "I1_unit_scalar";
    case R::I2_unit_scalar: return "I2_unit_scalar";
    case R::K1_line_scalar: return "K1_line_scalar";
    case R::K2_line_scalar: return "K2_line_scalar";
    case R::K1_half_scalar: return "K1_half_scalar";
    case R::K2_half_scalar: return "K2_half_scalar";
    case R::K1_double_scalar: return "K1_double_scalar";
    case R::K2_double_scalar: return "K2_double_scalar";
  }
  return "?";
}

RepresentationId representation_from_string(const std::string& name) {
  for (R id : all_representations())
    if (to_string(id) == name) return id;
  throw DomainError("unknown representation '" + name + "'");
}

RepresentationInfo info(RepresentationId id) {
  using BK = BesselKind;
  using D = JacksonDomain;
  const bool nc = !is_scalar_id(id);
  switch (id) {
    case R::I1_unit:
    case R::I1_unit_scalar: return {BK::I1, D::SymmetricUnit, false, nc, 0.0, +1};
    case R::I2_unit:
    case R::I2_unit_scalar: return {BK::I2, D::SymmetricUnit, false, nc, 0.0, +1};
    case R::J1_unit: return {BK::J1, D::SymmetricUnit, false, nc, 0.0, +1};
    case R::J2_unit: return {BK::J2, D::SymmetricUnit, false, nc, 0.0, +1};
    case R::K1_line:
    case R::K1_line_scalar: return {BK::K1, D::RealLine, false, nc, 0.5, -1};
    case R::K2_line:
    case R::K2_line_scalar: return {BK::K2, D::RealLine, false, nc, 1.5, -1};
    case R::K1_half:
    case R::K1_half_scalar: return {BK::K1, D::HalfLine, false, nc, 0.5, -1};
    case R::K2_half:
    case R::K2_half_scalar: return {BK::K2, D::HalfLine, false, nc, 1.5, -1};
    case R::K1_double:
    case R::K1_double_scalar: return {BK::K1, D::HalfLine, true, nc, 0.5, -1};
    case R::K2_double_scalar: return {BK::K2, D::HalfLine, true, nc, 1.5, -1};
  }
  throw DomainError("unknown representation");
}

KernelWeight kernel_weight(RepresentationId id, double nu, const QContext& ctx) {
  const double q = ctx.q(), p = q * q;
  auto k = [&](Complex a, Complex b, double gamma) { return QBinomialKernel{a, b, gamma, p}; };
  KernelWeight w;
  switch (id) {
    case R::I1_unit:
    case R::I1_unit_scalar:
    case R::J1_unit: w.z = k(p, std::pow(q, 2 * nu + 1), 0); break;
    case R::I2_unit:
    case R::I2_unit_scalar:
    case R::J2_unit: w.z = k(std::pow(q, -2 * nu + 1), 1.0, 0); break;
    case R::K1_line:
    case R::K1_line_scalar: w.z = k(-p, -std::pow(q, -2 * nu + 1), 0); break;
    case R::K2_line:
    case R::K2_line_scalar: w.z = k(-std::pow(q, 2 * nu + 1), -1.0, 0); break;
    case R::K1_half: w.z = k(-p, -std::pow(q, -2 * nu), 1); break;
    case R::K1_half_scalar: w.z = k(-p, -std::pow(q, -2 * nu + 1), 1); break;
    case R::K2_half:
    case R::K2_half_scalar: w.z = k(-std::pow(q, 2 * nu + 2), -1.0, 1); break;
    case R::K1_double:
      w.z = k(-p, -std::pow(q, -2 * nu), 1);
      w.has_zeta = true;
      w.zeta = k(q, 1.0, 0);
      break;
    case R::K1_double_scalar:
      w.z = k(-p, -std::pow(q, -2 * nu), 1);
      w.has_zeta = true;
      w.zeta = k(p, q, 0);
      break;
    case R::K2_double_scalar:
      w.z = k(-std::pow(q, 2 * nu + 2), -1.0, 1);
      w.has_zeta = true;
      w.zeta = k(q, 1.0, 0);
      break;
  }
  return w;
}

void check_constraints(RepresentationId id, double nu, double s, const QContext& ctx) {
  const RepresentationInfo in = info(id);
  if (!std::isfinite(nu) || !(nu > in.nu_min))
    throw DomainError(to_string(id) + " requires nu > " + std::to_string(in.nu_min));
  if (!std::isfinite(s) || !(s > 0.0)) throw DomainError(to_string(id) + " requires s > 0");
  if ((in.target == BesselKind::I1 || in.target == BesselKind::J1) && s >= first_kind_radius(ctx))
    throw DomainError(to_string(id) + " requires s inside the radius 1/(1-q^2)");
}

Complex prefactor(RepresentationId id, double nu, const QContext& ctx) {
  const double q = ctx.q();
  const QContext c2 = ctx.squared();
  auto G = [&](double x) { return qgamma(x, c2); };
  auto sym = [&] { return std::sqrt(a_nu(nu, ctx) / a_nu(-nu, ctx)); };
  switch (id) {
    case R::I1_unit:
    case R::I1_unit_scalar:
    case R::J1_unit: return (1 + q) / (2 * G(nu + 0.5) * G(0.5));
    case R::I2_unit:
    case R::I2_unit_scalar: return 1.0 / (2.0 * G(nu + 1) * phi21_unit(std::pow(q, -2 * nu + 1), q, q * q * q, ctx));
    case R::J2_unit: return (1 + q) / (2.0 * G(nu + 1) * phi21_unit(std::pow(q, -2 * nu + 1), q, q * q * q, ctx));
    case R::K1_line:
    case R::K1_line_scalar:
      return std::pow(q, -nu * nu + 0.5) * G(nu + 0.5) * G(0.5) / (4 * Q_nu(nu, ctx)) * sym();
    case R::K2_line:
    case R::K2_line_scalar:
      return std::pow(q, -nu * nu + nu) * G(nu + 0.5) * G(0.5) / (4 * Q_nu(0.5, ctx)) * sym();
    case R::K1_half:
    case R::K1_half_scalar: return 0.5 * std::pow(q, -nu * nu - nu) * (1 + q) * G(nu + 1) * sym();
    case R::K2_half:
    case R::K2_half_scalar: return 0.5 * std::pow(q, -nu * nu + nu) * (1 + q) * G(nu + 1) * sym();
    case R::K1_double:
      return std::pow(q, -nu * nu - nu) * (1 + q) * (1 + q) * G(nu + 1) /
             (4.0 * phi21_unit(q, q, q * q * q, ctx)) * sym();
    case R::K1_double_scalar:
      return std::pow(q, -nu * nu - nu) * (1 + q) * (1 + q) * G(nu + 1) / (4 * G(0.5) * G(0.5)) * sym();
    case R::K2_double_scalar:
      return std::pow(q, -nu * nu + nu) * (1 + q) * (1 + q) * G(nu + 1) /
             (4.0 * phi21_unit(q, q, q * q * q, ctx)) * sym();
  }
  throw DomainError("unknown representation");
}

Complex rhs_eval(RepresentationId id, double nu, double s, const QContext& ctx, const RhsOptions& opt) {
  check_constraints(id, nu, s, ctx);
  const RepresentationInfo in = info(id);
  const KernelWeight w = kernel_weight(id, nu, ctx);
  const double lam = ctx.lambda();
  const Complex c = prefactor(id, nu, ctx);
  const double spow = std::pow(s / 2.0, in.s_power * nu);
  auto kz = [&](double z) { return R_kernel(w.z, z, ctx); };

  Complex integral;
  switch (id) {
    case R::I1_unit:
    case R::I1_unit_scalar:
      integral = jackson_integral([&](double z) { return kz(z) * eq_exp(lam * z * s / 2.0, ctx); }, in.domain, ctx,
                                  opt.trunc);
      break;
    case R::I2_unit:
    case R::I2_unit_scalar:
      integral = jackson_integral([&](double z) { return kz(z) * Eq_exp(lam * z * s / 2.0, ctx); }, in.domain, ctx,
                                  opt.trunc);
      break;
    case R::J1_unit:
      integral = jackson_integral([&](double z) { return kz(z) * eq_exp(-kI * lam * z * s / 2.0, ctx); }, in.domain,
                                  ctx, opt.trunc);
      break;
    case R::J2_unit:
      integral = jackson_integral([&](double z) { return kz(z) * Eq_exp(-kI * lam * z * s / 2.0, ctx); }, in.domain,
                                  ctx, opt.trunc);
      break;
    case R::K1_line:
    case R::K1_line_scalar:
      integral = jackson_integral([&](double z) { return kz(z) * eq_exp(kI * lam * z * s / 2.0, ctx); }, in.domain,
                                  ctx, opt.trunc);
      break;
    case R::K2_line:
    case R::K2_line_scalar:
      integral = jackson_integral([&](double z) { return kz(z) * Eq_exp(kI * lam * z * s / 2.0, ctx); }, in.domain,
                                  ctx, opt.trunc);
      break;
    case R::K1_half:
    case R::K1_half_scalar: {
      J1Lattice J0(0.0, s, ctx);
      integral = jackson_integral([&](double z) { return kz(z) * J0(z); }, in.domain, ctx, opt.trunc);
      break;
    }
    case R::K2_half:
    case R::K2_half_scalar:
      integral = jackson_integral([&](double z) { return kz(z) * J2_accurate(0.0, z * s, ctx); }, in.domain, ctx,
                                  opt.trunc);
      break;
    case R::K1_double:
    case R::K1_double_scalar:
    case R::K2_double_scalar: {
      const bool eq = id != R::K2_double_scalar;
      auto osc = [&](double z, double zeta) {
        const Complex u = -kI * lam * z * zeta * s / 2.0;
        return eq ? eq_exp(u, ctx) : Eq_exp(u, ctx);
      };
      auto kzeta = [&](double zeta) { return R_kernel(w.zeta, zeta, ctx); };
      if (opt.zeta_inner) {
        integral = jackson_integral(
            [&](double z) {
              const Complex inner = jackson_integral([&](double zeta) { return kzeta(zeta) * osc(z, zeta); },
                                                     JacksonDomain::SymmetricUnit, ctx, opt.trunc);
              return kz(z) * inner;
            },
            JacksonDomain::HalfLine, ctx, opt.trunc);
      } else {
        integral = jackson_integral(
            [&](double zeta) {
              const Complex inner =
                  jackson_integral([&](double z) { return kz(z) * osc(z, zeta); }, JacksonDomain::HalfLine, ctx, opt.trunc);
              return kzeta(zeta) * inner;
            },
            JacksonDomain::SymmetricUnit, ctx, opt.trunc);
      }
      break;
    }
  }
  return c * integral * spow;
}

VerificationRecord verify(RepresentationId id, double nu, double s, const QContext& ctx, double threshold,
                          const RhsOptions& opt) {
  check_constraints(id, nu, s, ctx);
  VerificationRecord r;
  r.rep = id;
  r.q = ctx.q();
  r.nu = nu;
  r.s = s;
  r.lhs = bessel_eval(info(id).target, {nu, s, ctx});
  r.rhs = rhs_eval(id, nu, s, ctx, opt);
  r.rel_residual = std::abs(r.lhs - r.rhs) / std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-300});
  r.pass = r.rel_residual < threshold;
  if (std::abs(r.rhs.imag()) >= 1e-10 * std::abs(r.rhs)) r.notes = "rhs imaginary part not negligible";
  if (std::abs(r.lhs.imag()) >= 1e-10 * std::abs(r.lhs)) {
    if (!r.notes.empty()) r.notes += "; ";
    r.notes += "lhs imaginary part not negligible";
  }
  return r;
}

VerificationRecord verify_captured(RepresentationId id, double nu, double s, const QContext& ctx, double threshold,
                                   const RhsOptions& opt) {
  check_constraints(id, nu, s, ctx);
  try {
    return verify(id, nu, s, ctx, threshold, opt);
  } catch (const std::exception& e) {
    VerificationRecord r;
    r.rep = id;
    r.q = ctx.q();
    r.nu = nu;
    r.s = s;
    r.lhs = r.rhs = std::numeric_limits<double>::quiet_NaN();
    r.rel_residual = std::numeric_limits<double>::quiet_NaN();
    r.pass = false;
    r.notes = error_kind(e) + ": " + e.what();
    return r;
  }
}

double reduction_certificate(RepresentationId id, const QContext& ctx, int N) {
  if (is_scalar_id(id)) return 0.0;
  const double q = ctx.q(), lam = ctx.lambda();
  const int cap = 2 * N;
  const Complex u = lam / 2.0;
  auto diff = [&](const PowerSeries& a, const PowerSeries& b, double comm) {
    return max_abs_difference(expand_product(a, comm, cap), normal_order(b, comm, cap));
  };
  switch (id) {
    case R::I1_unit: return diff(series_Eq(u, q, cap), series_eq(u, q, cap), q);
    case R::J1_unit: return diff(series_Eq(-kI * u, q, cap), series_eq(-kI * u, q, cap), q);
    case R::K1_line: return diff(series_Eq(kI * u, q, cap), series_eq(kI * u, q, cap), q);
    case R::I2_unit: return diff(series_phi01(u, q, cap), series_Eq(u, q, cap), q);
    case R::J2_unit: return diff(series_phi01(-kI * u, q, cap), series_Eq(-kI * u, q, cap), q);
    case R::K2_line: return diff(series_phi01(kI * u, q, cap), series_Eq(kI * u, q, cap), q);
    case R::K1_half: return diff(series_J2(0.0, std::pow(q, -0.5), q, cap), series_J1(0.0, 1.0, q, cap), q);
    case R::K2_half: return diff(series_phi03(0.0, std::pow(q, -0.5), q, cap), series_J2(0.0, 1.0, q, cap), q);
    // w = zeta z obeys w s = q^2 s w
    case R::K1_double: return diff(series_phi01(-kI * u, q, cap), series_eq(-kI * u, q, cap), q * q);
    default: return 0.0;
  }
}

Complex kernel_moment(RepresentationId id, int r, double nu, const QContext& ctx, const LatticeTruncation& trunc) {
  if (r < 0) throw DomainError("kernel_moment: order must be nonnegative");
  const RepresentationInfo in = info(id);
  if (in.double_integral) throw DomainError("kernel_moment: single-integral representations only");
  const KernelWeight w = kernel_weight(id, nu, ctx);
  return jackson_integral([&](double z) { return R_kernel(w.z, z, ctx) * std::pow(z, r); }, in.domain, ctx, trunc);
}

double moment_constant_A(double nu, const QContext& ctx) {
  const QContext c2 = ctx.squared();
  return 2.0 / (1.0 + ctx.q()) * qgamma(nu + 0.5, c2) * qgamma(0.5, c2);
}

double coefficient_verify(RepresentationId id, double nu, const QContext& ctx, int N) {
  if (id != R::I1_unit && id != R::I2_unit && id != R::J1_unit && id != R::J2_unit)
    throw DomainError("coefficient_verify: unit-interval representations only");
  if (!(nu > 0)) throw DomainError("coefficient_verify: requires nu > 0");
  if (N < 0) throw DomainError("coefficient_verify: order must be nonnegative");
  const double q = ctx.q(), lam = ctx.lambda(), p = q * q;
  const bool second = id == R::I2_unit || id == R::J2_unit;
  const Complex a = (id == R::J1_unit || id == R::J2_unit) ? -kI * lam / 2.0 : Complex(lam / 2.0);
  const Complex pref = prefactor(id, nu, ctx) * std::pow(2.0, -nu);
  const QContext c2 = ctx.squared();

  double worst = 0.0;
  const Complex m0 = kernel_moment(id, 0, nu, ctx);
  for (int n = 0; n <= N; ++n) {
    const int r = 2 * n;
    // coefficient of x^r in e_q(a x) or E_q(a x)
    Complex c = std::pow(a, r) / qpochhammer_n(q, q, r);
    if (second) c *= std::pow(q, r * (r - 1) / 2.0);
    const Complex rhs = pref * c * kernel_moment(id, r, nu, ctx);
    const double sign = (id == R::J1_unit || id == R::J2_unit) ? std::pow(-1.0, n) : 1.0;
    Complex lhs = sign * qgamma_reciprocal(nu + 1, c2) * std::pow(lam, r) /
                  (qpochhammer_n(p, p, n) * qpochhammer_n(std::pow(p, nu + 1), p, n) * std::pow(2.0, nu + r));
    if (second) lhs *= std::pow(p, n * (nu + n));
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
    if (2 * n + 1 <= 2 * N + 1) worst = std::max(worst, std::abs(kernel_moment(id, r + 1, nu, ctx)) / std::abs(m0));
  }
  return worst;
}

double kernel_diff_residual(RepresentationId id, double z, double nu, const QContext& ctx, bool zeta) {
  const KernelWeight w = kernel_weight(id, nu, ctx);
  if (zeta && !w.has_zeta) throw DomainError("kernel_diff_residual: representation has no zeta kernel");
  return R_diff_residual(zeta ? w.zeta : w.z, z, ctx);
}

std::vector<LimitPoint> classical_limit_check(RepresentationId id, double nu, double s, const std::vector<int>& ks) {
  if (id != R::I1_unit && id != R::K1_line && id != R::K1_half && id != R::K1_double)
    throw DomainError("classical_limit_check: I1_unit, K1_line, K1_half or K1_double only");
  const ClassicalKind ck = id == R::I1_unit ? ClassicalKind::I : ClassicalKind::K;
  const double ref = classical_oracle(ck, nu, s);
  std::vector<LimitPoint> out;
  for (int k : ks) {
    const double q = 1.0 - std::ldexp(1.0, -k);
    LimitPoint pt{k, q, std::numeric_limits<double>::quiet_NaN(), ref, std::numeric_limits<double>::quiet_NaN(), ""};
    try {
      pt.value = rhs_eval(id, nu, s, QContext(q)).real();
      pt.error = std::abs(pt.value - ref);
    } catch (const std::exception& e) {
      pt.notes = error_kind(e) + ": " + e.what();
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace qsf
