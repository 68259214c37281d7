#include "qsf/jackson.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qsf {

const char* to_string(JacksonDomain d) {
  switch (d) {
    case JacksonDomain::SymmetricUnit: return "SymmetricUnit";
    case JacksonDomain::HalfLine: return "HalfLine";
    case JacksonDomain::RealLine: return "RealLine";
  }
  return "?";
}

Complex dq_diff(const RealFn& f, double x, const QContext& ctx) {
  if (x == 0.0) throw DomainError("dq_diff: x = 0");
  const double q = ctx.q();
  return (f(x) - f(q * x)) / (x * (1.0 - q));
}

Complex dq_diff(const ComplexFn& f, Complex x, const QContext& ctx) {
  if (x == Complex(0.0)) throw DomainError("dq_diff: x = 0");
  const double q = ctx.q();
  return (f(x) - f(q * x)) / (x * (1.0 - q));
}

namespace {

std::int64_t node_budget(const QContext& ctx, const LatticeTruncation& trunc) {
  if (trunc.m_max_abs < 1) throw DomainError("LatticeTruncation: m_max_abs must be >= 1");
  return ctx.budget(trunc.m_max_abs);
}

// One-sided sum over m = 0, 1, 2, ... (dir = +1) or m = -1, -2, ... (dir = -1)
// of q^m [f(q^m) (+ f(-q^m))].
int one_side(const RealFn& f, bool both_signs, int dir, const QContext& ctx, const LatticeTruncation& trunc,
             CompensatedSum& acc) {
  const double q = ctx.q();
  const std::int64_t nmax = node_budget(ctx, trunc);
  TailCounter tail(ctx.tol().consecutive_small);
  for (std::int64_t k = 0; k < nmax; ++k) {
    const double m = dir > 0 ? static_cast<double>(k) : -static_cast<double>(k + 1);
    const double x = std::pow(q, m);
    Complex t = f(x);
    if (both_signs) t += f(-x);
    t *= x;
    acc.add(t);
    // |t|/(1-q) bounds the remainder of a tail decaying at least like q^m.
    const bool small = std::abs(t) < (1.0 - q) * ctx.tol().eps_rel * (std::abs(acc.value()) + 1.0);
    if (tail.update(small) && k + 1 >= trunc.m_min_abs) return static_cast<int>(k + 1);
    if (!std::isfinite(std::abs(t))) break;
  }
  throw TailNotConverged(std::string("jackson_integral: ") + (dir > 0 ? "inner" : "outer") +
                         " tail did not decay");
}

}  // namespace

JacksonSum jackson_integral_detailed(const RealFn& f, JacksonDomain domain, const QContext& ctx,
                                     const LatticeTruncation& trunc) {
  CompensatedSum inner, outer;
  JacksonSum r;
  const bool both = domain != JacksonDomain::HalfLine;
  r.nodes_in = one_side(f, both, +1, ctx, trunc, inner);
  if (domain != JacksonDomain::SymmetricUnit) r.nodes_out = one_side(f, both, -1, ctx, trunc, outer);
  r.value = (1.0 - ctx.q()) * (inner.value() + outer.value());
  return r;
}

Complex jackson_integral(const RealFn& f, JacksonDomain domain, const QContext& ctx,
                         const LatticeTruncation& trunc) {
  return jackson_integral_detailed(f, domain, ctx, trunc).value;
}

namespace {

// lim_{k->inf} g(k), k = 0, 1, 2, ...; the last value if the sequence has not
// settled within the node budget.
Complex lattice_limit(const std::function<Complex(std::int64_t)>& g, const QContext& ctx,
                      const LatticeTruncation& trunc) {
  const std::int64_t nmax = node_budget(ctx, trunc);
  TailCounter tail(ctx.tol().consecutive_small);
  Complex prev = g(0);
  for (std::int64_t k = 1; k < nmax; ++k) {
    Complex cur = g(k);
    if (!std::isfinite(std::abs(cur))) return prev;
    if (tail.update(std::abs(cur - prev) < ctx.tol().eps_rel * (std::abs(cur) + 1.0))) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace

IbpTerms ibp_terms(const RealFn& phi, const RealFn& psi, JacksonDomain domain, const QContext& ctx,
                   const LatticeTruncation& trunc) {
  const double q = ctx.q();
  auto lhs_f = [&](double x) { return phi(x) * dq_diff(psi, x, ctx); };
  auto rhs_f = [&](double x) { return dq_diff(phi, x, ctx) * psi(q * x); };
  auto prod = [&](double x) { return phi(x) * psi(x); };
  IbpTerms t;
  t.lhs = jackson_integral(lhs_f, domain, ctx, trunc);
  switch (domain) {
    case JacksonDomain::SymmetricUnit:
      t.boundary = prod(1.0) - prod(-1.0);
      break;
    case JacksonDomain::HalfLine: {
      Complex upper = lattice_limit([&](std::int64_t k) { return prod(std::pow(q, -static_cast<double>(k))); },
                                    ctx, trunc);
      Complex lower = lattice_limit([&](std::int64_t k) { return prod(std::pow(q, static_cast<double>(k))); },
                                    ctx, trunc);
      t.boundary = upper - lower;
      break;
    }
    case JacksonDomain::RealLine:
      t.boundary = lattice_limit(
          [&](std::int64_t k) {
            double x = std::pow(q, -static_cast<double>(k));
            return prod(x) - prod(-x);
          },
          ctx, trunc);
      break;
  }
  t.rhs = t.boundary - jackson_integral(rhs_f, domain, ctx, trunc);
  double scale = std::max({1.0, std::abs(t.lhs), std::abs(t.boundary)});
  t.residual = std::abs(t.lhs - t.rhs) / scale;
  return t;
}

double ibp_residual(const RealFn& phi, const RealFn& psi, JacksonDomain domain, const QContext& ctx,
                    const LatticeTruncation& trunc) {
  return ibp_terms(phi, psi, domain, ctx, trunc).residual;
}

}  // namespace qsf
