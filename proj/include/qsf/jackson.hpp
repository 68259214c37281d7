#pragma once

// Jackson q-integrals over the unit interval, the half line and the real line,
// the q-difference operator and integration-by-parts residuals.

#include <functional>

#include "qsf/qcore.hpp"

namespace qsf {

enum class JacksonDomain { SymmetricUnit, HalfLine, RealLine };

const char* to_string(JacksonDomain d);

struct LatticeTruncation {
  /// Nodes summed on each side before the tail criterion may stop a sum.
  int m_min_abs = 1;
  /// Node budget per side at q <= 0.9; scaled like QContext::budget above.
  int m_max_abs = 2000;
};

using RealFn = std::function<Complex(double)>;
using ComplexFn = std::function<Complex(Complex)>;

/// D_q f(x) = x^-1 (f(x) - f(qx)) / (1-q).  DomainError at x = 0.
Complex dq_diff(const RealFn& f, double x, const QContext& ctx);
Complex dq_diff(const ComplexFn& f, Complex x, const QContext& ctx);

struct JacksonSum {
  Complex value;
  int nodes_in = 0;   ///< nodes q^m, m >= 0, summed (per sign)
  int nodes_out = 0;  ///< nodes q^m, m < 0, summed (per sign)
};

/// SymmetricUnit: (1-q) sum_{m>=0} q^m [f(q^m) + f(-q^m)].
/// HalfLine:      (1-q) sum_{m in Z} q^m f(q^m).
/// RealLine:      (1-q) sum_{m in Z} q^m [f(q^m) + f(-q^m)].
/// Each one-sided tail stops on the tail criterion; a tail that does not pass
/// it within the node budget raises TailNotConverged.
Complex jackson_integral(const RealFn& f, JacksonDomain domain, const QContext& ctx,
                         const LatticeTruncation& trunc = {});
JacksonSum jackson_integral_detailed(const RealFn& f, JacksonDomain domain, const QContext& ctx,
                                     const LatticeTruncation& trunc = {});

struct IbpTerms {
  Complex lhs;       ///< integral of phi * D psi
  Complex boundary;  ///< boundary term (limits along the lattice)
  Complex rhs;       ///< boundary - integral of D phi(x) psi(qx)
  double residual;   ///< |lhs - rhs| / max(1, |lhs|, |boundary|)
};

/// Integration by parts on the given domain.  On the real line the boundary
/// term is lim [phi psi](q^-m) - [phi psi](-q^-m); the two contributions at
/// the origin cancel.  Lattice limits are taken as converged once
/// consecutive_small successive values agree to eps_rel.
IbpTerms ibp_terms(const RealFn& phi, const RealFn& psi, JacksonDomain domain, const QContext& ctx,
                   const LatticeTruncation& trunc = {});
double ibp_residual(const RealFn& phi, const RealFn& psi, JacksonDomain domain, const QContext& ctx,
                    const LatticeTruncation& trunc = {});

}  // namespace qsf
