#pragma once

// q-binomial kernels r(a,b;z) = (az;p)_inf/(bz;p)_inf and
// R(a,b,gamma;z) = r(a,b;z^2) z^gamma, their difference equations, the
// partial-fraction expansion of r, the bound estimates built on it, and the
// elliptic constant Q_nu.

#include <string>
#include <utility>
#include <vector>

#include "qsf/qcore.hpp"

namespace qsf {

struct QBinomialKernel {
  Complex a;
  Complex b;
  double gamma = 0.0;
  double base;  ///< p in (a z;p)_inf; q or q^2 in practice
};

/// (a z;p)_inf/(b z;p)_inf.  Factors vanishing simultaneously in the numerator
/// and the denominator are replaced by their limit.  PoleError at an unmatched
/// zero of the denominator.
Complex r_kernel(const QBinomialKernel& k, Complex z, const QContext& ctx);

/// r(a,b;z^2) z^gamma.  DomainError for z <= 0 (or complex z) with
/// non-integer gamma.
Complex R_kernel(const QBinomialKernel& k, Complex z, const QContext& ctx);

/// |z[b r(z) - a r(pz)] - [r(z) - r(pz)]| relative to the largest term.
double r_diff_residual(const QBinomialKernel& k, Complex z, const QContext& ctx);

/// Same for z^2[b t^gamma R(z) - a R(tz)] = t^gamma R(z) - R(tz), t = sqrt(p).
double R_diff_residual(const QBinomialKernel& k, Complex z, const QContext& ctx);

enum class PartialFractionForm {
  General,  ///< sum (-1)^k p^(k(k+1)/2) (a/b p^-k;p)_inf / ((p;p)_inf (p;p)_k (1 - z b p^k))
  Shifted,  ///< (a/b;p)_inf/(p;p)_inf sum (bp/a;p)_k (a/b)^k / ((p;p)_k (1 - z b p^k))
  ZeroA,    ///< a = 0: 1/(p;p)_inf sum (-1)^k p^(k(k+1)/2) / ((p;p)_k (1 - z b p^k))
};

/// Partial sum with K terms of the chosen expansion of r(a,b;z); K < 0 sums
/// until the tail criterion.  DomainError unless |a| < |b| (a = 0 for ZeroA,
/// a != 0 for Shifted).
Complex r_partial_fractions(const QBinomialKernel& k, Complex z, int K, const QContext& ctx,
                            PartialFractionForm form = PartialFractionForm::General);

/// The expansion of R(eps p^alpha', eps p^beta', gamma; z) over the poles
/// z^2 = eps p^(-beta'-k), written with a = eps q^(2 alpha), b = eps q^(2 beta),
/// p = q^2.
Complex R_pole_expansion(double eps, double alpha, double beta, double gamma, Complex z, const QContext& ctx);

/// The Taylor series sum eps^k q^(2 beta k) (q^(2(alpha-beta));q^2)_k/(q^2;q^2)_k z^(2k).
/// RadiusError outside |z| < q^-beta.
Complex R_taylor(double eps, double alpha, double beta, Complex z, const QContext& ctx);

/// Q_nu = (1-q) sum_{m in Z} 1/(q^(m-nu+1/2) + q^(-m+nu-1/2)).
double Q_nu(double nu, const QContext& ctx);

struct EllipticFromNome {
  double k, kp;  ///< modulus and complementary modulus
  double K, Kp;  ///< complete integrals K(k), K(k')
};

/// Modulus from the nome via theta constants, K and K' via the AGM.
EllipticFromNome elliptic_from_nome(const QContext& ctx);

/// Jacobi dn(u, k) for real u at the modulus with nome q (theta quotient).
double jacobi_dn(double u, const QContext& ctx);

/// (1-q) K(k) dn(u)/pi with u = (2/pi) ln(q^(-nu+1/2)) K'(k).
double Q_nu_elliptic(double nu, const QContext& ctx);

struct BoundGrid {
  int m_min = -10;
  int m_max = 10;
  int decay_m_max = 40;
  std::vector<double> s = {0.1, 1.0, 10.0};
  std::vector<std::pair<double, double>> alpha_beta = {{2.5, 0.5}, {3.2, 1.5}, {1.4, 0.7}, {2.0, -0.3}};
  std::vector<double> z = {0.1, 0.5, 1.0, 2.0, 10.0};
};

struct BoundCheck {
  std::string name;
  double worst_margin;  ///< min over the grid of (bound - value)/bound; >= 0 means the bound holds
  int points = 0;
};

/// Bound and limit statements for the q-exponentials, q-trigonometric functions
/// and q-binomial ratios.  Limit statements are checked as monotone decay over
/// m = 1..decay_m_max (margin = smallest relative decrease).
std::vector<BoundCheck> bound_suite(const QContext& ctx, const BoundGrid& grid = {});

/// Majorant constant of the bound r(-q^2a z^2)/r(-q^2b z^2) <= C/(1+z^2 q^(2 beta)).
double bound_constant_C(double alpha, double beta, const QContext& ctx);

}  // namespace qsf
