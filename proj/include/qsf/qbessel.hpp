#pragma once

// q-Bessel functions of base q^2 written as functions of s:
//   J1, J2   J_nu^(1), J_nu^(2) at argument (1-q^2)s
//   I1, I2   modified functions of the first and second kind
//   K1, K2   q-Macdonald functions built from I_{+-nu}
// Fractional powers use the principal branch.

#include <string>
#include <vector>

#include "qsf/qcore.hpp"

namespace qsf {

enum class BesselKind { J1, J2, I1, I2, K1, K2 };

std::string to_string(BesselKind k);
/// DomainError for an unknown name.
BesselKind bessel_kind_from_string(const std::string& name);

struct BesselParams {
  double nu;
  Complex s;
  QContext ctx;
};

/// Radius of the J1/I1 series in s: 1/(1-q^2).
double first_kind_radius(const QContext& ctx);

/// Number of terms used by the last series, for diagnostics.
struct BesselSeriesInfo {
  int terms = 0;
};

/// Evaluates the function.  I1/J1: RadiusError for |s| >= 1/(1-q^2).  K1
/// outside that radius is continued through K2/(lambda^2 s^2/4; q^2)_inf.
/// K1/K2: IntegerOrderError for |sin nu pi| < 1e-8, DomainError unless s is
/// real and positive.
Complex bessel_eval(BesselKind kind, const BesselParams& p);

/// The raw series for J1/J2/I1/I2 without radius checks.
Complex bessel_series(BesselKind kind, double nu, Complex s, const QContext& ctx, BesselSeriesInfo* info = nullptr);

/// Largest argument at which J1 is summed directly by the continuation below:
/// min(1/(2(1-q^2)), 2).  Near q = 1 the alternating series cancels like the
/// classical one (terms up to e^s), hence the fixed cap.
double J1_series_limit(const QContext& ctx);

/// J1 at real s of any size: the series below J1_series_limit, continued
/// outward along the lattice s q^-j by the J1 difference equation
///   (1 + (1-q^2)^2 y^2/(4q^2)) f(y/q) = (q^-nu + q^nu) f(y) - f(qy).
/// Both solutions of the recurrence have the same magnitude for large y, so
/// the outward iteration is stable.
Complex J1_continued(double nu, double s, const QContext& ctx);

/// J1 at the nodes s q^m for m = m_lo..m_hi (m_lo <= m_hi), element i at
/// m = m_lo + i.
std::vector<Complex> J1_on_lattice(double nu, double s, int m_lo, int m_hi, const QContext& ctx);

/// sqrt(2/(1-q^2)) e_q(-1) I2(nu, 2/(1-q^2)) / 2Phi1(q^(nu+1/2), q^(-nu+1/2); -q; q, q).
double a_nu(double nu, const QContext& ctx);

/// q^(-nu+1/2) / (2 Gamma_{q^2}(nu) Gamma_{q^2}(1-nu) sin nu pi).
double a_nu_product_closed_form(double nu, const QContext& ctx);

/// Residual of the second-order difference equation of the kind, normalised
/// by the largest of the three terms.  The J equations are those of I with
/// s^2 -> -s^2.
double diff_eq_residual(BesselKind kind, const BesselParams& p);

/// Large-s forms of I2 and K2 through
///   Phi_nu(s) = 2Phi1(q^(nu+1/2), q^(-nu+1/2); -q; q, 2q/((1-q^2)s)).
/// DomainError unless kind is I2 or K2 and |2q/((1-q^2)s)| < 1.
Complex asymptotic_eval(BesselKind kind, const BesselParams& p);
Complex asymptotic_phi(double nu, Complex s, const QContext& ctx);

enum class ClassicalKind { I, K };

/// Classical I_nu by its power series; K_nu = pi (I_-nu - I_nu)/(2 sin nu pi).
/// IntegerOrderError for K at integer nu, DomainError for s <= 0.
double classical_oracle(ClassicalKind kind, double nu, double s);

/// Approximate K at integer order n: Richardson extrapolation of the even
/// part (K(n+e)+K(n-e))/2 over e = 1e-2 and 5e-3.
Complex bessel_integer_order_estimate(BesselKind kind, int n, Complex s, const QContext& ctx);

}  // namespace qsf
