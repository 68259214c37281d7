#pragma once

// Truncated power series in two noncommuting variables z, s with zs = q sz,
// stored with z-powers to the left of s-powers.  A series may carry real
// grades (mu, sigma): the stored index (m, n) then stands for the monomial
// z^(m+mu) s^(n+sigma).  Products commute s-powers past z-powers with
// s^b z^c = q^(-bc) z^c s^b, valid for real exponents.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qsf/qcore.hpp"

namespace qsf {

class OrderedSeries {
 public:
  using Index = std::pair<int, int>;

  /// Zero series; indices m, n >= 0 with m + n <= cap are represented exactly.
  OrderedSeries(double q, int cap, double z_grade = 0.0, double s_grade = 0.0);

  static OrderedSeries monomial(double q, int cap, int m, int n, Complex c, double z_grade = 0.0,
                                double s_grade = 0.0);
  static OrderedSeries one(double q, int cap) { return monomial(q, cap, 0, 0, 1.0); }

  double q() const { return q_; }
  int cap() const { return cap_; }
  double z_grade() const { return zg_; }
  double s_grade() const { return sg_; }
  const std::map<Index, Complex>& coeffs() const { return c_; }

  /// Coefficient at index (m, n); zero if absent.
  Complex at(int m, int n) const;
  /// Adds c at index (m, n); ignored beyond the cap.
  void add(int m, int n, Complex c);

  OrderedSeries operator+(const OrderedSeries& o) const;
  OrderedSeries operator-(const OrderedSeries& o) const;
  OrderedSeries operator*(Complex c) const;

 private:
  void check_compatible(const OrderedSeries& o) const;

  double q_;
  int cap_;
  double zg_, sg_;
  std::map<Index, Complex> c_;
};

using GradedSeries = OrderedSeries;

/// Product with the commutation rule; result cap is the smaller cap.
/// DomainError for mismatched q or caps.
OrderedSeries nc_mul(const OrderedSeries& x, const OrderedSeries& y);

/// sum_r a_r x^(mu + step r) for a scalar variable x.
struct PowerSeries {
  double mu = 0.0;
  int step = 1;
  std::vector<Complex> a;
};

/// sum_r a_r (zs)^(mu + step r), expanded by repeated products of zs; the
/// fractional part (zs)^mu is q^(-mu(mu-1)/2) z^mu s^mu.
OrderedSeries expand_product(const PowerSeries& f, double q, int cap);

/// Normal ordering: sum_r a_r z^(mu + step r) s^(mu + step r).
OrderedSeries normal_order(const PowerSeries& f, double q, int cap);

/// (z s)^mu as a single graded monomial.
OrderedSeries zs_power(double mu, double q, int cap);

/// q-number [x]_q = (1 - q^x)/(1 - q).
double qnumber(double x, double q);

/// D_z z^e s^f = [e]_q z^(e-1) s^f.
OrderedSeries d_z(const OrderedSeries& x);

enum class SDerivative {
  Left,   ///< s^-1 (f(z,s) - f(z,qs))/(1-q), s^-1 on the left: q^e [f]_q z^e s^(f-1)
  Right,  ///< s^-1 on the right: [f]_q z^e s^(f-1)
};

OrderedSeries d_s(const OrderedSeries& x, SDerivative conv = SDerivative::Left);

/// c z^p X  and  X s^p c for real p (no reordering needed).
OrderedSeries left_z(const OrderedSeries& x, double p, Complex c = 1.0);
OrderedSeries right_s(const OrderedSeries& x, double p, Complex c = 1.0);

/// Largest |difference| over monomials represented in both series.  Grades must
/// differ by integers.
double max_abs_difference(const OrderedSeries& x, const OrderedSeries& y);

/// Evaluates at commuting scalars: sum c z^(m+mu) s^(n+sigma).  TailNotConverged
/// when the terms of top total order are not below eps_rel of the sum.
Complex scalar_reduce(const OrderedSeries& x, Complex z, Complex s, const QContext& ctx);

/// Coefficient sequences of the scalar functions, argument a x.
PowerSeries series_eq(Complex a, double q, int n);       ///< e_q(a x)
PowerSeries series_Eq(Complex a, double q, int n);       ///< E_q(a x)
PowerSeries series_phi01(Complex a, double q, int n);    ///< 0Phi1(a x)
/// J_nu^(1)(lambda a x; q^2) and J_nu^(2) in the powers x^(nu + 2k); a may be
/// complex (principal powers).
PowerSeries series_J1(double nu, Complex a, double q, int n);
PowerSeries series_J2(double nu, Complex a, double q, int n);
/// 0Phi3(-;0,0,q^(2nu+2);q^2, -(lambda/2 q^(2nu+2) a x)^2) in the powers x^(2k).
PowerSeries series_phi03(double nu, Complex a, double q, int n);

struct Prop21Residuals {
  double phi01_vs_Eq;  ///< 0Phi1(lambda zs/2) against normal-ordered E_q
  double Eq_vs_eq;     ///< E_q(lambda zs/2) against normal-ordered e_q
};
Prop21Residuals verify_prop21(const QContext& ctx, int N);

struct Prop22Residuals {
  double phi03_vs_J2;  ///< q^(-1/2) shifted 0Phi3 form against q^(-nu^2/2) :J2:
  double J2_vs_J1;     ///< J2 at q^(-1/2) zs against q^(-nu^2/2) :J1:
};
Prop22Residuals verify_prop22(double nu, const QContext& ctx, int N);

/// The ten difference relations for normal-ordered e_q, E_q, J^(1), J^(2).
/// Keys: eq_dz, eq_ds, Eq_dz, Eq_ds, J1_dz_raise, J1_ds_raise, J1_dz_lower,
/// J2_dz_raise, J2_ds_raise, J2_dz_lower.
std::map<std::string, double> verify_derivative_relations(double nu, Complex a, const QContext& ctx, int N,
                                                          SDerivative conv = SDerivative::Left);

}  // namespace qsf
