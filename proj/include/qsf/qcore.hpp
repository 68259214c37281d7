#pragma once

// Basic q-calculus: Pochhammer symbols, q-Gamma/q-Beta, the two
// q-exponentials, q-trigonometric functions and the basic hypergeometric
// series used by the Bessel functions.
//
// All series and products stop on a tail criterion taken from the Tolerance
// of the supplied QContext and throw TailNotConverged when the term budget is
// exhausted.

#include <complex>
#include <cstdint>

#include "qsf/errors.hpp"

namespace qsf {

using Complex = std::complex<double>;

struct Tolerance {
  double eps_rel = 1e-13;
  int max_terms = 5000;
  int consecutive_small = 3;

  /// Throws DomainError unless eps_rel > 0, max_terms > 0 and
  /// consecutive_small >= 1.
  void validate() const;
};

class QContext {
 public:
  explicit QContext(double q, Tolerance tol = {});

  double q() const { return q_; }
  /// lambda = 1 - q^2, the scale used by the Bessel functions.
  double lambda() const { return 1.0 - q_ * q_; }
  const Tolerance& tol() const { return tol_; }

  /// Term budget for series whose length grows like 1/(1-q).  Equal to
  /// max_terms for q <= 0.9.
  std::int64_t budget() const;
  std::int64_t budget(std::int64_t base) const;

  /// Same tolerance, base q^2.
  QContext squared() const { return QContext(q_ * q_, tol_); }
  QContext with_base(double base) const { return QContext(base, tol_); }

 private:
  double q_;
  Tolerance tol_;
};

/// Counts successive terms below a threshold; the tail criterion used
/// throughout.
class TailCounter {
 public:
  explicit TailCounter(int needed) : needed_(needed) {}
  bool update(bool small) {
    run_ = small ? run_ + 1 : 0;
    return run_ >= needed_;
  }

 private:
  int needed_;
  int run_ = 0;
};

/// Neumaier compensated complex accumulator.
class CompensatedSum {
 public:
  void add(Complex x) {
    add_part(re_, cre_, x.real());
    add_part(im_, cim_, x.imag());
  }
  Complex value() const { return {re_ + cre_, im_ + cim_}; }

 private:
  static void add_part(double& s, double& c, double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double re_ = 0, im_ = 0, cre_ = 0, cim_ = 0;
};

/// (a;q)_n for n >= 0.
Complex qpochhammer_n(Complex a, double q, int n);

/// (a;q)_inf.  Converged when |a q^n| < DBL_EPSILON (1-q) for
/// consecutive_small successive n.
Complex qpochhammer_inf(Complex a, const QContext& ctx);

/// (a;q)_inf / (b;q)_inf evaluated factor by factor.  PoleError when a
/// denominator factor vanishes.
Complex qpochhammer_ratio(Complex a, Complex b, const QContext& ctx);

/// log|(a;q)_inf|, finite unless a factor vanishes.
double log_abs_qpochhammer_inf(Complex a, const QContext& ctx);

/// Gamma_q(nu) = (q;q)_inf/(q^nu;q)_inf (1-q)^(1-nu).  PoleError at
/// nu = 0, -1, -2, ...
double qgamma(double nu, const QContext& ctx);

/// 1/Gamma_q(nu), zero at the poles.
double qgamma_reciprocal(double nu, const QContext& ctx);

/// B_q(a,b) = Gamma_q(a) Gamma_q(b) / Gamma_q(a+b).
double qbeta(double a, double b, const QContext& ctx);

/// e_q(u) = 1/(u;q)_inf.  PoleError at u = q^-k.
Complex eq_exp(Complex u, const QContext& ctx);

/// Taylor series sum u^n/(q;q)_n, |u| < 1.  Kept as an independent check of
/// eq_exp; RadiusError for |u| >= 1.
Complex eq_exp_series(Complex u, const QContext& ctx);

/// E_q(u) = (-u;q)_inf.
Complex Eq_exp(Complex u, const QContext& ctx);

/// Taylor series sum q^(n(n-1)/2) u^n/(q;q)_n.
Complex Eq_exp_series(Complex u, const QContext& ctx);

struct QTrig {
  Complex cos_q;  ///< (e_q(iu) + e_q(-iu))/2
  Complex sin_q;  ///< (e_q(iu) - e_q(-iu))/(2i)
  Complex Cos_q;  ///< (E_q(iu) + E_q(-iu))/2
  Complex Sin_q;  ///< (E_q(iu) - E_q(-iu))/(2i)
};

QTrig qtrig(Complex u, const QContext& ctx);

/// Even/odd Taylor series of the four functions above (cos_q, sin_q need
/// |u| < 1).
QTrig qtrig_series(Complex u, const QContext& ctx);

/// 0Phi1(u) = sum q^(n(n-1)) u^n / (q;q)_n.
Complex phi01(Complex u, const QContext& ctx);

/// The 0Phi3 series of the second-kind Bessel function,
/// sum (-1)^n q^(4n(nu+n)) lambda^(2n) x^(2n) / ((q^2;q^2)_n (q^(2nu+2);q^2)_n 2^(2n)),
/// lambda = 1 - q^2.
Complex phi03(double nu, Complex x, const QContext& ctx);

/// 2Phi1(a,b;c;base,u) = sum (a;base)_n (b;base)_n / ((base;base)_n (c;base)_n) u^n,
/// |u| <= 1.  On |u| = 1 the series converges only if its terms decay;
/// TailNotConverged otherwise.  Terminates when a or b is base^-k.
Complex phi21(Complex a, Complex b, Complex c, double base, Complex u,
              const QContext& ctx);

/// Same series, also returning how many terms were summed.
Complex phi21(Complex a, Complex b, Complex c, double base, Complex u,
              const QContext& ctx, int* terms);

/// Principal-branch x^p with x^p = 0 for x = 0, p > 0.
Complex cpow(Complex x, double p);

}  // namespace qsf
