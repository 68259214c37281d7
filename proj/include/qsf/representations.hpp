#pragma once

// Jackson-integral representations of the q-Bessel functions I1, I2, J1, J2,
// K1, K2 and their verification against the series definitions.
//
// Ids without the _scalar suffix are stated for noncommuting z, s (zs = q sz);
// they are evaluated at commuting scalars after normal ordering of the
// oscillatory factor (e.g. E_q(x zs) -> e_q(x z s)).  The _scalar ids are the
// commuting-variable forms and are evaluated literally.

#include <string>
#include <vector>

#include "qsf/jackson.hpp"
#include "qsf/qbessel.hpp"
#include "qsf/qbinomial.hpp"

namespace qsf {

enum class RepresentationId {
  I1_unit,           ///< I1 over [-1,1], kernel (q^2z^2)/(q^(2nu+1)z^2), E_q(lambda zs/2)
  I2_unit,           ///< I2 over [-1,1], kernel (q^(-2nu+1)z^2)/(z^2), 0Phi1(lambda zs/2)
  J1_unit,           ///< J1 over [-1,1], E_q(-i lambda zs/2)
  J2_unit,           ///< J2 over [-1,1], 0Phi1(-i lambda zs/2)
  K1_line,           ///< K1 over the real line, E_q(i lambda zs/2)
  K2_line,           ///< K2 over the real line, 0Phi1(i lambda zs/2)
  K1_half,           ///< K1 over [0,inf), z J_0^(2)(lambda q^(-1/2) zs)
  K2_half,           ///< K2 over [0,inf), z 0Phi3(-;0,0,q^2;q^2,-(lambda/2 q^(3/2) zs)^2)
  K1_double,         ///< K1 as a double integral over [0,inf) x [-1,1]
  I1_unit_scalar,    ///< e_q(lambda zs/2)
  I2_unit_scalar,    ///< E_q(lambda zs/2)
  K1_line_scalar,    ///< e_q(i lambda zs/2)
  K2_line_scalar,    ///< E_q(i lambda zs/2)
  K1_half_scalar,    ///< z J_0^(1)(lambda zs), kernel exponent -2nu+1
  K2_half_scalar,    ///< z J_0^(2)(lambda zs)
  K1_double_scalar,  ///< double integral with Gamma_{q^2}(1/2)^2 constant
  K2_double_scalar,  ///< double integral of K2
};

const std::vector<RepresentationId>& all_representations();
std::string to_string(RepresentationId id);
/// DomainError for an unknown name.
RepresentationId representation_from_string(const std::string& name);

struct RepresentationInfo {
  BesselKind target;
  JacksonDomain domain;  ///< domain of the z integral
  bool double_integral;
  bool noncommuting;
  double nu_min;  ///< representation requires nu > nu_min
  int s_power;    ///< +1: factor (s/2)^nu, -1: (s/2)^-nu
};
RepresentationInfo info(RepresentationId id);

/// z-kernel (gamma = 1 carries the factor z) and, for double integrals, the
/// zeta-kernel; both of base q^2.
struct KernelWeight {
  QBinomialKernel z;
  bool has_zeta = false;
  QBinomialKernel zeta{};
};
KernelWeight kernel_weight(RepresentationId id, double nu, const QContext& ctx);

/// DomainError when nu or s violate the id's constraint.
void check_constraints(RepresentationId id, double nu, double s, const QContext& ctx);

/// Constant in front of the integral, excluding (s/2)^(+-nu).
Complex prefactor(RepresentationId id, double nu, const QContext& ctx);

struct RhsOptions {
  LatticeTruncation trunc{};
  bool zeta_inner = true;  ///< double integrals: zeta sum inside the z sum
};

/// The right-hand side.  Errors: DomainError (constraint), TailNotConverged,
/// PoleError, RadiusError.
Complex rhs_eval(RepresentationId id, double nu, double s, const QContext& ctx, const RhsOptions& opt = {});

struct VerificationRecord {
  RepresentationId rep;
  double q = 0, nu = 0, s = 0;
  Complex lhs, rhs;
  double rel_residual = 0;
  bool pass = false;
  std::string notes;
};

constexpr double kRepresentationThreshold = 1e-9;

/// LHS from bessel_eval, RHS from rhs_eval.  Errors propagate.
VerificationRecord verify(RepresentationId id, double nu, double s, const QContext& ctx,
                          double threshold = kRepresentationThreshold, const RhsOptions& opt = {});
/// Same, but evaluation errors are caught: pass = false, rel_residual = NaN,
/// notes = error kind and message.  Constraint violations still throw.
VerificationRecord verify_captured(RepresentationId id, double nu, double s, const QContext& ctx,
                                   double threshold = kRepresentationThreshold, const RhsOptions& opt = {});

/// Residual of the coefficient proof that justifies the scalar evaluation of a
/// noncommuting id (0 for _scalar ids), to diagonal order N.
double reduction_certificate(RepresentationId id, const QContext& ctx, int N = 12);

/// Integral of the z-kernel times z^r over the id's domain (single-integral ids).
Complex kernel_moment(RepresentationId id, int r, double nu, const QContext& ctx, const LatticeTruncation& trunc = {});

/// (2/(1+q)) Gamma_{q^2}(nu+1/2) Gamma_{q^2}(1/2), the constant of the unit
/// interval I1 representation.
double moment_constant_A(double nu, const QContext& ctx);

/// For the unit-interval ids: largest relative mismatch between the
/// coefficients of s^(nu+2n), n = 0..N, of the series and of the integral,
/// and the size of the odd moments relative to the zeroth.
double coefficient_verify(RepresentationId id, double nu, const QContext& ctx, int N);

/// Residual of the kernel's q-difference equation at z (the z-kernel; the
/// zeta-kernel when zeta is set).
double kernel_diff_residual(RepresentationId id, double z, double nu, const QContext& ctx, bool zeta = false);

struct LimitPoint {
  int k;
  double q;
  double value;
  double reference;
  double error;  ///< |value - reference|, NaN when evaluation failed
  std::string notes;
};

/// Values at q = 1 - 2^-k against the classical I_nu or K_nu.
std::vector<LimitPoint> classical_limit_check(RepresentationId id, double nu, double s, const std::vector<int>& ks);

}  // namespace qsf
