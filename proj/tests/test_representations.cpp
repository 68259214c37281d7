#include <cmath>

#include "doctest.h"
#include "qsf/errors.hpp"
#include "qsf/representations.hpp"

using namespace qsf;
using R = RepresentationId;

namespace {
double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
}  // namespace

TEST_CASE("names round trip") {
  CHECK(all_representations().size() == 17);
  for (R id : all_representations()) CHECK(representation_from_string(to_string(id)) == id);
  CHECK_THROWS_AS(representation_from_string("nope"), DomainError);
}

TEST_CASE("unit interval I1 and J1 reproduce the series") {
  for (double q : {0.3, 0.5, 0.9})
    for (double nu : {0.25, 0.75, 2.5})
      for (double f : {0.2, 0.8}) {
        const QContext ctx(q);
        const double s = f * first_kind_radius(ctx);
        for (R id : {R::I1_unit, R::I1_unit_scalar, R::J1_unit}) {
          const auto r = verify(id, nu, s, ctx);
          CHECK_MESSAGE(r.pass, to_string(id), " q=", q, " nu=", nu, " rel=", r.rel_residual);
        }
      }
}

TEST_CASE("scalar and normal-ordered I1 forms coincide") {
  const QContext ctx(0.5);
  CHECK(rel(rhs_eval(R::I1_unit, 0.75, 0.5, ctx), rhs_eval(R::I1_unit_scalar, 0.75, 0.5, ctx)) < 1e-14);
}

TEST_CASE("constraints") {
  const QContext ctx(0.5);
  CHECK_THROWS_AS(check_constraints(R::K1_line, 0.4, 1.0, ctx), DomainError);
  CHECK_THROWS_AS(check_constraints(R::K2_line, 1.2, 1.0, ctx), DomainError);
  CHECK_THROWS_AS(check_constraints(R::I1_unit, 0.75, -1.0, ctx), DomainError);
  CHECK_THROWS_AS(check_constraints(R::I1_unit, 0.75, 1.5, ctx), DomainError);
  CHECK_NOTHROW(check_constraints(R::K1_half, 0.75, 10.0, ctx));
  CHECK_THROWS_AS(verify_captured(R::K1_line, 0.4, 1.0, ctx), DomainError);
}

TEST_CASE("reduction certificates") {
  for (double q : {0.3, 0.5, 0.9}) {
    const QContext ctx(q);
    for (R id : all_representations()) {
      const double c = reduction_certificate(id, ctx, 12);
      CHECK_MESSAGE(c < 1e-13, to_string(id), " q=", q, " c=", c);
      if (!info(id).noncommuting) CHECK(c == 0.0);
    }
  }
}

TEST_CASE("kernel difference equations") {
  for (R id : all_representations()) {
    const auto in = info(id);
    for (auto [nu, q, z] : {std::tuple{0.75, 0.5, 0.3}, std::tuple{2.0, 0.7, 1.4}}) {
      if (!(nu > in.nu_min)) continue;
      const QContext ctx(q);
      CHECK_MESSAGE(kernel_diff_residual(id, z, nu, ctx) < 1e-12, to_string(id));
      if (kernel_weight(id, nu, ctx).has_zeta) CHECK(kernel_diff_residual(id, z, nu, ctx, true) < 1e-12);
    }
  }
  CHECK_THROWS_AS(kernel_diff_residual(R::I1_unit, 0.3, 0.75, QContext(0.5), true), DomainError);
}

TEST_CASE("unit interval moments") {
  for (double q : {0.3, 0.6, 0.9}) {
    const QContext ctx(q);
    CHECK(coefficient_verify(R::I1_unit, 1.5, ctx, 8) < 1e-10);
    CHECK(coefficient_verify(R::I1_unit, 0.25, ctx, 8) < 1e-10);
    const Complex m0 = kernel_moment(R::I1_unit, 0, 0.75, ctx);
    CHECK(rel(qgamma(1.75, ctx.squared()) * m0, moment_constant_A(0.75, ctx)) < 1e-11);
    CHECK(std::abs(kernel_moment(R::I1_unit, 3, 0.75, ctx)) < 1e-14);
  }
  CHECK_THROWS_AS(kernel_moment(R::K1_double, 0, 0.75, QContext(0.5)), DomainError);
  CHECK_THROWS_AS(coefficient_verify(R::K1_line, 0.75, QContext(0.5), 4), DomainError);
}

TEST_CASE("K1 forms agree with one another") {
  for (double q : {0.5, 0.7, 0.9})
    for (double nu : {0.75, 1.5})
      for (double s : {0.5, 2.0}) {
        const QContext ctx(q);
        const Complex line = rhs_eval(R::K1_line, nu, s, ctx);
        CHECK(rel(rhs_eval(R::K1_line_scalar, nu, s, ctx), line) < 1e-10);
        CHECK(rel(rhs_eval(R::K1_half, nu, s, ctx), line) < 1e-10);
        CHECK(rel(rhs_eval(R::K1_double_scalar, nu, s, ctx), line) < 1e-10);
      }
  // and K1 itself near q = 1
  CHECK(verify(R::K1_line, 0.75, 1.0, QContext(0.9)).pass);
}

TEST_CASE("double integral order") {
  const QContext ctx(0.5);
  RhsOptions swapped;
  swapped.zeta_inner = false;
  for (double s : {0.5, 2.0})
    CHECK(rel(rhs_eval(R::K1_double_scalar, 1.5, s, ctx, swapped), rhs_eval(R::K1_double_scalar, 1.5, s, ctx)) < 1e-10);
}

TEST_CASE("divergent forms report their failure") {
  const QContext ctx(0.5);
  CHECK_THROWS_AS(rhs_eval(R::K2_line, 2.5, 1.0, ctx), TailNotConverged);
  CHECK_THROWS_AS(rhs_eval(R::K1_double, 0.75, 1.0, ctx), TailNotConverged);
  const auto r = verify_captured(R::K2_half, 2.5, 1.0, ctx);
  CHECK_FALSE(r.pass);
  CHECK(std::isnan(r.rel_residual));
  CHECK(r.notes.rfind("TailNotConverged", 0) == 0);
}

TEST_CASE("classical limit of the unit interval form") {
  const auto pts = classical_limit_check(R::I1_unit, 0.75, 1.0, {3, 4, 5, 6});
  REQUIRE(pts.size() == 4);
  for (size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].error < pts[i - 1].error);
  CHECK(pts.back().error < 1e-3);
  CHECK_THROWS_AS(classical_limit_check(R::K2_line, 0.75, 1.0, {3}), DomainError);
}

TEST_CASE("half-line zeroth moment") {
  for (auto [nu, q] : {std::pair{1.0, 0.5}, std::pair{0.75, 0.3}, std::pair{2.5, 0.9}}) {
    const QContext ctx(q);
    const Complex m = kernel_moment(R::K1_half, 0, nu, ctx);
    CHECK(rel(m, -(1 - q) / (1 - std::pow(q, -2 * nu))) < 1e-10);
  }
}
