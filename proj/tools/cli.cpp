#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsf/errors.hpp"
#include "qsf/qbinomial.hpp"

namespace qsf::cli {
namespace {

using nlohmann::json;

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

json jnum(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) {
    if (c == '"') o += '"';
    o += c;
  }
  return o + "\"";
}

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

QContext make_ctx(const RunConfig& cfg, double q) {
  Tolerance tol;
  if (cfg.max_terms) tol.max_terms = *cfg.max_terms;
  return QContext(q, tol);
}

bool is_k(BesselKind k) { return k == BesselKind::K1 || k == BesselKind::K2; }

// Series length behind an evaluation; for K the longer of the two I series.
int term_count(BesselKind kind, double nu, Complex s, const QContext& ctx) {
  auto terms = [&](BesselKind k, double n) {
    BesselSeriesInfo info;
    bessel_series(k, n, s, ctx, &info);
    return info.terms;
  };
  if (!is_k(kind)) return terms(kind, nu);
  const bool inside = kind == BesselKind::K1 && std::abs(s) < first_kind_radius(ctx);
  const BesselKind base = inside ? BesselKind::I1 : BesselKind::I2;
  return std::max(terms(base, nu), terms(base, -nu));
}

struct EvalRow {
  BesselKind func;
  double q, nu, s;
  Complex value{std::nan(""), std::nan("")};
  int terms = 0;
  std::string notes;
};

EvalRow eval_point(const RunConfig& cfg, BesselKind kind, double q, double nu, double s) {
  EvalRow r{kind, q, nu, s, {std::nan(""), std::nan("")}, 0, ""};
  try {
    const QContext ctx = make_ctx(cfg, q);
    r.value = bessel_eval(kind, {nu, s, ctx});
    r.terms = term_count(kind, nu, s, ctx);
  } catch (const std::exception& e) {
    r.notes = error_kind(e) + ": " + e.what();
  }
  return r;
}

void emit_eval(const std::vector<EvalRow>& rows, Format f, std::ostream& out) {
  if (f == Format::Json) {
    json a = json::array();
    for (const auto& r : rows)
      a.push_back({{"func", to_string(r.func)}, {"q", r.q}, {"nu", r.nu}, {"s", r.s},
                   {"value_re", jnum(r.value.real())}, {"value_im", jnum(r.value.imag())},
                   {"terms", r.terms}, {"notes", r.notes}});
    out << a.dump(2) << "\n";
    return;
  }
  out << "func,q,nu,s,value_re,value_im,terms,notes\n";
  for (const auto& r : rows)
    out << to_string(r.func) << ',' << num(r.q) << ',' << num(r.nu) << ',' << num(r.s) << ','
        << num(r.value.real()) << ',' << num(r.value.imag()) << ',' << r.terms << ',' << csv_field(r.notes) << '\n';
}

int eval_grid(const RunConfig& cfg, const std::vector<BesselKind>& funcs, const std::vector<double>& qs,
              const std::vector<double>& nus, const std::vector<double>& ss, std::ostream& out) {
  std::vector<EvalRow> rows;
  for (BesselKind k : funcs)
    for (double q : qs)
      for (double nu : nus)
        for (double s : ss) rows.push_back(eval_point(cfg, k, q, nu, s));
  emit_eval(rows, cfg.format, out);
  return kExitPass;
}

const std::vector<double> kDefaultQ = {0.3, 0.5, 0.7, 0.9};
const std::vector<double> kDefaultNu = {0.25, 0.75, 1.5, 2.5};
const std::vector<double> kDefaultKs = {0.5, 1.0, 2.0, 5.0};
const std::vector<double> kDefaultFirstKindFractions = {0.2, 0.5, 0.8};

bool k_type(RepresentationId id) { return is_k(info(id).target); }

std::vector<double> default_s(RepresentationId id, double q) {
  if (k_type(id)) return kDefaultKs;
  std::vector<double> s;
  for (double f : kDefaultFirstKindFractions) s.push_back(f / (1 - q * q));
  return s;
}

bool satisfies(RepresentationId id, double nu, double s, const QContext& ctx) {
  try {
    check_constraints(id, nu, s, ctx);
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

void emit_records(const std::vector<VerificationRecord>& recs, Format f, std::ostream& out, std::ostream& err) {
  // worst residual per representation, NaN counts as worst
  std::vector<std::pair<RepresentationId, std::pair<double, int>>> summary;
  for (const auto& r : recs) {
    if (summary.empty() || summary.back().first != r.rep) summary.push_back({r.rep, {0.0, 0}});
    auto& [worst, fails] = summary.back().second;
    if (std::isnan(r.rel_residual))
      worst = r.rel_residual;
    else if (!std::isnan(worst))
      worst = std::max(worst, r.rel_residual);
    fails += !r.pass;
  }
  if (f == Format::Json) {
    json a = json::array();
    for (const auto& r : recs)
      a.push_back({{"rep", to_string(r.rep)}, {"q", r.q}, {"nu", r.nu}, {"s", r.s},
                   {"lhs_re", jnum(r.lhs.real())}, {"lhs_im", jnum(r.lhs.imag())},
                   {"rhs_re", jnum(r.rhs.real())}, {"rhs_im", jnum(r.rhs.imag())},
                   {"rel_residual", jnum(r.rel_residual)}, {"pass", r.pass}, {"notes", r.notes}});
    json s = json::array();
    for (const auto& [id, v] : summary)
      s.push_back({{"rep", to_string(id)}, {"max_rel_residual", jnum(v.first)}, {"failures", v.second}});
    out << json{{"records", a}, {"summary", s}}.dump(2) << "\n";
  } else {
    out << "rep,q,nu,s,lhs_re,lhs_im,rhs_re,rhs_im,rel_residual,pass,notes\n";
    for (const auto& r : recs)
      out << to_string(r.rep) << ',' << num(r.q) << ',' << num(r.nu) << ',' << num(r.s) << ',' << num(r.lhs.real())
          << ',' << num(r.lhs.imag()) << ',' << num(r.rhs.real()) << ',' << num(r.rhs.imag()) << ','
          << num(r.rel_residual) << ',' << (r.pass ? "true" : "false") << ',' << csv_field(r.notes) << '\n';
  }
  for (const auto& [id, v] : summary)
    err << "summary " << to_string(id) << " max_rel_residual=" << num(v.first) << " failures=" << v.second << "\n";
}

struct LimitSeries {
  std::string study, name;
  double nu, s;
  std::vector<LimitPoint> points;
  bool check_final;  // final error must be below 5%
};

bool strictly_decreasing(const std::vector<LimitPoint>& pts) {
  for (size_t i = 0; i < pts.size(); ++i) {
    if (std::isnan(pts[i].error)) return false;
    if (i > 0 && !(pts[i].error < pts[i - 1].error)) return false;
  }
  return !pts.empty();
}

std::vector<LimitPoint> function_limit(BesselKind kind, double nu, double s, const std::vector<int>& ks) {
  const ClassicalKind ck = is_k(kind) ? ClassicalKind::K : ClassicalKind::I;
  const double ref = classical_oracle(ck, nu, s);
  std::vector<LimitPoint> pts;
  for (int k : ks) {
    const double q = 1 - std::ldexp(1.0, -k);
    LimitPoint p{k, q, std::nan(""), ref, std::nan(""), ""};
    try {
      p.value = bessel_eval(kind, {nu, s, QContext(q)}).real();
      p.error = std::abs(p.value - ref);
    } catch (const std::exception& e) {
      p.notes = error_kind(e) + ": " + e.what();
    }
    pts.push_back(p);
  }
  return pts;
}

}  // namespace

void validate(const RunConfig& cfg) {
  for (double q : cfg.q_list)
    if (!(q > 0 && q < 1)) throw DomainError("q must lie in (0,1), got " + num(q));
  for (double x : cfg.nu_list)
    if (!std::isfinite(x)) throw DomainError("nu must be finite");
  for (double x : cfg.s_list)
    if (!std::isfinite(x)) throw DomainError("s must be finite");
  if (!(cfg.tol > 0)) throw DomainError("tol must be positive");
  if (cfg.max_terms && *cfg.max_terms <= 0) throw DomainError("max-terms must be positive");
  if (cfg.command == Command::Eval) {
    if (cfg.funcs.empty()) throw DomainError("eval needs --func");
    if (cfg.q_list.empty() || cfg.nu_list.empty() || cfg.s_list.empty())
      throw DomainError("eval needs --q, --nu and --s");
  }
}

int run_eval(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  return eval_grid(cfg, cfg.funcs, sorted(cfg.q_list), sorted(cfg.nu_list), sorted(cfg.s_list), out);
}

int run_table(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  std::vector<BesselKind> funcs = cfg.funcs;
  if (funcs.empty())
    funcs = {BesselKind::J1, BesselKind::J2, BesselKind::I1, BesselKind::I2, BesselKind::K1, BesselKind::K2};
  return eval_grid(cfg, funcs, sorted(cfg.q_list.empty() ? kDefaultQ : cfg.q_list),
                   sorted(cfg.nu_list.empty() ? kDefaultNu : cfg.nu_list),
                   sorted(cfg.s_list.empty() ? kDefaultKs : cfg.s_list), out);
}

int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<RepresentationId> reps = cfg.reps.empty() ? all_representations() : cfg.reps;
  std::sort(reps.begin(), reps.end());
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
  const auto qs = sorted(cfg.q_list.empty() ? kDefaultQ : cfg.q_list);
  const auto nus = sorted(cfg.nu_list.empty() ? kDefaultNu : cfg.nu_list);
  // explicitly requested points must satisfy the constraints; default grid
  // points that do not are skipped
  const bool strict = !cfg.nu_list.empty() || !cfg.s_list.empty();

  std::vector<VerificationRecord> recs;
  for (RepresentationId id : reps)
    for (double q : qs) {
      const QContext ctx = make_ctx(cfg, q);
      for (double nu : nus)
        for (double s : sorted(cfg.s_list.empty() ? default_s(id, q) : cfg.s_list)) {
          if (!satisfies(id, nu, s, ctx)) {
            if (strict) {
              try {
                check_constraints(id, nu, s, ctx);
              } catch (const DomainError& e) {
                err << "error: " << to_string(id) << ": " << e.what() << "\n";
              }
              return kExitUsage;
            }
            continue;
          }
          recs.push_back(verify_captured(id, nu, s, ctx, cfg.tol));
        }
    }
  emit_records(recs, cfg.format, out, err);
  const bool ok = std::all_of(recs.begin(), recs.end(), [](const auto& r) { return r.pass; });
  return ok ? kExitPass : kExitFail;
}

int run_limits(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto nus = sorted(cfg.nu_list.empty() ? std::vector<double>{0.75} : cfg.nu_list);
  const auto ss = sorted(cfg.s_list.empty() ? std::vector<double>{1.0} : cfg.s_list);
  std::vector<LimitSeries> all;

  for (double nu : nus) {
    LimitSeries qs{"Q_nu", "Q_nu", nu, std::nan(""), {}, false};
    for (int k = 4; k <= 10; ++k) {
      const double q = 1 - std::ldexp(1.0, -k);
      LimitPoint p{k, q, std::nan(""), std::numbers::pi / 2, std::nan(""), ""};
      try {
        p.value = Q_nu(nu, QContext(q));
        p.error = std::abs(p.value - p.reference);
      } catch (const std::exception& e) {
        p.notes = error_kind(e) + ": " + e.what();
      }
      qs.points.push_back(p);
    }
    all.push_back(qs);
  }
  const std::vector<int> ks = {3, 4, 5, 6, 7, 8};
  for (double nu : nus)
    for (double s : ss) {
      for (BesselKind kind : {BesselKind::I1, BesselKind::I2, BesselKind::K1, BesselKind::K2})
        all.push_back({"function", to_string(kind), nu, s, function_limit(kind, nu, s, ks), true});
      for (RepresentationId id : {RepresentationId::I1_unit, RepresentationId::K1_line, RepresentationId::K1_half,
                                  RepresentationId::K1_double})
        all.push_back({"representation", to_string(id), nu, s, classical_limit_check(id, nu, s, ks), true});
    }

  bool ok = true;
  json verdicts = json::array();
  for (const auto& ser : all) {
    const bool mono = strictly_decreasing(ser.points);
    const double last = ser.points.empty() ? std::nan("") : ser.points.back().error;
    const double rel_last = last / std::abs(ser.points.back().reference);
    const bool final_ok = !ser.check_final || rel_last < 0.05;
    ok = ok && mono && final_ok;
    verdicts.push_back({{"study", ser.study}, {"name", ser.name}, {"nu", ser.nu}, {"s", jnum(ser.s)},
                        {"decreasing", mono}, {"final_rel_error", jnum(rel_last)}, {"pass", mono && final_ok}});
    err << "verdict " << ser.study << ' ' << ser.name << " nu=" << num(ser.nu) << " s=" << num(ser.s)
        << " decreasing=" << (mono ? "true" : "false") << " final_rel_error=" << num(rel_last)
        << " pass=" << (mono && final_ok ? "true" : "false") << "\n";
  }

  if (cfg.format == Format::Json) {
    json rows = json::array();
    for (const auto& ser : all)
      for (const auto& p : ser.points)
        rows.push_back({{"study", ser.study}, {"name", ser.name}, {"nu", ser.nu}, {"s", jnum(ser.s)}, {"k", p.k},
                        {"q", p.q}, {"value", jnum(p.value)}, {"reference", jnum(p.reference)},
                        {"error", jnum(p.error)}, {"notes", p.notes}});
    out << json{{"points", rows}, {"verdicts", verdicts}}.dump(2) << "\n";
  } else {
    out << "study,name,nu,s,k,q,value,reference,error,notes\n";
    for (const auto& ser : all)
      for (const auto& p : ser.points)
        out << ser.study << ',' << ser.name << ',' << num(ser.nu) << ',' << num(ser.s) << ',' << p.k << ','
            << num(p.q) << ',' << num(p.value) << ',' << num(p.reference) << ',' << num(p.error) << ','
            << csv_field(p.notes) << '\n';
  }
  return ok ? kExitPass : kExitFail;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"q-Bessel functions, q-integral representations and their verification"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::vector<std::string> funcs, reps;
  std::string format = "csv", out_file;
  std::optional<int> max_terms;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--q", cfg.q_list, "base q, comma separated")->delimiter(',');
    sub->add_option("--nu", cfg.nu_list, "orders, comma separated")->delimiter(',');
    sub->add_option("--s", cfg.s_list, "arguments, comma separated")->delimiter(',');
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--max-terms", max_terms, "series/lattice term budget");
    sub->add_option("--out", out_file, "write the table to FILE");
  };
  auto* eval = app.add_subcommand("eval", "evaluate functions at points");
  auto* table = app.add_subcommand("table", "evaluate functions on a grid (defaults for missing lists)");
  auto* verify = app.add_subcommand("verify", "check integral representations against the series");
  auto* limits = app.add_subcommand("limits", "q -> 1 limit studies");
  for (auto* sub : {eval, table, verify, limits}) common(sub);
  for (auto* sub : {eval, table}) sub->add_option("--func", funcs, "J1,J2,I1,I2,K1,K2")->delimiter(',');
  verify->add_option("--rep", reps, "representation ids, comma separated")->delimiter(',');
  verify->add_option("--tol", cfg.tol, "pass threshold on the relative residual");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (eval->parsed()) cfg.command = Command::Eval;
    if (table->parsed()) cfg.command = Command::Table;
    if (verify->parsed()) cfg.command = Command::Verify;
    if (limits->parsed()) cfg.command = Command::Limits;
    cfg.format = format == "json" ? Format::Json : Format::Csv;
    cfg.max_terms = max_terms;
    for (const auto& f : funcs) cfg.funcs.push_back(bessel_kind_from_string(f));
    for (const auto& r : reps) cfg.reps.push_back(representation_from_string(r));
    validate(cfg);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::ofstream file;
  if (!out_file.empty()) {
    file.open(out_file);
    if (!file) {
      err << "error: cannot open " << out_file << "\n";
      return kExitUsage;
    }
  }
  std::ostream& sink = out_file.empty() ? out : file;
  switch (cfg.command) {
    case Command::Eval: return run_eval(cfg, sink, err);
    case Command::Table: return run_table(cfg, sink, err);
    case Command::Verify: return run_verify(cfg, sink, err);
    case Command::Limits: return run_limits(cfg, sink, err);
  }
  return kExitUsage;
}

}  // namespace qsf::cli
