#pragma once

// Command implementations behind qsf_cli.  Each writes its table to `out`,
// diagnostics and summaries to `err`, and returns the process exit code.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qsf/qbessel.hpp"
#include "qsf/representations.hpp"

namespace qsf::cli {

enum class Command { Eval, Table, Verify, Limits };
enum class Format { Csv, Json };

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
  Command command = Command::Eval;
  std::vector<BesselKind> funcs;
  std::vector<RepresentationId> reps;
  std::vector<double> q_list, nu_list, s_list;  // empty: command default
  Format format = Format::Csv;
  double tol = kRepresentationThreshold;
  std::optional<int> max_terms;
};

/// DomainError on an empty required list or q outside (0,1).
void validate(const RunConfig& cfg);

int run_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_table(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_limits(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches; usage errors give kExitUsage.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qsf::cli
