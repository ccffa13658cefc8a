#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pdem/specfun.hpp"

namespace pdem::acceptance {

struct Options {
  std::string fixture_path;
};

struct Hyp2F1Case {
  specfun::Hyp2F1Params params;
  specfun::cplx expected;
};

/// Reads the whitespace-separated reference table; '#' lines are skipped.
/// Throws std::runtime_error when the file is missing or a row is malformed.
std::vector<Hyp2F1Case> load_hyp2f1_cases(const std::string& path);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // deterministic: measured values only, no timings
};

CriterionResult bound_regression(const Options& opts);
CriterionResult hermitian_unitarity(const Options& opts);
CriterionResult reciprocity(const Options& opts);
CriterionResult anomalous_reflection(const Options& opts);
CriterionResult transmission_dip(const Options& opts);
CriterionResult no_spectral_singularity(const Options& opts);
CriterionResult pseudo_unitarity_failure(const Options& opts);
CriterionResult switching_point(const Options& opts);
CriterionResult oracle_equivalence(const Options& opts);
CriterionResult special_function_fixture(const Options& opts);

/// All ten checks in order.
std::vector<CriterionResult> run_all(const Options& opts);

/// One line per criterion: "[PASS] 3 name: detail".
void print_report(std::ostream& out, const std::vector<CriterionResult>& results);

}  // namespace pdem::acceptance
