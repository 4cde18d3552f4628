#pragma once

// Per-model verification suites and classification reports.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gcelab/catalog.hpp"

namespace gcelab::cli {

struct Check {
  std::string id;
  /// The identity or property that is checked.
  std::string identity;
  /// Absent for pass/fail checks without a numeric residual.
  std::optional<double> residual;
  bool pass = false;
  std::string detail;
};

struct ModelReport {
  std::string name;
  std::string kind;
  std::string alpha;
  std::vector<Check> checks;
  bool pass() const;
};

struct SuiteOptions {
  double tol = 1e-9;
  unsigned seed = 0;
  int count = 3;
};

/// Expected local case tag for a catalog kind.
std::string expected_case(const std::string& kind);

ModelReport run_suite(const CatalogEntry& model, const SuiteOptions& options);

/// Reports in the order of `models`, computed concurrently.
std::vector<ModelReport> run_suites(const std::vector<CatalogEntry>& models,
                                    const SuiteOptions& options);

nlohmann::json to_json(const ModelReport& r);

/// Flags, residuals, fitted constant, local case and decomposition data.
nlohmann::json classification_report(const HermitianFrame& F, double tol);

}  // namespace gcelab::cli
