#pragma once

// JSON frame documents and the model catalog.
//
// Frame: {"dim": n, "metric": [n*n row-major], "J": [n*n row-major],
//         "brackets": [[i, j, k, value], ...]} with 1-based indices,
//         meaning [e_i, e_j] has e_k component `value`.
// Catalog: {"models": [{"name", "kind", "provenance", <frame fields>}, ...]}.

#include <string>
#include <vector>

#include "json.hpp"

#include "gcelab/lie_frame.hpp"

namespace gcelab {

/// Throws Error(ParseError) for malformed documents; frame invariants
/// (metric, J, Jacobi) raise Error(InvariantViolation).
HermitianFrame frame_from_json(const nlohmann::json& doc);
nlohmann::json frame_to_json(const HermitianFrame& F);

/// Reads a file; Error(ParseError) if it cannot be opened or parsed.
nlohmann::json read_json_file(const std::string& path);

struct CatalogEntry {
  std::string name;
  std::string kind;
  std::string provenance;
  HermitianFrame frame;
};

std::vector<CatalogEntry> catalog_from_json(const nlohmann::json& doc);
nlohmann::json catalog_to_json(const std::vector<CatalogEntry>& entries);
std::vector<CatalogEntry> load_catalog(const std::string& path);

/// Constructs and validates the shipped models (Sasakian axioms of every
/// factor, integrability and the expected class of each entry).
std::vector<CatalogEntry> build_catalog();

/// Throws Error(InvalidParameter) for unknown names.
const CatalogEntry& find_model(const std::vector<CatalogEntry>& catalog, const std::string& name);

}  // namespace gcelab
