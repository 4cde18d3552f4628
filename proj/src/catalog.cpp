#include "gcelab/catalog.hpp"

#include <complex>
#include <fstream>

#include "gcelab/characteristic.hpp"
#include "gcelab/error.hpp"
#include "gcelab/models.hpp"
#include "gcelab/torsion_structure.hpp"

namespace gcelab {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const json& field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) parse_error(std::string("missing field '") + key + "'");
  return doc.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) parse_error(where + ": expected a number");
  return v.get<double>();
}

Matrix square_matrix(const json& v, int n, const char* key) {
  if (!v.is_array()) parse_error(std::string(key) + ": expected an array");
  // Accept both a flat row-major list and a list of rows.
  std::vector<double> flat;
  for (const json& row : v) {
    if (row.is_array()) {
      for (const json& x : row) flat.push_back(number(x, key));
    } else {
      flat.push_back(number(row, key));
    }
  }
  if (static_cast<int>(flat.size()) != n * n) {
    parse_error(std::string(key) + ": expected " + std::to_string(n * n) + " entries, got " +
                std::to_string(flat.size()));
  }
  Matrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = flat[r * n + c];
  return m;
}

json row_major(const Matrix& m) {
  json out = json::array();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) out.push_back(m(r, c) + 0.0);
  return out;
}

std::string kind_name(SasakianKind k) { return k == SasakianKind::sphere ? "su2" : to_string(k); }

CatalogEntry entry(std::string name, std::string kind, std::string provenance, HermitianFrame F) {
  return CatalogEntry{std::move(name), std::move(kind), std::move(provenance), std::move(F)};
}

void expect(bool ok, const std::string& name, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvariantViolation, "catalog model " + name + ": " + what);
}

void validate(const CatalogEntry& e) {
  const MetricClassification c = classify_metric(e.frame);
  expect(c.integrable.value, e.name, "J not integrable");
  if (e.kind == "flat_kahler") {
    expect(c.kahler.value, e.name, "expected Kahler");
    return;
  }
  expect(c.gce.value, e.name, "expected generalized Calabi-Eckmann");
  const TorsionDecomposition D = decompose_torsion(e.frame);
  const std::string tag = to_string(classify_local(D, e.frame.space()));
  const std::string want = e.kind == "calabi_eckmann" ? "sasakian_product" : e.kind;
  expect(tag == want, e.name, "local case " + tag + ", expected " + want);
}

}  // namespace

HermitianFrame frame_from_json(const json& doc) {
  const json& jd = field(doc, "dim");
  if (!jd.is_number_integer()) parse_error("dim: expected an integer");
  const int n = jd.get<int>();
  if (n < 2 || n % 2 != 0) parse_error("dim must be a positive even integer");
  const Matrix metric = square_matrix(field(doc, "metric"), n, "metric");
  const Matrix J = square_matrix(field(doc, "J"), n, "J");
  std::vector<Bracket> brackets;
  const json& jb = field(doc, "brackets");
  if (!jb.is_array()) parse_error("brackets: expected an array");
  for (const json& b : jb) {
    if (!b.is_array() || b.size() != 4) parse_error("brackets: each entry is [i, j, k, value]");
    int idx[3];
    for (int s = 0; s < 3; ++s) {
      if (!b[s].is_number_integer()) parse_error("brackets: indices must be integers");
      idx[s] = b[s].get<int>();
      if (idx[s] < 1 || idx[s] > n) parse_error("brackets: index out of range 1.." + std::to_string(n));
    }
    brackets.push_back({idx[0] - 1, idx[1] - 1, idx[2] - 1, number(b[3], "brackets")});
  }
  return HermitianFrame(HermitianVectorSpace(metric, J), LieAlgebra(n, brackets));
}

json frame_to_json(const HermitianFrame& F) {
  json doc;
  doc["dim"] = F.dim();
  doc["metric"] = row_major(F.metric());
  doc["J"] = row_major(F.J());
  json br = json::array();
  for (const Bracket& b : F.algebra().brackets()) br.push_back({b.i + 1, b.j + 1, b.k + 1, b.value + 0.0});
  doc["brackets"] = br;
  return doc;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    parse_error(path + ": " + e.what());
  }
}

std::vector<CatalogEntry> catalog_from_json(const json& doc) {
  const json& models = field(doc, "models");
  if (!models.is_array()) parse_error("models: expected an array");
  std::vector<CatalogEntry> out;
  for (const json& m : models) {
    const json& name = field(m, "name");
    if (!name.is_string()) parse_error("name: expected a string");
    std::string kind = m.value("kind", std::string());
    std::string provenance = m.value("provenance", std::string());
    out.push_back(entry(name.get<std::string>(), std::move(kind), std::move(provenance), frame_from_json(m)));
  }
  return out;
}

json catalog_to_json(const std::vector<CatalogEntry>& entries) {
  json models = json::array();
  for (const CatalogEntry& e : entries) {
    json m;
    m["name"] = e.name;
    m["kind"] = e.kind;
    m["provenance"] = e.provenance;
    m.update(frame_to_json(e.frame));
    models.push_back(m);
  }
  return json{{"models", models}};
}

std::vector<CatalogEntry> load_catalog(const std::string& path) {
  return catalog_from_json(read_json_file(path));
}

std::vector<CatalogEntry> build_catalog() {
  const SasakianKind kinds[3] = {SasakianKind::sphere, SasakianKind::nil, SasakianKind::sl2};
  const std::string checked = "; Sasakian axioms of each factor checked to 1e-9";
  std::vector<CatalogEntry> out;
  out.push_back(entry("flat_kahler_c2", "flat_kahler", "standard C^2 on the abelian algebra", flat_kahler(2)));
  out.push_back(entry("flat_kahler_c3", "flat_kahler", "standard C^3 on the abelian algebra", flat_kahler(3)));
  for (SasakianKind k : kinds) {
    const std::string name = k == SasakianKind::sphere ? "hopf" : "hopf_" + kind_name(k);
    out.push_back(entry(name, "vaisman",
                        "Sasakian " + kind_name(k) + " 3-frame times R, J xi = e_4" + checked,
                        hopf_frame(k)));
  }
  for (SasakianKind a : kinds)
    for (SasakianKind b : kinds) {
      out.push_back(entry(kind_name(a) + "x" + kind_name(b), "sasakian_product",
                          "product of the Sasakian " + kind_name(a) + " and " + kind_name(b) +
                              " 3-frames, J xi_1 = xi_2" + checked,
                          sasakian_product(sasakian_model(a), sasakian_model(b))));
    }
  out.push_back(entry("calabi_eckmann_su2xsu2", "calabi_eckmann",
                      "Calabi-Eckmann structure with alpha = 1+1i on su2 x su2" + checked,
                      calabi_eckmann(sasakian_model(SasakianKind::sphere),
                                     sasakian_model(SasakianKind::sphere), {1.0, 1.0})));
  out.push_back(entry("calabi_eckmann_nilxsl2", "calabi_eckmann",
                      "Calabi-Eckmann structure with alpha = -0.75+0.25i on nil x sl2" + checked,
                      calabi_eckmann(sasakian_model(SasakianKind::nil),
                                     sasakian_model(SasakianKind::sl2), {-0.75, 0.25})));
  out.push_back(entry("nil_line_kahler", "sasaki_line_kahler",
                      "Hopf nil frame plus flat C; one eigenspace with zero eigenvalue" + checked,
                      sasaki_line_kahler(SasakianKind::nil)));
  out.push_back(entry("nil5_line", "vaisman",
                      "5-dimensional Heisenberg Sasakian frame times R" + checked,
                      sasakian_product(heisenberg_sasakian(2), abelian_line())));
  out.push_back(entry("nil5_mixed_line", "pseudo_vaisman_mixed",
                      "Heisenberg frame [e2,e3] = 2 e1, [e4,e5] = -e1 times R; eigenvalues 2 and -1",
                      mixed_heisenberg_line()));
  for (const CatalogEntry& e : out) validate(e);
  return out;
}

const CatalogEntry& find_model(const std::vector<CatalogEntry>& catalog, const std::string& name) {
  for (const CatalogEntry& e : catalog)
    if (e.name == name) return e;
  throw Error(ErrorCode::InvalidParameter, "unknown model '" + name + "'");
}

}  // namespace gcelab
