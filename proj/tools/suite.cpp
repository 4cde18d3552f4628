#include "suite.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>

#include "gcelab/characteristic.hpp"
#include "gcelab/error.hpp"
#include "gcelab/torsion_structure.hpp"

namespace gcelab::cli {

using nlohmann::json;

namespace {

class Checks {
 public:
  Checks(double tol, std::vector<Check>& out) : tol_(tol), out_(out) {}

  void residual(std::string id, std::string identity, double r, std::string detail = {}) {
    out_.push_back({std::move(id), std::move(identity), r, std::isfinite(r) && r <= tol_,
                    std::move(detail)});
  }

  void flag(std::string id, std::string identity, bool ok, std::string detail = {}) {
    out_.push_back({std::move(id), std::move(identity), std::nullopt, ok, std::move(detail)});
  }

 private:
  double tol_;
  std::vector<Check>& out_;
};

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double d_squared_residual(const HermitianFrame& F, std::mt19937& rng, int count) {
  double worst = 0.0;
  for (int k = 0; k + 2 <= F.dim(); ++k)
    for (int s = 0; s < count; ++s) {
      const KForm a = random_form(F.dim(), k, rng);
      worst = std::max(worst, exterior_derivative(exterior_derivative(a, F), F).max_abs());
    }
  return worst;
}

double adjointness_residual(const HermitianFrame& F, std::mt19937& rng, int count) {
  const HermitianVectorSpace& V = F.space();
  double worst = 0.0;
  for (int k = 0; k + 1 <= F.dim(); ++k)
    for (int s = 0; s < count; ++s) {
      const KForm a = random_form(F.dim(), k, rng);
      const KForm b = random_form(F.dim(), k + 1, rng);
      const double lhs = inner_product(exterior_derivative(a, F), b, V);
      const double rhs = inner_product(a, codifferential(b, F), V);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  return worst;
}

// Least-squares distance of `a` from span{u, v}.
double span_residual(const KForm& a, const KForm& u, const KForm& v) {
  Matrix S(a.components().size(), 2);
  S.col(0) = u.components();
  S.col(1) = v.components();
  const Vector coef = S.colPivHouseholderQr().solve(a.components());
  return (S * coef - a.components()).cwiseAbs().maxCoeff();
}

void modification_checks(const HermitianFrame& F, const SuiteOptions& o, std::mt19937& rng,
                         Checks& c) {
  const TorsionDecomposition D = decompose_torsion(F, o.tol);
  const ModificationBasis B = modification_basis(D);
  const Connection nabla = characteristic_connection(F, o.tol);
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  std::uniform_real_distribution<double> entry(-1.5, 1.5);
  double nij = 0.0, par = 0.0, lp = 0.0, lee = 0.0, tensor = 0.0, round_trip = 0.0;
  double c_min = INFINITY;
  bool gce = true;
  for (int s = 0; s < o.count; ++s) {
    std::vector<double> scales(B.H.size());
    for (double& x : scales) x = scale(rng);
    Matrix R(2, 2);
    do {
      for (int i = 0; i < 4; ++i) R(i / 2, i % 2) = entry(rng);
    } while (std::abs(R.determinant()) < 0.25);
    const Modification M = modify_structure(F, B, scales, R);
    const MetricClassification mc = classify_metric(M.frame, o.tol);
    nij = std::max(nij, mc.integrable.residual);
    par = std::max(par, mc.parallel_torsion.residual);
    lp = std::max(lp, mc.lp.residual);
    gce = gce && mc.gce.value;
    if (mc.lp_constant) c_min = std::min(c_min, *mc.lp_constant);
    const auto [e, f] = lee_plane_coframe(M.basis);
    lee = std::max(lee, span_residual(lee_form(M.frame), e, f));
    const Connection nabla_prime = characteristic_connection(M.frame, o.tol);
    const Tensor A = modification_tensor(F, nabla, M.frame.metric(), M.frame.J(), o.tol);
    tensor = std::max(tensor, (A - connection_difference(nabla_prime, nabla, M.frame.metric())).max_abs());

    std::vector<double> inverse(scales.size());
    for (std::size_t i = 0; i < scales.size(); ++i) inverse[i] = 1.0 / scales[i];
    const Modification back = modify_structure(M.frame, M.basis, inverse, R.inverse());
    round_trip = std::max({round_trip, (back.frame.metric() - F.metric()).cwiseAbs().maxCoeff(),
                           (back.frame.J() - F.J()).cwiseAbs().maxCoeff()});
  }
  c.residual("modification.integrable", "N' = 0", nij);
  c.residual("modification.parallel_torsion", "nabla' T' = 0", par);
  c.residual("modification.lee_potential", "d omega' = c'(d theta' ^ J theta' - theta' ^ d J theta')", lp);
  c.flag("modification.lp_constant_positive", "c' > 0", c_min > 0.0, "min c' = " + format_number(c_min));
  c.flag("modification.gce", "modified structure is GCE", gce);
  c.residual("modification.lee_span", "theta' in span of the Lee plane coframe", lee);
  c.residual("modification.tensor", "closed-form A = nabla' - nabla", tensor);
  c.residual("modification.round_trip", "(a, R) then (1/a, R^-1) is the identity", round_trip);
}

}  // namespace

bool ModelReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string expected_case(const std::string& kind) {
  if (kind == "calabi_eckmann") return "sasakian_product";
  if (kind == "flat_kahler") return "not_applicable";
  return kind;
}

ModelReport run_suite(const CatalogEntry& model, const SuiteOptions& o) {
  ModelReport r;
  r.name = model.name;
  r.kind = model.kind;
  const HermitianFrame& F = model.frame;
  const HermitianVectorSpace& V = F.space();
  std::mt19937 rng(o.seed);
  Checks c(o.tol, r.checks);

  c.residual("jacobi", "[x,[y,z]] + cyclic = 0", F.algebra().jacobi_residual());
  c.residual("d_squared", "d d a = 0", d_squared_residual(F, rng, o.count));
  static const char* hodge_ids[7][2] = {
      {"hodge.volume", "vol = omega^m/m!"},
      {"hodge.one_form", "*a = J.a ^ omega^(m-1)/(m-1)!"},
      {"hodge.kahler_powers", "*(omega^k/k!) = omega^(m-k)/(m-k)!"},
      {"hodge.primitive_11", "*a = -a ^ omega^(m-2)/(m-2)! on primitive (1,1)"},
      {"hodge.type_20", "*a = a ^ omega^(m-2)/(m-2)! on (2,0)+(0,2)"},
      {"hodge.one_form_omega", "*(a ^ omega) = J.a ^ omega^(m-2)/(m-2)!"},
      {"hodge.primitive_21", "*a = -(J a) ^ omega^(m-3)/(m-3)! on primitive (2,1)+(1,2)"}};
  const auto hodge = hodge_identity_residuals(V, rng, o.count);
  for (int i = 0; i < 7; ++i) c.residual(hodge_ids[i][0], hodge_ids[i][1], hodge[i]);
  if (F.algebra().unimodular()) {
    c.residual("adjointness", "<da, b> = <a, delta b>", adjointness_residual(F, rng, o.count));
  }

  const MetricClassification mc = classify_metric(F, o.tol);
  c.residual("integrable", "N = 0", mc.integrable.residual);
  if (!mc.integrable.value) return r;

  c.residual("lee_form_routes", "theta = -1/(2(m-1)) J.(delta omega)",
             (lee_form(F) - lee_form_from_codifferential(F)).max_abs());
  const Connection nabla = characteristic_connection(F, o.tol);
  const KForm T = characteristic_torsion(F);
  c.residual("characteristic.metric", "nabla g = 0", metric_compatibility_residual(nabla, F.metric()));
  c.residual("characteristic.complex", "nabla J = 0", endomorphism_derivative_residual(F.J(), nabla));
  c.residual("characteristic.torsion", "torsion of nabla = -(J d omega)",
             (lowered_torsion(nabla, F.metric(), F.algebra()) - Tensor::from_form(T)).max_abs());
  c.residual("parallel_torsion", "nabla T = 0", mc.parallel_torsion.residual);
  const KForm Omega = bianchi_four_form(T, V);
  c.residual("dT", "dT = 2 Omega", (exterior_derivative(T, F) - 2.0 * Omega).max_abs());
  if (mc.parallel_torsion.value) {
    c.residual("bianchi", "R(X,Y)Z + cyclic = Omega",
               (bianchi_sum(nabla, F) - Tensor::from_form(Omega)).max_abs());
    c.residual("codifferential.T", "delta T = 0", codifferential(T, F).max_abs());
    c.residual("codifferential.nabla_T", "delta^nabla T = 0", nabla_codifferential(T, nabla, F).max_abs());
  }
  double defect = 0.0;
  for (int k : {2, 3})
    for (int s = 0; s < o.count; ++s) {
      const KForm a = random_form(F.dim(), k, rng);
      const KForm lhs = nabla_codifferential(a, nabla, F) - codifferential(a, F);
      defect = std::max(defect, (lhs - codifferential_defect(a, T, V)).max_abs());
    }
  c.residual("codifferential.defect", "delta^nabla a - delta a = -sum_{i<j} (e_ij _| T) ^ (e_ij _| a)",
             defect);

  if (model.kind == "flat_kahler") {
    c.residual("kahler", "d omega = 0", mc.kahler.residual);
  } else if (!model.kind.empty()) {
    c.residual("lee_potential", "d omega = c(d theta ^ J theta - theta ^ d J theta)", mc.lp.residual,
               mc.lp_constant ? "c = " + format_number(*mc.lp_constant) : "no c");
    c.flag("lp_constant_positive", "c > 0", mc.lp_constant && *mc.lp_constant > 0.0);
    c.flag("gce", "theta != 0, LP and nabla T = 0", mc.gce.value);
    if (model.kind == "vaisman") {
      c.residual("vaisman", "l.c.K. with nabla^g theta = 0", mc.vaisman.residual);
    }
  }

  std::string tag = "not_applicable";
  try {
    const TorsionDecomposition D = decompose_torsion(F, o.tol);
    tag = to_string(classify_local(D, V, o.tol));
    for (const auto& [key, value] : D.residuals) {
      c.residual("decomposition." + key, "torsion decomposition: " + key, value);
    }
    if (model.kind == "sasakian_product" || model.kind == "calabi_eckmann") {
      modification_checks(F, o, rng, c);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoLeeDirection && e.code() != ErrorCode::PreconditionViolation) throw;
  }
  if (!model.kind.empty()) {
    const std::string want = expected_case(model.kind);
    c.flag("case_tag", "local case = " + want, tag == want, tag);
  }
  return r;
}

std::vector<ModelReport> run_suites(const std::vector<CatalogEntry>& models, const SuiteOptions& o) {
  std::vector<std::future<ModelReport>> jobs;
  jobs.reserve(models.size());
  for (const CatalogEntry& m : models) {
    jobs.push_back(std::async(std::launch::async, [&m, &o] { return run_suite(m, o); }));
  }
  std::vector<ModelReport> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

json to_json(const ModelReport& r) {
  json checks = json::array();
  for (const Check& c : r.checks) {
    json j{{"id", c.id}, {"identity", c.identity}, {"pass", c.pass}};
    j["residual"] = c.residual ? json(*c.residual) : json(nullptr);
    if (!c.detail.empty()) j["detail"] = c.detail;
    checks.push_back(j);
  }
  json out{{"name", r.name}, {"kind", r.kind}};
  if (!r.alpha.empty()) out["alpha"] = r.alpha;
  out["pass"] = r.pass();
  out["checks"] = checks;
  return out;
}

json classification_report(const HermitianFrame& F, double tol) {
  const MetricClassification mc = classify_metric(F, tol);
  auto flag = [](const Flag& f) { return json{{"value", f.value}, {"residual", f.residual}}; };
  json doc;
  doc["dim"] = F.dim();
  doc["tolerance"] = tol;
  const KForm theta = lee_form(F);
  std::vector<double> components;
  for (double v : theta.components()) components.push_back(v + 0.0);
  doc["theta"] = components;
  doc["theta_norm"] = mc.theta_norm;
  doc["flags"] = {{"integrable", flag(mc.integrable)},
                  {"kahler", flag(mc.kahler)},
                  {"lck", flag(mc.lck)},
                  {"lp", flag(mc.lp)},
                  {"vaisman", flag(mc.vaisman)},
                  {"parallel_torsion", flag(mc.parallel_torsion)},
                  {"gce", flag(mc.gce)}};
  doc["lp_vacuous"] = mc.lp_vacuous;
  doc["lp_constant"] = mc.lp_constant ? json(*mc.lp_constant) : json(nullptr);
  std::string tag = "not_applicable";
  try {
    const TorsionDecomposition D = decompose_torsion(F, tol);
    const LocalCase lc = classify_local(D, F.space(), tol);
    tag = to_string(lc);
    json eig = json::array();
    for (const Eigenspace& e : D.eigenspaces) {
      eig.push_back({{"dim", e.basis.cols()}, {"a_plus", e.a_plus + 0.0}, {"a_minus", e.a_minus + 0.0}});
    }
    json res = json::object();
    for (const auto& [k, v] : D.residuals) res[k] = v;
    doc["decomposition"] = {{"eta_length", D.eta_length}, {"eigenspaces", eig}, {"residuals", res}};
    if (lc == LocalCase::pseudo_vaisman_mixed) {
      const Matrix s = mixed_signature_metric(D, F.metric());
      json rows = json::array();
      for (int i = 0; i < s.rows(); ++i)
        for (int j = 0; j < s.cols(); ++j) rows.push_back(s(i, j));
      doc["mixed_signature_metric"] = rows;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoLeeDirection && e.code() != ErrorCode::PreconditionViolation) throw;
  }
  doc["case_tag"] = tag;
  return doc;
}

}  // namespace gcelab::cli
