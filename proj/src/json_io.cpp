#include "tridecomp/json_io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace tridecomp {

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

namespace {

std::string triangle_key(const Triangle& t) {
  return std::to_string(t.a) + "," + std::to_string(t.b) + "," + std::to_string(t.c);
}

Json triangle_array(const Triangle& t) { return Json::array({t.a, t.b, t.c}); }

Json header(const char* kind) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  j["generated_at"] = iso_timestamp();
  return j;
}

}  // namespace

Json weights_report(const Graph& g, const Rat& delta, const DecomposeResult& res) {
  Json j = header("weights");
  j["n"] = g.order();
  j["m"] = g.edge_count();
  j["delta"] = rat_to_string(delta);
  j["peeled_triangles"] = Json::array();
  for (const Triangle& t : res.peeled) j["peeled_triangles"].push_back(triangle_array(t));
  j["triangle_count"] = res.weighting.triangles.size();
  // keys are unique by construction; bypass the ordered_map find-on-insert
  Json::object_t w;
  for (std::size_t i = 0; i < res.weighting.triangles.size(); ++i)
    w.push_back({triangle_key(res.weighting.triangles[i]),
                 Json(rat_to_string(res.weighting.weight[i]))});
  j["weights"] = Json(std::move(w));
  return j;
}

Json failure_report(const Graph& g, const Rat& delta, const DecomposeResult& res) {
  if (!res.failure) throw std::logic_error("failure_report on a successful run");
  const DecomposeFailure& f = *res.failure;
  Json j = header("decompose_failure");
  j["n"] = g.order();
  j["m"] = g.edge_count();
  j["delta"] = rat_to_string(delta);
  switch (f.stage) {
    case DecomposeStage::FlowShortfall: j["stage"] = "flow_shortfall"; break;
    case DecomposeStage::NegativeWeight: j["stage"] = "negative_weight"; break;
    case DecomposeStage::UncoveredEdge: j["stage"] = "uncovered_edge"; break;
  }
  j["peeled_triangles"] = Json::array();
  for (const Triangle& t : res.peeled) j["peeled_triangles"].push_back(triangle_array(t));
  if (f.stage == DecomposeStage::FlowShortfall) {
    j["demand"] = rat_to_string(res.z);
    j["scale"] = res.scale.str();
    j["shortfall"] = rat_to_string(f.shortfall);
    Json cut;
    cut["edge_ids"] = f.min_cut_edges;
    Json edges = Json::array();
    for (int e : f.min_cut_edges) {
      auto [u, v] = res.reduced.edge(e);
      edges.push_back(Json::array({u, v}));
    }
    cut["edges"] = std::move(edges);
    if (f.min_cut) {
      cut["alpha"] = rat_to_string(f.min_cut->alpha);
      cut["t_A"] = f.min_cut->empty_cut ? "undefined" : rat_to_string(f.min_cut->t_A);
      cut["kappa"] = f.min_cut->kappa;
      cut["lambda"] = rat_to_string(f.min_cut->lambda);
    }
    j["min_cut"] = std::move(cut);
  }
  if (f.negative_triangle) j["negative_triangle"] = triangle_array(*f.negative_triangle);
  if (f.uncovered_edge) {
    auto [u, v] = res.reduced.edge(*f.uncovered_edge);
    j["uncovered_edge"] = Json::array({u, v});
  }
  return j;
}

Json audit_report(const AuditConfig& cfg, const AuditResult& res) {
  Json j = header("audit");
  j["delta"] = rat_to_string(cfg.delta);
  j["seed"] = cfg.seed;
  j["random_cuts"] = cfg.random_cuts;
  j["input"] = {{"n", res.info.n},
                {"m", res.info.m_input},
                {"m_reduced", res.info.m_reduced},
                {"peeled_triangles", res.info.peeled_triangles},
                {"cuts_audited", res.info.cuts_audited}};
  Json arr = Json::array();
  for (const BoundReport& r : res.reports) {
    Json e;
    e["bound_name"] = r.bound_name;
    e["relation"] = r.relation;
    e["lhs"] = rat_to_string(r.lhs);
    e["rhs"] = rat_to_string(r.rhs);
    e["lhs_approx"] = to_double(r.lhs);
    e["rhs_approx"] = to_double(r.rhs);
    e["holds"] = r.holds;
    e["context"] = r.context;
    arr.push_back(std::move(e));
  }
  j["reports"] = std::move(arr);
  j["summary"] = {{"total", res.reports.size()},
                  {"violations", res.violations},
                  {"holds", res.violations == 0}};
  return j;
}

Json grid_report(const GridSpec& spec, const SweepOutcome& sw, const ConstituentBounds& tb,
                 const CertificateResult& cert) {
  Json j = header("grid_verify");
  j["params"] = {{"h", rat_to_string(spec.h)},
                 {"rho", spec.rho},
                 {"delta", spec.delta},
                 {"box",
                  Json::array({rat_to_string(spec.box.lo[0]), rat_to_string(spec.box.hi[0]),
                               rat_to_string(spec.box.lo[1]), rat_to_string(spec.box.hi[1]),
                               rat_to_string(spec.box.lo[2]), rat_to_string(spec.box.hi[2])})},
                 {"threads", spec.threads},
                 {"track_smallest", spec.track_smallest}};
  j["points_checked"] = sw.points;
  j["min_diff"] = sw.min_diff;
  j["argmin"] = {{"alpha", sw.argmin_point.alpha}, {"tau", sw.argmin_point.tau},
                 {"mu", sw.argmin_point.mu},       {"case", sw.argmin_case},
                 {"index", Json::array({sw.argmin[0], sw.argmin[1], sw.argmin[2]})}};
  j["case_histogram"] = {{"1", sw.case_histogram[0]},
                         {"2", sw.case_histogram[1]},
                         {"3", sw.case_histogram[2]},
                         {"4", sw.case_histogram[3]}};
  j["sign_conditions_ok"] = sw.sign_conditions_ok;
  if (sw.sign_violation)
    j["sign_violation"] = {{"alpha", sw.sign_violation->alpha},
                           {"tau", sw.sign_violation->tau},
                           {"mu", sw.sign_violation->mu}};
  Json t1 = Json::array();
  for (const CeilingEntry& e : compare_ceilings(tb, cert)) {
    t1.push_back({{"name", e.name}, {"value", e.value}, {"reference", e.reference}, {"ok", e.ok}});
  }
  j["ceilings"] = std::move(t1);
  j["gradient_bounds"] = {{"g1", cert.grad_g[0]},
                          {"g2", cert.grad_g[1]},
                          {"g3", cert.grad_g[2]},
                          {"g4", cert.grad_g[3]},
                          {"k", tb.grad_k},
                          {"composite", cert.composite}};
  j["certificate"] = {{"rho_over_h", cert.rho_over_h},
                      {"min_diff_ok", cert.min_diff_ok},
                      {"verbatim", cert.verbatim},
                      {"conservative", cert.conservative}};
  j["spot_check"] = {{"points", sw.smallest.size()}, {"max_abs_delta", sw.spot_check_max_delta}};
  j["seconds"] = sw.seconds;
  return j;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

void write_smallest_csv(const std::string& path, const GridSpec& spec, const SweepOutcome& sw) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  GridAxes axes = build_axes(spec);
  out << "alpha,tau,mu,case,g,k,diff\n";
  char buf[256];
  for (const SmallPoint& sp : sw.smallest) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.17g\n", axes.alpha[sp.i],
                  axes.tau[sp.j], axes.mu[sp.l], sp.case_id, sp.g, sp.k, sp.diff);
    out << buf;
  }
}

}  // namespace tridecomp
