#include "tridecomp/bounds.hpp"
#include "tridecomp/flow.hpp"
#include "tridecomp/generators.hpp"
#include "tridecomp/grid.hpp"
#include "tridecomp/json_io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace tridecomp;

constexpr int kExitOk = 0;        // success / all claims hold
constexpr int kExitMathFail = 1;  // a mathematical claim failed, with certificate
constexpr int kExitUsage = 2;     // bad invocation or I/O

int env_threads() {
  if (const char* s = std::getenv("TRIDECOMP_THREADS")) {
    int v = std::atoi(s);
    if (v > 0) return v;
  }
  return 0;
}

void progress(const std::string& msg) { std::cerr << msg << "\n"; }

void emit_status(bool ok, const std::string& path) {
  Json j;
  j["ok"] = ok;
  if (!path.empty()) j["out"] = path;
  std::cout << j.dump() << "\n";
}

struct GenOptions {
  std::string family;
  int n = 0, h = 0;
  std::string delta = "0.148";
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen(const GenOptions& opt) {
  Graph g;
  if (opt.family == "complete") {
    if (opt.n <= 0) throw CLI::ValidationError("--n is required for the complete family");
    g = complete_graph(opt.n);
  } else if (opt.family == "barrier") {
    if (opt.h <= 0) throw CLI::ValidationError("--h is required for the barrier family");
    g = barrier_graph(opt.h);
  } else if (opt.family == "c4") {
    if (opt.h <= 0) throw CLI::ValidationError("--h is required for the c4 family");
    g = c4_blowup(opt.h);
  } else if (opt.family == "random") {
    if (opt.n <= 0) throw CLI::ValidationError("--n is required for the random family");
    g = random_dense(opt.n, parse_rat(opt.delta), opt.seed);
  } else {
    throw CLI::ValidationError("unknown family '" + opt.family + "'");
  }
  g.save_file(opt.out);
  progress("[gen] " + opt.family + ": n=" + std::to_string(g.order()) +
           " m=" + std::to_string(g.edge_count()) + " -> " + opt.out);
  emit_status(true, opt.out);
  return kExitOk;
}

int run_decompose(const std::string& in, const std::string& delta_text, const std::string& out) {
  Graph g = Graph::load_file(in);
  Rat delta = parse_rat(delta_text);
  progress("[decompose] n=" + std::to_string(g.order()) + " m=" + std::to_string(g.edge_count()) +
           " delta=" + rat_to_string(delta));
  DecomposeResult res = decompose(g, delta);
  if (res.ok) {
    write_json_file(out, weights_report(g, delta, res));
    progress("[decompose] success; weights -> " + out);
    emit_status(true, out);
    return kExitOk;
  }
  write_json_file(out, failure_report(g, delta, res));
  progress("[decompose] failure; report -> " + out);
  emit_status(false, out);
  return kExitMathFail;
}

struct AuditOptions {
  std::string in, report;
  std::string delta = "0.148";
  int cuts = 100;
  std::uint64_t seed = 0;
  int threads = 0;
  bool no_min_cut = false;
};

int run_audit_cmd(const AuditOptions& opt) {
  Graph g = Graph::load_file(opt.in);
  AuditConfig cfg;
  cfg.delta = parse_rat(opt.delta);
  cfg.random_cuts = opt.cuts;
  cfg.seed = opt.seed;
  cfg.threads = opt.threads > 0 ? opt.threads : env_threads();
  cfg.with_min_cut = !opt.no_min_cut;
  progress("[audit] n=" + std::to_string(g.order()) + " m=" + std::to_string(g.edge_count()) +
           " cuts=" + std::to_string(cfg.random_cuts));
  AuditResult res = run_audit(g, cfg);
  write_json_file(opt.report, audit_report(cfg, res));
  progress("[audit] " + std::to_string(res.reports.size()) + " checks, " +
           std::to_string(res.violations) + " violations -> " + opt.report);
  emit_status(res.violations == 0, opt.report);
  return res.violations == 0 ? kExitOk : kExitMathFail;
}

struct GridOptions {
  std::string h = "0.001";
  std::string rho = "0.00022";
  std::string delta = "0.148";
  std::string box;
  int threads = 0;
  int smallest = 1000;
  std::string report, csv;
};

int run_grid(const GridOptions& opt) {
  GridSpec spec;
  spec.h = parse_rat(opt.h);
  spec.rho = to_double(parse_rat(opt.rho));
  spec.delta = to_double(parse_rat(opt.delta));
  spec.threads = opt.threads > 0 ? opt.threads : env_threads();
  spec.track_smallest = opt.smallest;
  if (!opt.box.empty()) {
    std::istringstream bs(opt.box);
    std::string tok;
    std::vector<Rat> vals;
    while (std::getline(bs, tok, ',')) vals.push_back(parse_rat(tok));
    if (vals.size() != 6)
      throw CLI::ValidationError("--box expects a0,a1,t0,t1,m0,m1");
    for (int i = 0; i < 3; ++i) {
      spec.box.lo[i] = vals[2 * i];
      spec.box.hi[i] = vals[2 * i + 1];
    }
  }
  GridAxes axes = build_axes(spec);
  progress("[grid-verify] " + std::to_string(axes.total()) + " points, h=" + rat_to_string(spec.h));
  SweepOutcome sw = sweep(spec);
  ConstituentBounds tb = constituent_bounds(spec);
  CertificateResult cert = certificate(spec, sw, tb);
  if (!opt.report.empty()) write_json_file(opt.report, grid_report(spec, sw, tb, cert));
  if (!opt.csv.empty()) write_smallest_csv(opt.csv, spec, sw);
  std::ostringstream line;
  line << "[grid-verify] min_diff=" << sw.min_diff << " at (" << sw.argmin_point.alpha << ","
       << sw.argmin_point.tau << "," << sw.argmin_point.mu << "), certificate verbatim="
       << (cert.verbatim ? "true" : "false");
  progress(line.str());
  bool holds = cert.min_diff_ok && sw.sign_conditions_ok;
  emit_status(holds, opt.report);
  return holds ? kExitOk : kExitMathFail;
}

int run_report(const std::string& in) {
  std::ifstream f(in);
  if (!f) throw std::runtime_error("cannot open '" + in + "'");
  Json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("invalid JSON in '" + in + "': " + e.what());
  }
  auto need = [&](const Json& o, const char* key) -> const Json& {
    if (!o.contains(key))
      throw std::runtime_error("'" + in + "': missing required field '" + key + "'");
    return o.at(key);
  };
  if (!need(j, "schema_version").is_number_integer() ||
      j["schema_version"].get<int>() != kSchemaVersion)
    throw std::runtime_error("unsupported schema_version");
  std::string kind = need(j, "kind").get<std::string>();

  Json summary;
  summary["kind"] = kind;
  bool ok;
  if (kind == "weights") {
    need(j, "weights");
    summary["n"] = need(j, "n");
    summary["m"] = need(j, "m");
    summary["triangles"] = need(j, "triangle_count");
    ok = true;
  } else if (kind == "decompose_failure") {
    summary["stage"] = need(j, "stage");
    if (j.contains("shortfall")) summary["shortfall"] = j["shortfall"];
    ok = false;
  } else if (kind == "audit") {
    const Json& s = need(j, "summary");
    summary["total"] = need(s, "total");
    summary["violations"] = need(s, "violations");
    ok = need(s, "holds").get<bool>();
  } else if (kind == "grid_verify") {
    summary["points"] = need(j, "points_checked");
    summary["min_diff"] = need(j, "min_diff");
    const Json& c = need(j, "certificate");
    summary["certificate_verbatim"] = need(c, "verbatim");
    ok = need(c, "min_diff_ok").get<bool>() && need(j, "sign_conditions_ok").get<bool>();
  } else {
    throw std::runtime_error("unknown report kind '" + kind + "'");
  }
  summary["ok"] = ok;
  std::cout << summary.dump() << "\n";
  return ok ? kExitOk : kExitMathFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional triangle decomposition toolkit"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help and exit");

  GenOptions gen;
  auto* cgen = app.add_subcommand("gen", "generate a benchmark graph");
  cgen->set_help_flag("--help", "print help and exit");
  cgen->add_option("--family", gen.family, "complete|barrier|c4|random")->required();
  cgen->add_option("--n", gen.n, "vertex count (complete, random)");
  cgen->add_option("--h", gen.h, "part size (barrier, c4)");
  cgen->add_option("--delta", gen.delta, "density parameter (random)");
  cgen->add_option("--seed", gen.seed, "random seed");
  cgen->add_option("--out", gen.out, "output edge-list path")->required();

  std::string dc_in, dc_delta, dc_out = "weights.json";
  auto* cdec = app.add_subcommand("decompose", "fractional triangle decomposition via max flow");
  cdec->set_help_flag("--help", "print help and exit");
  cdec->add_option("--in", dc_in, "input edge-list")->required();
  cdec->add_option("--delta", dc_delta, "density parameter, e.g. 0.148 or 37/250")->required();
  cdec->add_option("--out", dc_out, "weights (or failure report) JSON path");

  AuditOptions audit;
  auto* caud = app.add_subcommand("audit", "audit the closed-form bounds on a graph");
  caud->set_help_flag("--help", "print help and exit");
  caud->add_option("--in", audit.in, "input edge-list")->required();
  caud->add_option("--delta", audit.delta, "density parameter");
  caud->add_option("--cuts", audit.cuts, "number of random cuts");
  caud->add_option("--seed", audit.seed, "cut-sampling seed");
  caud->add_option("--threads", audit.threads, "worker threads (default: TRIDECOMP_THREADS or all)");
  caud->add_flag("--no-min-cut", audit.no_min_cut, "skip the flow min-cut structured cut");
  caud->add_option("--report", audit.report, "output JSON path")->required();

  GridOptions grid;
  auto* cgrid = app.add_subcommand("grid-verify", "grid verification of the normalized margin");
  cgrid->set_help_flag("--help", "print help and exit");
  cgrid->add_option("--h", grid.h, "sub-interval width (decimal or p/q)");
  cgrid->add_option("--rho", grid.rho, "required margin");
  cgrid->add_option("--delta", grid.delta, "density parameter");
  cgrid->add_option("--box", grid.box, "a0,a1,t0,t1,m0,m1 (default: certified box)");
  cgrid->add_option("--threads", grid.threads, "worker threads (default: TRIDECOMP_THREADS or all)");
  cgrid->add_option("--smallest", grid.smallest, "lowest-margin points to track");
  cgrid->add_option("--report", grid.report, "output JSON path");
  cgrid->add_option("--csv", grid.csv, "CSV of the lowest-margin points");

  std::string rep_in;
  auto* crep = app.add_subcommand("report", "validate and summarize a report file");
  crep->set_help_flag("--help", "print help and exit");
  crep->add_option("--in", rep_in, "report JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cgen->parsed()) return run_gen(gen);
    if (cdec->parsed()) return run_decompose(dc_in, dc_delta, dc_out);
    if (caud->parsed()) return run_audit_cmd(audit);
    if (cgrid->parsed()) return run_grid(grid);
    if (crep->parsed()) return run_report(rep_in);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
