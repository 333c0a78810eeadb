#include "tridecomp/bounds.hpp"

#include "tridecomp/flow.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace tridecomp {

BoundReport make_report(std::string name, std::string relation, Rat lhs, Rat rhs,
                        std::string context) {
  BoundReport r;
  r.bound_name = std::move(name);
  r.relation = std::move(relation);
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  r.context = std::move(context);
  if (r.relation == "ge")
    r.holds = r.lhs >= r.rhs;
  else if (r.relation == "gt")
    r.holds = r.lhs > r.rhs;
  else if (r.relation == "eq")
    r.holds = r.lhs == r.rhs;
  else
    throw std::invalid_argument("unknown relation '" + r.relation + "'");
  return r;
}

namespace {

const GraphStats& resolve_stats(const Graph& g, const GraphStats* pre, GraphStats& local) {
  if (pre) return *pre;
  local = graph_stats(g);
  return local;
}

void require_reduced(const Graph& g, const Rat& delta) {
  auto rc = is_reduced(g, delta);
  if (!rc.reduced) throw NotReducedError(rc.witness);
}

}  // namespace

std::pair<BoundReport, BoundReport> lambda_upper_bounds(const Graph& g, const EdgeSet& A,
                                                        const Rat& delta, const GraphStats* pre,
                                                        const CutStats* cut) {
  GraphStats local;
  const GraphStats& st = resolve_stats(g, pre, local);
  CutStats local_cut;
  if (!cut) {
    local_cut = cut_statistics(g, A, delta, &st);
    cut = &local_cut;
  }
  if (cut->empty_cut) throw std::invalid_argument("lambda_upper_bounds: empty cut");
  const int n = g.order();
  const Rat ceil_term(ceil_rat((1 - delta) * n - 1));
  const Rat one_minus = 1 - cut->alpha;
  Rat bound_i = Rat(3, 2) * cut->alpha * one_minus * st.m * ceil_term *
                (cut->t_A - (1 - 2 * delta) * n);
  Rat bound_ii = Rat(3, 2) * one_minus * st.m * ceil_term * (st.t_av - (1 - 2 * delta) * n);
  return {make_report("lambda_upper_from_tA", "ge", bound_i, cut->lambda, ""),
          make_report("lambda_upper_from_tav", "ge", bound_ii, cut->lambda, "")};
}

BoundReport degree_sum_bound(const Graph& g, const std::vector<int>& U, const Rat& delta) {
  require_reduced(g, delta);
  const int n = g.order();
  std::int64_t sum = 0;
  for (int v : U) sum += g.degree(v);
  Rat rhs = Rat(static_cast<std::int64_t>(U.size())) * ((1 - delta) * n + 2) +
            Rat(1, 2) * (delta * n - 2) * (delta * n - 2);
  return make_report("degree_sum_upper", "gt", rhs, Rat(sum),
                     "|U|=" + std::to_string(U.size()));
}

BoundReport edge_count_bound(const Graph& g, const Rat& delta) {
  require_reduced(g, delta);
  const int n = g.order();
  Rat rhs = (2 - 2 * delta + delta * delta) / 4 * n * n + (1 - delta) * n + 1;
  return make_report("edge_count_upper", "gt", rhs, Rat(g.edge_count()), "");
}

BoundReport tav_upper_bound(const Graph& g, const Rat& delta) {
  require_reduced(g, delta);
  GraphStats st = graph_stats(g);
  if (st.m == 0) throw std::invalid_argument("tav_upper_bound: empty graph");
  const int n = g.order();
  Rat choose2 = Rat(BigInt(n) * (n - 1), 2);
  Rat rhs = 3 * (1 - delta) * n - (2 * Rat(n) - 3 * delta * n + 2) / st.m * choose2;
  return make_report("tav_upper", "ge", rhs, st.t_av, "");
}

BoundReport kappa_lower_convexity(const Graph& g, const EdgeSet& S, const Rat& delta,
                                  const GraphStats* pre, const std::int64_t* kappa_pre) {
  GraphStats local;
  const GraphStats& st = resolve_stats(g, pre, local);
  const std::int64_t size = S.count();
  if (size == 0) throw std::invalid_argument("kappa_lower_convexity: empty set");
  std::int64_t t_sum = 0;
  for (int e : S.to_ids()) t_sum += st.t_e[e];
  Rat t_S(t_sum, size);
  std::int64_t kappa = kappa_pre ? *kappa_pre : kappa_of_cut(g, S);
  Rat rhs = Rat(size, 2) * t_S * (t_S - delta * g.order()) - Rat(size) * (size - 1);
  return make_report("kappa_lower_convexity", "ge", Rat(kappa), rhs, "");
}

BoundReport kappa_lower_window(const Graph& g, const EdgeSet& A, const Rat& delta,
                               const GraphStats* pre, const std::int64_t* kappa_pre) {
  GraphStats local;
  const GraphStats& st = resolve_stats(g, pre, local);
  const std::int64_t size = A.count();
  std::int64_t kappa = kappa_pre ? *kappa_pre : kappa_of_cut(g, A);
  Rat rhs = 0;
  if (size > 0 && size < st.m) {
    std::int64_t t_sum = 0;
    for (int e : A.to_ids()) t_sum += st.t_e[e];
    Rat t_A(t_sum, size);
    Rat alpha(size, st.m);
    const int n = g.order();
    rhs = Rat(1, 2) * alpha * (1 - alpha) * st.m * (t_A - 2 * delta * n) * (t_A - 3 * delta * n);
  }
  return make_report("kappa_lower_window", "ge", Rat(kappa), rhs, "");
}

std::vector<BoundReport> neighbourhood_weight_audit(const Graph& g, const EdgeSet& A,
                                                    const Rat& delta, const GraphStats* pre,
                                                    const std::int64_t* kappa_pre) {
  GraphStats local;
  const GraphStats& st = resolve_stats(g, pre, local);
  const int n = g.order();
  const std::int64_t size = A.count();
  const Rat alpha = st.m > 0 ? Rat(size, st.m) : Rat(0);
  auto ea = edge_neighbourhood_weights(g, A);

  std::vector<BoundReport> out;

  std::int64_t ea_min = 0, ea_max = 0, ea_sum = 0;
  if (n > 0) {
    ea_min = ea[0];
    ea_max = ea[0];
    for (int v = 0; v < n; ++v) {
      ea_min = std::min(ea_min, ea[v]);
      ea_max = std::max(ea_max, ea[v]);
      ea_sum += ea[v];
    }
  }
  Rat lower = Rat(1, 2) * (1 - delta) * (1 - 2 * delta) * n * n - (1 - alpha) * st.m;
  out.push_back(make_report("neighbourhood_weight_lower", "ge", Rat(ea_min), lower, ""));
  out.push_back(make_report("neighbourhood_weight_upper", "ge", Rat(size), Rat(ea_max), ""));

  std::int64_t t_sum = 0;
  for (int e : A.to_ids()) t_sum += st.t_e[e];
  out.push_back(make_report("neighbourhood_weight_sum", "eq", Rat(ea_sum), Rat(t_sum), ""));

  auto partner = cut_partner_counts(g, A);
  std::int64_t kappa = 0;
  bool have_b_edge = false;
  std::int64_t worst_lhs = 0;
  Rat worst_rhs, worst_slack;
  int worst_edge = -1;
  Rat b_pair_sum = 0;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (A.test(e)) continue;
    kappa += partner[e];
    auto [u, v] = g.edge(e);
    Rat rhs = Rat(ea[u]) + Rat(ea[v]) - size;
    b_pair_sum += Rat(ea[u]) + Rat(ea[v]);
    Rat slack = Rat(partner[e]) - rhs;
    if (!have_b_edge || slack < worst_slack) {
      have_b_edge = true;
      worst_slack = slack;
      worst_lhs = partner[e];
      worst_rhs = rhs;
      worst_edge = e;
    }
  }
  if (kappa_pre) kappa = *kappa_pre;
  if (have_b_edge) {
    auto [u, v] = g.edge(worst_edge);
    out.push_back(make_report("shared_neighbourhood_lower", "ge", Rat(worst_lhs), worst_rhs,
                              "worst edge " + std::to_string(u) + "-" + std::to_string(v)));
  }
  Rat rhs22 = b_pair_sum - alpha * (1 - alpha) * st.m * st.m;
  out.push_back(make_report("kappa_lower_neighbourhood", "ge", Rat(kappa), rhs22, ""));
  return out;
}

double ThresholdLab::window_value(double tau) const {
  return (tau - 2 * d_) * (tau - 3 * d_) - 3 * (1 - d_) * (tau - (1 - 2 * d_));
}

double ThresholdLab::window_root_bisect() const {
  double lo = 3 * d_, hi = 1.0;
  if (!(window_value(lo) > 0 && window_value(hi) < 0))
    throw std::domain_error("window expression does not change sign on [3d, 1]");
  while (hi - lo > 1e-6) {
    double mid = 0.5 * (lo + hi);
    (window_value(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double ThresholdLab::window_root_closed() const {
  const double b = -(3 + 2 * d_);
  const double c = 6 * d_ * d_ + 3 * (1 - d_) * (1 - 2 * d_);
  return (-b - std::sqrt(b * b - 4 * c)) / 2;
}

double ThresholdLab::mu_hat_max() const { return (2 - 2 * d_ + d_ * d_) / 4; }

double ThresholdLab::low_alpha_tau_crit(double alpha) const {
  return 0.5 * (3 - 3 * alpha * (1 - d_) - 2 * d_);
}

bool ThresholdLab::low_alpha_interior(double alpha) const {
  return low_alpha_tau_crit(alpha) <= 1.0;
}

double ThresholdLab::low_alpha_coeff(double alpha) const {
  const double A = 0.5 * (3 - 2 * d_);
  const double B = -1.5 * (1 - d_);
  const double C = A - (1 - 2 * d_);
  const double mu = mu_hat_max();
  const double c0 = A * A - d_ * A - 3 * (1 - d_) * C;
  const double c1 = 2 * A * B - d_ * B - 2 * mu - 3 * (1 - d_) * (B - C);
  const double c2 = B * B + 3 * (1 - d_) * B;
  return c0 + c1 * alpha + c2 * alpha * alpha;
}

double ThresholdLab::low_alpha_boundary_coeff(double alpha) const {
  // t_A pinned at n
  return (1 - d_) - 2 * alpha * mu_hat_max() - 6 * d_ * (1 - d_) * (1 - alpha);
}

std::pair<double, double> ThresholdLab::low_alpha_roots() const {
  const double A = 0.5 * (3 - 2 * d_);
  const double B = -1.5 * (1 - d_);
  const double C = A - (1 - 2 * d_);
  const double mu = mu_hat_max();
  const double c0 = A * A - d_ * A - 3 * (1 - d_) * C;
  const double c1 = 2 * A * B - d_ * B - 2 * mu - 3 * (1 - d_) * (B - C);
  const double c2 = B * B + 3 * (1 - d_) * B;
  const double disc = std::sqrt(c1 * c1 - 4 * c2 * c0);
  double r1 = (-c1 + disc) / (2 * c2);
  double r2 = (-c1 - disc) / (2 * c2);
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

double ThresholdLab::low_alpha_root_bisect() const {
  double lo = 0.35, hi = 0.6;
  if (!(low_alpha_coeff(lo) > 0 && low_alpha_coeff(hi) < 0))
    throw std::domain_error("small-alpha coefficient does not change sign on [0.35, 0.6]");
  while (hi - lo > 1e-6) {
    double mid = 0.5 * (lo + hi);
    (low_alpha_coeff(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double ThresholdLab::low_alpha_value_at_n(double alpha, double n) const {
  const double m = mu_hat_max() * n * n + (1 - d_) * n + 1;
  const double t = low_alpha_tau_crit(alpha) * n;
  const double v =
      t * (t - d_ * n) - 2 * (alpha * m - 1) - 3 * n * (1 - alpha) * (1 - d_) * (t - (1 - 2 * d_) * n);
  return v / (n * n);
}

double ThresholdLab::high_alpha_value_at_n(double alpha, double n) const {
  const double m = mu_hat_max() * n * n + (1 - d_) * n + 1;
  const double tav = 3 * (1 - d_) * n - (2 * n - 3 * d_ * n + 2) / m * (n * (n - 1) / 2);
  const double v = (1 - 2 * d_) * (1 - 3 * d_) * n * n - 2 * ((1 - alpha) * m - 1) -
                   3 * n * (1 - d_) * (tav - (1 - 2 * d_) * n);
  return v / (n * n);
}

double ThresholdLab::high_alpha_coeff(double alpha) const {
  const double mu = mu_hat_max();
  const double tav_hat = 3 * (1 - d_) - (2 - 3 * d_) / (2 * mu);
  return (1 - 2 * d_) * (1 - 3 * d_) - 2 * (1 - alpha) * mu -
         3 * (1 - d_) * (tav_hat - (1 - 2 * d_));
}

double ThresholdLab::high_alpha_root_bisect() const {
  double lo = 0.0, hi = 1.0;
  if (!(high_alpha_coeff(lo) < 0 && high_alpha_coeff(hi) > 0))
    throw std::domain_error("large-alpha coefficient does not change sign on [0, 1]");
  while (hi - lo > 1e-6) {
    double mid = 0.5 * (lo + hi);
    (high_alpha_coeff(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ThresholdLab::SubstitutionSigns ThresholdLab::high_alpha_substitution_signs(double alpha,
                                                                            double mu_hat) const {
  SubstitutionSigns s;
  s.wrt_tav = -3 * (1 - d_);
  s.wrt_alpha = 2 * mu_hat;
  s.wrt_mu = -2 * (1 - alpha) - 3 * (1 - d_) * (2 - 3 * d_) / (2 * mu_hat * mu_hat);
  return s;
}

namespace {

struct NamedCut {
  std::string label;
  EdgeSet edges;
};

std::vector<BoundReport> audit_one_cut(const Graph& g, const GraphStats& st, const Rat& delta,
                                       const NamedCut& cut) {
  std::vector<BoundReport> out;
  auto tag = [&](BoundReport r) {
    r.context = r.context.empty() ? cut.label : cut.label + "; " + r.context;
    out.push_back(std::move(r));
  };

  const std::int64_t kappa = kappa_of_cut(g, cut.edges);
  CutStats cs = cut_statistics(g, cut.edges, delta, &st, &kappa);

  if (!cs.empty_cut) {
    auto [b1, b2] = lambda_upper_bounds(g, cut.edges, delta, &st, &cs);
    tag(std::move(b1));
    tag(std::move(b2));
    tag(kappa_lower_convexity(g, cut.edges, delta, &st, &kappa));
  }
  EdgeSet B = cut.edges.complement();
  if (B.count() > 0) {
    BoundReport rb = kappa_lower_convexity(g, B, delta, &st, &kappa);
    rb.bound_name = "kappa_lower_convexity_complement";
    tag(std::move(rb));
  }
  tag(kappa_lower_window(g, cut.edges, delta, &st, &kappa));
  for (auto& r : neighbourhood_weight_audit(g, cut.edges, delta, &st, &kappa)) tag(std::move(r));

  // the cut condition itself is a theorem below the tau window at delta=0.148
  if (delta == Rat(37, 250) && !cs.empty_cut && cs.t_A <= Rat(7619, 10000) * g.order())
    tag(make_report("cut_condition_low_tA", "ge", Rat(cs.kappa), cs.lambda, ""));
  return out;
}

}  // namespace

AuditResult run_audit(const Graph& g, const AuditConfig& cfg) {
  AuditResult res;
  res.info.n = g.order();
  res.info.m_input = g.edge_count();

  ReduceResult rr = reduce(g, cfg.delta);
  const Graph& red = rr.graph;
  res.info.m_reduced = red.edge_count();
  res.info.peeled_triangles = static_cast<int>(rr.peeled.size());

  GraphStats st = graph_stats(red);

  res.reports.push_back(degree_sum_bound(red, [&] {
                          std::vector<int> all(red.order());
                          for (int v = 0; v < red.order(); ++v) all[v] = v;
                          return all;
                        }(), cfg.delta));
  res.reports.push_back(edge_count_bound(red, cfg.delta));
  if (st.m > 0) res.reports.push_back(tav_upper_bound(red, cfg.delta));

  std::vector<NamedCut> cuts;
  std::mt19937_64 rng(cfg.seed);
  for (int i = 0; i < cfg.random_cuts; ++i) {
    EdgeSet A(red.edge_count());
    for (int e = 0; e < red.edge_count(); ++e)
      if (rng() & 1) A.set(e);
    cuts.push_back({"random#" + std::to_string(i), std::move(A)});
  }
  for (int v = 0; v < red.order(); ++v) {
    EdgeSet A(red.edge_count());
    for (int u = 0; u < red.order(); ++u)
      if (u != v && red.adjacent(u, v)) A.set(red.edge_id(std::min(u, v), std::max(u, v)));
    cuts.push_back({"star#" + std::to_string(v), std::move(A)});
  }
  {
    auto tris = enumerate_triangles(red);
    for (std::size_t i = 0; i < tris.size() && i < 10; ++i) {
      EdgeSet A(red.edge_count());
      A.set(red.edge_id(tris[i].a, tris[i].b));
      A.set(red.edge_id(tris[i].a, tris[i].c));
      A.set(red.edge_id(tris[i].b, tris[i].c));
      cuts.push_back({"triangle#" + std::to_string(i), std::move(A)});
    }
  }
  {
    // the low-t_e side: edges inside the tau window, where the cut condition
    // is a theorem at the working delta
    EdgeSet low(red.edge_count());
    bool nonempty = false;
    for (int e = 0; e < red.edge_count(); ++e) {
      if (Rat(st.t_e[e]) <= Rat(7619, 10000) * red.order()) {
        low.set(e);
        nonempty = true;
      }
    }
    if (nonempty) cuts.push_back({"low_te", std::move(low)});
  }
  if (cfg.with_min_cut && st.m > 0 && st.triangle_count > 0) {
    bool covered = true;
    for (int e = 0; e < red.edge_count() && covered; ++e)
      if (st.t_e[e] == 0) covered = false;
    if (covered) {
      FlowNetwork net = build_network(red, cfg.delta, &st);
      FlowResult fr = max_flow(net);
      if (!fr.success) cuts.push_back({"mincut", std::move(*fr.min_cut)});
    }
  }
  res.info.cuts_audited = static_cast<int>(cuts.size());

  std::vector<std::vector<BoundReport>> per_cut(cuts.size());
  unsigned hw = std::thread::hardware_concurrency();
  int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(hw ? hw : 1);
  threads = std::min<int>(threads, std::max<std::size_t>(cuts.size(), 1));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= cuts.size()) return;
      per_cut[i] = audit_one_cut(red, st, cfg.delta, cuts[i]);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (auto& batch : per_cut)
    for (auto& r : batch) res.reports.push_back(std::move(r));
  for (const auto& r : res.reports)
    if (!r.holds) ++res.violations;
  return res;
}

}  // namespace tridecomp
