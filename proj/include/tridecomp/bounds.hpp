#pragma once

#include "tridecomp/graph.hpp"
#include "tridecomp/rational.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tridecomp {

// One audited inequality. relation fixes the orientation of the claim:
// "ge" means lhs >= rhs, "gt" strict, "eq" exact equality. lhs and rhs are
// exact rationals; holds is the exact comparison outcome.
struct BoundReport {
  std::string bound_name;
  std::string relation;
  Rat lhs, rhs;
  bool holds = false;
  std::string context;
};

BoundReport make_report(std::string name, std::string relation, Rat lhs, Rat rhs,
                        std::string context);

// lambda_A against its two closed-form ceilings:
//   (i)  (3/2) a(1-a) m ceil((1-d)n-1) (t_A - (1-2d)n)
//   (ii) (3/2) (1-a) m ceil((1-d)n-1) (t_av - (1-2d)n)
// A must be nonempty.
std::pair<BoundReport, BoundReport> lambda_upper_bounds(const Graph& g, const EdgeSet& A,
                                                        const Rat& delta,
                                                        const GraphStats* pre = nullptr,
                                                        const CutStats* cut = nullptr);

// Sum of degrees over U strictly below |U|((1-d)n+2) + (dn-2)^2/2.
// Requires a reduced graph (throws NotReducedError otherwise).
BoundReport degree_sum_bound(const Graph& g, const std::vector<int>& U, const Rat& delta);

// m strictly below ((2-2d+d^2)/4)n^2 + (1-d)n + 1. Requires reduced.
BoundReport edge_count_bound(const Graph& g, const Rat& delta);

// t_av at most 3(1-d)n - ((2n-3dn+2)/m) C(n,2); equality exactly on complete
// graphs. Requires reduced.
BoundReport tav_upper_bound(const Graph& g, const Rat& delta);

// kappa_S at least |S| t_S (t_S - dn)/2 - |S|(|S|-1): per-edge K4 counts
// through the convexity of the quadratic. S nonempty.
BoundReport kappa_lower_convexity(const Graph& g, const EdgeSet& S, const Rat& delta,
                                  const GraphStats* pre = nullptr,
                                  const std::int64_t* kappa_pre = nullptr);

// kappa_A at least a(1-a) m (t_A - 2dn)(t_A - 3dn)/2.
BoundReport kappa_lower_window(const Graph& g, const EdgeSet& A, const Rat& delta,
                               const GraphStats* pre = nullptr,
                               const std::int64_t* kappa_pre = nullptr);

// Neighbourhood-weight audits, all exact:
//   per-vertex range  (1-d)(1-2d)n^2/2 - (1-a)m <= e_A(u) <= am,
//   the sum identity   sum_u e_A(u) = |A| t_A,
//   the per-edge intersection bound |E_A(u) ∩ E_A(v)| >= e_A(u)+e_A(v)-am
//     (reported at the minimum-slack edge outside A),
//   and kappa_A >= sum_{uv not in A}(e_A(u)+e_A(v)) - a(1-a)m^2.
std::vector<BoundReport> neighbourhood_weight_audit(const Graph& g, const EdgeSet& A,
                                                    const Rat& delta,
                                                    const GraphStats* pre = nullptr,
                                                    const std::int64_t* kappa_pre = nullptr);

// Leading-order (normalized) threshold expressions around a working delta.
// These are the asymptotic forms: evaluation is floating point, the margins
// of interest sit far above double rounding.
class ThresholdLab {
 public:
  explicit ThresholdLab(double delta = 0.148) : d_(delta) {}
  double delta() const { return d_; }

  // (tau-2d)(tau-3d) - 3(1-d)(tau-(1-2d)); nonnegative iff the cut condition
  // follows for cuts with t_A = tau n. Decreasing in tau on [0,1].
  double window_value(double tau) const;
  double window_root_bisect() const;  // positivity threshold, to 1e-6
  double window_root_closed() const;  // via the quadratic formula

  // small-alpha regime: leading n^2 coefficient after substituting the
  // critical t_A and the maximal edge count. Quadratic in alpha.
  double low_alpha_coeff(double alpha) const;
  double low_alpha_tau_crit(double alpha) const;
  bool low_alpha_interior(double alpha) const;  // critical point below t_A = n
  double low_alpha_boundary_coeff(double alpha) const;  // evaluated at t_A = n
  std::pair<double, double> low_alpha_roots() const;
  double low_alpha_root_bisect() const;  // the upper positivity threshold

  // large-alpha regime: leading coefficient after substituting the t_av
  // ceiling and then the maximal edge count; increasing in alpha.
  double high_alpha_coeff(double alpha) const;
  double high_alpha_root_bisect() const;

  // finite-n evaluations of the same normalized expressions with the
  // lower-order terms kept (full edge-count and t_av ceilings). These are
  // informational: the claims are asymptotic, so no pass/fail is attached;
  // near the working points the sign can genuinely differ from the leading
  // coefficient until n grows past ~10^4.
  static constexpr double kDefaultN = 1e4;
  double low_alpha_value_at_n(double alpha, double n = kDefaultN) const;
  double high_alpha_value_at_n(double alpha, double n = kDefaultN) const;

  // partial derivatives justifying the substitution order (t_av, alpha, m)
  struct SubstitutionSigns {
    double wrt_tav, wrt_alpha, wrt_mu;
  };
  SubstitutionSigns high_alpha_substitution_signs(double alpha, double mu_hat) const;

  double mu_hat_max() const;  // (2-2d+d^2)/4

 private:
  double d_;
};

struct AuditConfig {
  Rat delta = Rat(37, 250);  // 0.148
  int random_cuts = 100;
  std::uint64_t seed = 0;
  bool with_min_cut = true;  // add the violated cut of a failed flow, if any
  int threads = 0;           // 0 = hardware concurrency
};

struct AuditInfo {
  int n = 0;
  int m_input = 0;
  int m_reduced = 0;
  int peeled_triangles = 0;
  int cuts_audited = 0;
};

struct AuditResult {
  AuditInfo info;
  std::vector<BoundReport> reports;
  int violations = 0;
};

// Reduces the input (the degree-sum, edge-count and t_av ceilings are claims
// about reduced graphs), then audits every closed-form bound on the reduced
// graph over: per-graph checks, cfg.random_cuts uniform random edge subsets,
// one star cut per vertex, the first ten triangle cuts, and the violated cut
// of a failed flow when requested. Deterministic under (delta, seed).
AuditResult run_audit(const Graph& g, const AuditConfig& cfg);

}  // namespace tridecomp
