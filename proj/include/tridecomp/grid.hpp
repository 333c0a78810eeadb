#pragma once

#include "tridecomp/rational.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tridecomp {

struct GridDomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Dimensionless point: alpha (cut fraction), tau (t_A per n), mu (edge
// density m per C(n,2)).
struct ParamPoint {
  double alpha = 0, tau = 0, mu = 0;
};

// Leading-order constituents at a point, everything per the matching power
// of n: e_i per n^2, n_i per n, b per n^2, g and k per n^4. The four-piece
// function g is selected by where b falls against the n0-thresholds, with
// ties going to the lower case.
struct NormalizedState {
  double e0 = 0, e1 = 0, e2 = 0;
  double n0 = 0, n1 = 0, n2 = 0;
  double b = 0;
  double g = 0, k = 0, diff = 0;
  int case_id = 0;  // 1..4
};

enum class FuncId { e0, e1, e2, n0, n1, n2, b, k, g1, g2, g3, g4 };

struct Grad {
  double a = 0, t = 0, u = 0;
  double norm() const;
};

// Throws GridDomainError when e1 - e0 <= 0 (outside the validity region).
NormalizedState normalized_state(const ParamPoint& p, double delta);

// The named function's value; the g pieces are evaluated by formula,
// independent of which case the point falls in.
double func_value(const ParamPoint& p, double delta, FuncId which);

// Analytic partial derivatives with respect to (alpha, tau, mu).
Grad gradient(const ParamPoint& p, double delta, FuncId which);

// The four piece values with b overridden (the pieces agree where b equals
// a case threshold; useful for continuity checks off the real b).
std::array<double, 4> piece_values_with_b(const ParamPoint& p, double delta, double b);

struct Box {
  Rat lo[3], hi[3];
  static Box certified();  // [0.446,0.692] x [0.761,0.814] x [0.852,0.863]
};

struct GridSpec {
  Rat h = Rat(1, 1000);
  double rho = 0.00022;
  double delta = 0.148;
  Box box = Box::certified();
  int threads = 0;         // 0 = hardware concurrency
  int track_smallest = 1000;
};

// Axis coordinates anchored at the lower corner in exact rational steps,
// with the upper endpoint appended when it is not on the grid. Coarse grids
// whose step is a multiple of a finer step share points bit-for-bit.
struct GridAxes {
  std::vector<double> alpha, tau, mu;
  std::uint64_t total() const {
    return static_cast<std::uint64_t>(alpha.size()) * tau.size() * mu.size();
  }
};
GridAxes build_axes(const GridSpec& spec);

struct SmallPoint {
  double diff = 0, g = 0, k = 0;
  std::uint32_t i = 0, j = 0, l = 0;  // axis indices (alpha, tau, mu)
  int case_id = 0;
};

struct SweepOutcome {
  std::uint64_t points = 0;
  double min_diff = 0;
  std::size_t argmin[3] = {0, 0, 0};
  ParamPoint argmin_point;
  int argmin_case = 0;
  std::array<std::uint64_t, 4> case_histogram{0, 0, 0, 0};
  bool sign_conditions_ok = true;            // 0 < e0 < e1 < e2 and 2e1 > e0+e2 everywhere
  std::optional<ParamPoint> sign_violation;  // first offender in grid order
  std::vector<SmallPoint> smallest;          // ascending by (diff, index)
  double spot_check_max_delta = 0;           // extended-precision re-evaluation drift
  double seconds = 0;
};

// Exhaustive chunk-streamed evaluation over the grid; deterministic merge in
// chunk order, lexicographically-first tie-break for the argmin. The
// track_smallest lowest-margin points are re-evaluated in long double.
SweepOutcome sweep(const GridSpec& spec);

// Grid maxima of the constituent magnitudes and gradient norms. n0's
// gradient is bounded through the quotient rule (numerator and denominator
// tracked separately); n1's through n1 = 1 - n0 - n2.
struct ConstituentBounds {
  double abs_e[3] = {0, 0, 0};
  double grad_e[3] = {0, 0, 0};
  double abs_n[3] = {0, 0, 0};
  double grad_n2 = 0;
  double abs_n0_num = 0;    // max |numerator of n0| per n^3
  double min_n0_den = 0;    // min (e1 - e0) per n^2
  double grad_n0_den = 0;   // max gradient norm of e1 - e0
  double grad_n0_num = 0;   // max of the split sum of the two numerator-term norms
  double grad_n0_composite = 0;
  double grad_n1_composite = 0;
  double abs_b = 0, grad_b = 0;
  double grad_k = 0;
};
ConstituentBounds constituent_bounds(const GridSpec& spec);

// Assembles the per-piece gradient ceilings from the constituent table via
// the product-rule expansions, then tests the mean-value-theorem criterion
// rho/h > max_i ||grad g_i|| + ||grad k||, plus a conservative variant that
// charges the half-diagonal h*sqrt(3)/2 instead of h.
struct CertificateResult {
  double grad_g[4] = {0, 0, 0, 0};
  double composite = 0;
  double rho_over_h = 0;
  bool min_diff_ok = false;
  bool verbatim = false;
  bool conservative = false;
};
CertificateResult certificate(const GridSpec& spec, const SweepOutcome& sw, const ConstituentBounds& table);

// Reference ceilings for the constituent maxima and assembled gradient
// bounds on the certified box; grid maxima are expected to stay within
// these (min_n0_den is a floor, everything else a cap).
struct ReferenceCeilings {
  double abs_e[3] = {0.169, 0.242, 0.299};
  double grad_e[3] = {0.513, 0.501, 0.554};
  double abs_n[3] = {0.448, 0.490, 0.458};
  double grad_n[3] = {7.589, 9.372, 0.783};
  double abs_b = 0.240, grad_b = 0.513;
  double grad_k = 0.187;
  double abs_n0_num = 0.0315, min_n0_den = 0.0692;
  double grad_n0_den = 0.477, grad_n0_num = 0.308;
  double grad_g[4] = {0.420, 3.206, 10.863, 15.083};
  double composite = 22.0;
};

struct CeilingEntry {
  std::string name;
  double value = 0;
  double reference = 0;
  bool ok = false;  // value <= reference (or >= for the denominator floor)
};

std::vector<CeilingEntry> compare_ceilings(const ConstituentBounds& t, const CertificateResult& c,
                                        const ReferenceCeilings& ref = {});

}  // namespace tridecomp
