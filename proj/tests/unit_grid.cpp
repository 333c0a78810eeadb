#include "tridecomp/grid.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace tridecomp;

namespace {

constexpr double kDelta = 0.148;

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

ParamPoint random_point(std::mt19937_64& rng) {
  auto u = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1p-53);
  };
  return {u(0.446, 0.692), u(0.761, 0.814), u(0.852, 0.863)};
}

double fd_partial(const ParamPoint& p, FuncId which, int axis) {
  const double step = 1e-7;
  ParamPoint lo = p, hi = p;
  double* plo = axis == 0 ? &lo.alpha : axis == 1 ? &lo.tau : &lo.mu;
  double* phi = axis == 0 ? &hi.alpha : axis == 1 ? &hi.tau : &hi.mu;
  *plo -= step;
  *phi += step;
  return (func_value(hi, kDelta, which) - func_value(lo, kDelta, which)) / (2 * step);
}

}  // namespace

TEST_CASE("normalized state at a frozen interior point") {
  // reference values computed independently at 40-digit precision
  NormalizedState st = normalized_state({0.5, 0.78, 0.858}, kDelta);
  CHECK(close(st.e0, 0.085404, 1e-13));
  CHECK(close(st.e1, 0.166031412234314068, 1e-13));
  CHECK(close(st.e2, 0.2145, 1e-13));
  CHECK(close(st.n0, 0.2360323240854495604, 1e-13));
  CHECK(close(st.n1, 0.3449485916670630334, 1e-13));
  CHECK(close(st.n2, 0.4190190842474874062, 1e-13));
  CHECK(close(st.b, 0.2145, 1e-13));
  CHECK(st.case_id == 4);
  CHECK(close(st.g, 0.05699044296166284035, 1e-13));
  CHECK(close(st.k, 0.056427228, 1e-13));
  CHECK(close(st.diff, 0.0005632149616628403521, 1e-12));
}

TEST_CASE("normalized state at frozen boundary points") {
  NormalizedState lo = normalized_state({0.446, 0.761, 0.852}, kDelta);
  CHECK(lo.case_id == 4);
  CHECK(close(lo.diff, 0.00033528138054844288, 1e-12));
  CHECK(0 < lo.e0);
  CHECK(lo.e0 < lo.e1);
  CHECK(lo.e1 < lo.e2);
  CHECK(2 * lo.e1 > lo.e0 + lo.e2);

  NormalizedState c2 = normalized_state({0.692, 0.761, 0.852}, kDelta);
  CHECK(c2.case_id == 2);
  CHECK(close(c2.diff, 0.0011149980527729800, 1e-12));

  NormalizedState c3 = normalized_state({0.692, 0.814, 0.863}, kDelta);
  CHECK(c3.case_id == 3);
  CHECK(close(c3.diff, 0.00052234181619699963, 1e-12));
}

TEST_CASE("partition fractions sum to one") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    NormalizedState st = normalized_state(random_point(rng), kDelta);
    CHECK(std::abs(st.n0 + st.n1 + st.n2 - 1.0) < 1e-14);
  }
}

TEST_CASE("domain guard") {
  // far outside the box the denominator e1 - e0 goes nonpositive
  CHECK_THROWS_AS(normalized_state({0.05, 0.78, 0.3}, kDelta), GridDomainError);
}

TEST_CASE("analytic gradients match central differences") {
  std::mt19937_64 rng(13);
  const FuncId ids[] = {FuncId::e0, FuncId::e1, FuncId::e2, FuncId::n0, FuncId::n1, FuncId::n2,
                        FuncId::b,  FuncId::k,  FuncId::g1, FuncId::g2, FuncId::g3, FuncId::g4};
  for (int i = 0; i < 500; ++i) {
    ParamPoint p = random_point(rng);
    for (FuncId id : ids) {
      Grad gr = gradient(p, kDelta, id);
      double got[3] = {gr.a, gr.t, gr.u};
      for (int axis = 0; axis < 3; ++axis) {
        double fd = fd_partial(p, id, axis);
        CHECK(std::abs(got[axis] - fd) <=
              1e-5 * std::max({1.0, std::abs(got[axis]), std::abs(fd)}));
      }
    }
  }
}

TEST_CASE("gradient of the partition identity vanishes") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 50; ++i) {
    ParamPoint p = random_point(rng);
    Grad g0 = gradient(p, kDelta, FuncId::n0);
    Grad g1 = gradient(p, kDelta, FuncId::n1);
    Grad g2 = gradient(p, kDelta, FuncId::n2);
    CHECK(std::abs(g0.a + g1.a + g2.a) < 1e-9);
    CHECK(std::abs(g0.t + g1.t + g2.t) < 1e-9);
    CHECK(std::abs(g0.u + g1.u + g2.u) < 1e-9);
  }
}

TEST_CASE("axis construction anchors and endpoints") {
  GridSpec spec;
  spec.h = Rat(1, 100);
  GridAxes axes = build_axes(spec);
  // alpha: 0.446 + i/100 up to 0.686, then 0.692 appended off-step
  CHECK(axes.alpha.size() == 26);
  CHECK(axes.alpha.front() == 0.446);
  CHECK(axes.alpha.back() == 0.692);
  // mu: 0.852 to 0.863 with the endpoint appended
  CHECK(axes.mu.size() == 3);
  CHECK(axes.mu.back() == 0.863);

  SUBCASE("coarse axes are subsets of finer ones, bit for bit") {
    GridSpec fine;
    fine.h = Rat(1, 1000);
    GridAxes fa = build_axes(fine);
    for (double x : axes.alpha)
      CHECK(std::find(fa.alpha.begin(), fa.alpha.end(), x) != fa.alpha.end());
  }
  SUBCASE("degenerate single-axis box") {
    GridSpec deg;
    deg.h = Rat(1, 100);
    deg.box.lo[0] = deg.box.hi[0] = Rat(1, 2);
    GridAxes da = build_axes(deg);
    CHECK(da.alpha.size() == 1);
    SweepOutcome sw = sweep(deg);
    CHECK(sw.points == da.total());
    CHECK(sw.min_diff > 0);
  }
}

TEST_CASE("coarse sweep meets the margin and refines monotonically") {
  GridSpec coarse;
  coarse.h = Rat(1, 100);
  coarse.threads = 2;
  SweepOutcome sc = sweep(coarse);
  CHECK(sc.points == build_axes(coarse).total());
  CHECK(sc.sign_conditions_ok);
  CHECK(sc.min_diff >= 0.00022);

  GridSpec mid;
  mid.h = Rat(1, 1000);
  mid.threads = 2;
  SweepOutcome sm = sweep(mid);
  CHECK(sm.min_diff >= 0.00022);
  CHECK(sc.min_diff >= sm.min_diff);  // shared anchoring makes refinement monotone

  std::uint64_t total = 0;
  for (auto c : sm.case_histogram) total += c;
  CHECK(total == sm.points);
  CHECK(sm.case_histogram[0] == 0);  // piece 1 never selected inside the box
  CHECK(sm.case_histogram[1] > 0);
  CHECK(sm.case_histogram[2] > 0);
  CHECK(sm.case_histogram[3] > 0);

  CHECK(sm.spot_check_max_delta < 1e-12);
  CHECK(std::abs(sm.min_diff - 0.00022748043437328253) < 1e-15);
}

TEST_CASE("piece continuity across case boundaries") {
  std::mt19937_64 rng(31);
  int checked_23 = 0, checked_34 = 0;
  auto threshold_gap = [&](const ParamPoint& p, int which) {
    NormalizedState st = normalized_state(p, kDelta);
    double th = which == 2 ? st.n0 * (st.n0 / 2 + st.n1)
                           : st.n0 * (st.n0 / 2 + st.n1 + st.n2);
    return st.b - th;
  };
  for (int attempts = 0; attempts < 200000 && checked_23 + checked_34 < 1000; ++attempts) {
    ParamPoint p = random_point(rng);
    for (int which : {2, 3}) {
      ParamPoint lo = p, hi = p;
      lo.tau = 0.761;
      hi.tau = 0.814;
      double flo = threshold_gap(lo, which), fhi = threshold_gap(hi, which);
      if ((flo < 0) == (fhi < 0)) continue;
      for (int it = 0; it < 80; ++it) {
        ParamPoint mid = p;
        mid.tau = 0.5 * (lo.tau + hi.tau);
        ((threshold_gap(mid, which) < 0) == (flo < 0) ? lo : hi).tau = mid.tau;
      }
      ParamPoint bp = p;
      bp.tau = 0.5 * (lo.tau + hi.tau);
      double ga = func_value(bp, kDelta, which == 2 ? FuncId::g2 : FuncId::g3);
      double gb = func_value(bp, kDelta, which == 2 ? FuncId::g3 : FuncId::g4);
      CHECK(std::abs(ga - gb) < 1e-12);
      (which == 2 ? checked_23 : checked_34) += 1;
    }
  }
  CHECK(checked_23 > 0);
  CHECK(checked_34 > 0);

  SUBCASE("first threshold, checked on the formulas directly") {
    std::mt19937_64 rng2(37);
    for (int i = 0; i < 200; ++i) {
      ParamPoint p = random_point(rng2);
      NormalizedState st = normalized_state(p, kDelta);
      auto pieces = piece_values_with_b(p, kDelta, st.n0 * st.n0 / 2);
      CHECK(std::abs(pieces[0] - pieces[1]) < 1e-12);
    }
  }
}

TEST_CASE("constituent maxima stay within the reference table") {
  GridSpec spec;
  spec.h = Rat(1, 500);  // 0.002 grid keeps this test quick
  spec.threads = 2;
  ConstituentBounds tb = constituent_bounds(spec);
  SweepOutcome sw = sweep(spec);
  CertificateResult cert = certificate(spec, sw, tb);
  for (const CeilingEntry& e : compare_ceilings(tb, cert)) {
    INFO(e.name << " = " << e.value << " vs " << e.reference);
    CHECK(e.ok);
  }
  CHECK(tb.grad_k <= 0.187);
  CHECK(tb.grad_n0_composite <= 7.589);
  CHECK(tb.grad_n1_composite <= 1 + 7.589 + 0.783);
}

TEST_CASE("certificate arithmetic") {
  GridSpec spec;
  spec.h = Rat(1, 1000);
  spec.threads = 2;
  SweepOutcome sw = sweep(spec);
  ConstituentBounds tb = constituent_bounds(spec);

  SUBCASE("coarse step fails the mean-value criterion") {
    CertificateResult cr = certificate(spec, sw, tb);
    CHECK(cr.min_diff_ok);
    CHECK(cr.rho_over_h == doctest::Approx(0.22));
    CHECK_FALSE(cr.verbatim);
    CHECK_FALSE(cr.conservative);
  }
  SUBCASE("the production step passes it") {
    // with h = 1e-5 the ratio is 22 against a composite near 15.2
    GridSpec fine = spec;
    fine.h = Rat(1, 100000);
    CertificateResult cr = certificate(fine, sw, tb);
    CHECK(cr.rho_over_h == doctest::Approx(22.0));
    CHECK(cr.composite < 22.0);
    CHECK(cr.verbatim);
    CHECK(cr.conservative);
  }
}

TEST_CASE("tau ceiling is consistent with the t_av and edge-count ceilings") {
  const double d = kDelta;
  double tav_hat = (2 - 6 * d + 9 * d * d - 3 * d * d * d) / (2 - 2 * d + d * d);
  double tau_max = (tav_hat - 0.554 * (1 - 2 * d)) / 0.446;
  CHECK(std::abs(tau_max - 0.814) <= 1e-3);
}
