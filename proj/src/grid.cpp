#include "tridecomp/grid.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace tridecomp {

double Grad::norm() const { return std::sqrt(a * a + t * t + u * u); }

namespace {

template <typename S>
struct VecT {
  S a{}, t{}, u{};
  VecT operator+(const VecT& o) const { return {a + o.a, t + o.t, u + o.u}; }
  VecT operator-(const VecT& o) const { return {a - o.a, t - o.t, u - o.u}; }
  VecT operator*(S c) const { return {a * c, t * c, u * c}; }
  S norm() const {
    using std::sqrt;
    return sqrt(a * a + t * t + u * u);
  }
};

template <typename S>
VecT<S> operator*(S c, const VecT<S>& v) {
  return v * c;
}

// Constituents and, when requested, their analytic gradients.
template <typename S>
struct KernelT {
  S s, e0, e1, e2, num, den, n0, n1, n2, b, k;
  S th1, th2, th3;
  S g;
  int case_id;
  VecT<S> ds, de0, de1, de2, dnum, dden, dn0, dn1, dn2, db, dk;

  static KernelT eval(S a, S t, S u, S d, bool with_grads) {
    using std::sqrt;
    KernelT kn{};
    const S au = a * u;
    kn.s = sqrt(au);
    kn.e2 = au / 2;
    kn.e1 = au / 2 - d / 2 * kn.s;
    kn.e0 = (1 - d) * (1 - 2 * d) / 2 - (1 - a) * u / 2;
    kn.den = kn.e1 - kn.e0;
    if (!(kn.den > 0)) throw GridDomainError("e1 - e0 is not positive at this point");
    kn.num = au / 2 * (1 - d - t) + d * d / 4 * kn.s;
    kn.n0 = kn.num / kn.den;
    kn.n2 = 1 + d / 2 - kn.s;
    kn.n1 = 1 - kn.n0 - kn.n2;
    kn.b = (1 - a) * u / 2;

    kn.th1 = kn.n0 * kn.n0 / 2;
    kn.th2 = kn.n0 * (kn.n0 / 2 + kn.n1);
    kn.th3 = kn.n0 * (kn.n0 / 2 + kn.n1 + kn.n2);
    if (kn.b <= kn.th1) {
      kn.case_id = 1;
      kn.g = 2 * kn.b * kn.e0;
    } else if (kn.b <= kn.th2) {
      kn.case_id = 2;
      kn.g = kn.n0 * kn.n0 * kn.e0 + (kn.b - kn.th1) * (kn.e0 + kn.e1);
    } else if (kn.b <= kn.th3) {
      kn.case_id = 3;
      kn.g = kn.n0 * kn.n0 * kn.e0 + kn.n0 * kn.n1 * (kn.e0 + kn.e1) +
             (kn.b - kn.th2) * (kn.e0 + kn.e2);
    } else {
      kn.case_id = 4;
      kn.g = kn.n0 * kn.n0 * kn.e0 + kn.n0 * kn.n1 * (kn.e0 + kn.e1) +
             kn.n0 * kn.n2 * (kn.e0 + kn.e2) + 2 * (kn.b - kn.th3) * kn.e1;
    }
    const S cslope = S(3) / 2 * (1 - d);
    const S tshift = 1 - 2 * d;
    kn.k = a * (1 - a) * (u / 2) * (u / 2 + cslope * (t - tshift));

    if (with_grads) {
      kn.ds = {u / (2 * kn.s), S(0), a / (2 * kn.s)};
      kn.de2 = {u / 2, S(0), a / 2};
      kn.de1 = {u / 2 - d / 2 * kn.ds.a, S(0), a / 2 - d / 2 * kn.ds.u};
      kn.de0 = {u / 2, S(0), -(1 - a) / 2};
      kn.dn2 = {-kn.ds.a, S(0), -kn.ds.u};
      kn.dnum = {u / 2 * (1 - d - t) + d * d / 4 * kn.ds.a, -au / 2,
                 a / 2 * (1 - d - t) + d * d / 4 * kn.ds.u};
      kn.dden = kn.de1 - kn.de0;
      kn.dn0 = (kn.dnum * kn.den - kn.num * kn.dden) * (1 / (kn.den * kn.den));
      kn.dn1 = VecT<S>{} - kn.dn0 - kn.dn2;
      kn.db = {-u / 2, S(0), (1 - a) / 2};
      const S f = u / 2, g2 = u / 2 + cslope * (t - tshift);
      kn.dk = {(1 - 2 * a) * f * g2, a * (1 - a) * f * cslope, a * (1 - a) * (f + g2) / 2};
    }
    return kn;
  }

  S piece(int which) const {
    switch (which) {
      case 1:
        return 2 * b * e0;
      case 2:
        return n0 * n0 * e0 + (b - th1) * (e0 + e1);
      case 3:
        return n0 * n0 * e0 + n0 * n1 * (e0 + e1) + (b - th2) * (e0 + e2);
      default:
        return n0 * n0 * e0 + n0 * n1 * (e0 + e1) + n0 * n2 * (e0 + e2) + 2 * (b - th3) * e1;
    }
  }

  VecT<S> piece_grad(int which) const {
    const VecT<S> common = 2 * (n0 * e0) * dn0 + (n0 * n0) * de0;
    switch (which) {
      case 1:
        return (e0 * db + b * de0) * S(2);
      case 2:
        return common + (e0 + e1) * (db - n0 * dn0) + (b - th1) * (de0 + de1);
      case 3: {
        VecT<S> r = common + (e0 + e1) * (n1 * dn0 + n0 * dn1) + (n0 * n1) * (de0 + de1);
        VecT<S> dth2 = (n0 / 2 + n1) * dn0 + n0 * (dn0 * (S(1) / 2) + dn1);
        r = r + (e0 + e2) * (db - dth2) + (b - th2) * (de0 + de2);
        return r;
      }
      default: {
        VecT<S> r = common + (e0 + e1) * (n1 * dn0 + n0 * dn1) + (n0 * n1) * (de0 + de1);
        r = r + (e0 + e2) * (n2 * dn0 + n0 * dn2) + (n0 * n2) * (de0 + de2);
        VecT<S> dth3 = (n0 / 2 + n1 + n2) * dn0 + n0 * (dn0 * (S(1) / 2) + dn1 + dn2);
        r = r + (2 * e1) * (db - dth3) + (2 * (b - th3)) * de1;
        return r;
      }
    }
  }
};

using Kernel = KernelT<double>;
using KernelL = KernelT<long double>;

}  // namespace

NormalizedState normalized_state(const ParamPoint& p, double delta) {
  Kernel kn = Kernel::eval(p.alpha, p.tau, p.mu, delta, false);
  NormalizedState st;
  st.e0 = kn.e0;
  st.e1 = kn.e1;
  st.e2 = kn.e2;
  st.n0 = kn.n0;
  st.n1 = kn.n1;
  st.n2 = kn.n2;
  st.b = kn.b;
  st.g = kn.g;
  st.k = kn.k;
  st.diff = kn.g - kn.k;
  st.case_id = kn.case_id;
  return st;
}

double func_value(const ParamPoint& p, double delta, FuncId which) {
  Kernel kn = Kernel::eval(p.alpha, p.tau, p.mu, delta, false);
  switch (which) {
    case FuncId::e0: return kn.e0;
    case FuncId::e1: return kn.e1;
    case FuncId::e2: return kn.e2;
    case FuncId::n0: return kn.n0;
    case FuncId::n1: return kn.n1;
    case FuncId::n2: return kn.n2;
    case FuncId::b: return kn.b;
    case FuncId::k: return kn.k;
    case FuncId::g1: return kn.piece(1);
    case FuncId::g2: return kn.piece(2);
    case FuncId::g3: return kn.piece(3);
    case FuncId::g4: return kn.piece(4);
  }
  throw std::logic_error("unknown function id");
}

Grad gradient(const ParamPoint& p, double delta, FuncId which) {
  Kernel kn = Kernel::eval(p.alpha, p.tau, p.mu, delta, true);
  VecT<double> v;
  switch (which) {
    case FuncId::e0: v = kn.de0; break;
    case FuncId::e1: v = kn.de1; break;
    case FuncId::e2: v = kn.de2; break;
    case FuncId::n0: v = kn.dn0; break;
    case FuncId::n1: v = kn.dn1; break;
    case FuncId::n2: v = kn.dn2; break;
    case FuncId::b: v = kn.db; break;
    case FuncId::k: v = kn.dk; break;
    case FuncId::g1: v = kn.piece_grad(1); break;
    case FuncId::g2: v = kn.piece_grad(2); break;
    case FuncId::g3: v = kn.piece_grad(3); break;
    case FuncId::g4: v = kn.piece_grad(4); break;
  }
  return {v.a, v.t, v.u};
}

std::array<double, 4> piece_values_with_b(const ParamPoint& p, double delta, double b) {
  Kernel kn = Kernel::eval(p.alpha, p.tau, p.mu, delta, false);
  kn.b = b;
  return {kn.piece(1), kn.piece(2), kn.piece(3), kn.piece(4)};
}

Box Box::certified() {
  Box b;
  b.lo[0] = Rat(446, 1000);
  b.hi[0] = Rat(692, 1000);
  b.lo[1] = Rat(761, 1000);
  b.hi[1] = Rat(814, 1000);
  b.lo[2] = Rat(852, 1000);
  b.hi[2] = Rat(863, 1000);
  return b;
}

GridAxes build_axes(const GridSpec& spec) {
  if (!(spec.h > 0)) throw std::invalid_argument("grid step must be positive");
  GridAxes axes;
  auto build = [&](const Rat& lo, const Rat& hi) {
    if (hi < lo) throw std::invalid_argument("empty axis range");
    std::vector<double> coords;
    BigInt steps = floor_rat((hi - lo) / spec.h);
    std::int64_t count = checked_int64(steps) + 1;
    coords.reserve(static_cast<std::size_t>(count) + 1);
    for (std::int64_t i = 0; i < count; ++i) coords.push_back(to_double(lo + i * spec.h));
    if (lo + (count - 1) * spec.h < hi) coords.push_back(to_double(hi));
    return coords;
  };
  axes.alpha = build(spec.box.lo[0], spec.box.hi[0]);
  axes.tau = build(spec.box.lo[1], spec.box.hi[1]);
  axes.mu = build(spec.box.lo[2], spec.box.hi[2]);
  return axes;
}

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

struct ChunkResult {
  bool any = false;
  double min_diff = 0;
  std::size_t argmin[3] = {0, 0, 0};
  int argmin_case = 0;
  std::array<std::uint64_t, 4> histogram{0, 0, 0, 0};
  bool sign_ok = true;
  std::size_t sign_violation[3] = {0, 0, 0};
  std::vector<SmallPoint> smallest;  // heap, largest diff on top
};

bool small_less(const SmallPoint& x, const SmallPoint& y) {
  if (x.diff != y.diff) return x.diff < y.diff;
  if (x.i != y.i) return x.i < y.i;
  if (x.j != y.j) return x.j < y.j;
  return x.l < y.l;
}

}  // namespace

SweepOutcome sweep(const GridSpec& spec) {
  const auto t0 = std::chrono::steady_clock::now();
  GridAxes axes = build_axes(spec);
  const std::size_t na = axes.alpha.size(), nt = axes.tau.size(), nu = axes.mu.size();
  const int threads = resolve_threads(spec.threads);
  const std::size_t keep = static_cast<std::size_t>(std::max(spec.track_smallest, 0));

  // chunks are contiguous alpha-index ranges; merged in chunk order
  const std::size_t chunk_count = std::min<std::size_t>(na, static_cast<std::size_t>(threads) * 8);
  std::vector<ChunkResult> results(chunk_count);
  std::atomic<std::size_t> next{0};
  const double d = spec.delta;

  auto run_chunk = [&](std::size_t ci) {
    ChunkResult& r = results[ci];
    const std::size_t i_begin = ci * na / chunk_count;
    const std::size_t i_end = (ci + 1) * na / chunk_count;
    auto heap_cmp = [](const SmallPoint& x, const SmallPoint& y) { return small_less(x, y); };
    for (std::size_t i = i_begin; i < i_end; ++i) {
      const double a = axes.alpha[i];
      for (std::size_t j = 0; j < nt; ++j) {
        const double t = axes.tau[j];
        for (std::size_t l = 0; l < nu; ++l) {
          Kernel kn = Kernel::eval(a, t, axes.mu[l], d, false);
          const double diff = kn.g - kn.k;
          ++r.histogram[static_cast<std::size_t>(kn.case_id - 1)];
          if (!r.any || diff < r.min_diff) {
            r.any = true;
            r.min_diff = diff;
            r.argmin[0] = i;
            r.argmin[1] = j;
            r.argmin[2] = l;
            r.argmin_case = kn.case_id;
          }
          if (r.sign_ok &&
              !(0 < kn.e0 && kn.e0 < kn.e1 && kn.e1 < kn.e2 && 2 * kn.e1 > kn.e0 + kn.e2)) {
            r.sign_ok = false;
            r.sign_violation[0] = i;
            r.sign_violation[1] = j;
            r.sign_violation[2] = l;
          }
          if (keep > 0) {
            SmallPoint sp{diff, kn.g, kn.k, static_cast<std::uint32_t>(i),
                          static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(l),
                          kn.case_id};
            if (r.smallest.size() < keep) {
              r.smallest.push_back(sp);
              std::push_heap(r.smallest.begin(), r.smallest.end(), heap_cmp);
            } else if (small_less(sp, r.smallest.front())) {
              std::pop_heap(r.smallest.begin(), r.smallest.end(), heap_cmp);
              r.smallest.back() = sp;
              std::push_heap(r.smallest.begin(), r.smallest.end(), heap_cmp);
            }
          }
        }
      }
    }
  };

  auto worker = [&] {
    for (;;) {
      std::size_t ci = next.fetch_add(1);
      if (ci >= chunk_count) return;
      run_chunk(ci);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  SweepOutcome out;
  out.points = axes.total();
  bool have = false;
  for (std::size_t ci = 0; ci < chunk_count; ++ci) {
    const ChunkResult& r = results[ci];
    if (!r.any) continue;
    for (int c = 0; c < 4; ++c) out.case_histogram[c] += r.histogram[c];
    if (!have || r.min_diff < out.min_diff) {
      have = true;
      out.min_diff = r.min_diff;
      std::copy(r.argmin, r.argmin + 3, out.argmin);
      out.argmin_case = r.argmin_case;
    }
    if (!r.sign_ok && out.sign_conditions_ok) {
      out.sign_conditions_ok = false;
      out.sign_violation = ParamPoint{axes.alpha[r.sign_violation[0]],
                                      axes.tau[r.sign_violation[1]],
                                      axes.mu[r.sign_violation[2]]};
    }
    out.smallest.insert(out.smallest.end(), r.smallest.begin(), r.smallest.end());
  }
  out.argmin_point =
      ParamPoint{axes.alpha[out.argmin[0]], axes.tau[out.argmin[1]], axes.mu[out.argmin[2]]};
  std::sort(out.smallest.begin(), out.smallest.end(), small_less);
  if (out.smallest.size() > keep) out.smallest.resize(keep);

  // extended-precision spot check of the lowest-margin points
  long double max_delta = 0;
  for (const SmallPoint& sp : out.smallest) {
    KernelL kn = KernelL::eval(static_cast<long double>(axes.alpha[sp.i]),
                               static_cast<long double>(axes.tau[sp.j]),
                               static_cast<long double>(axes.mu[sp.l]),
                               static_cast<long double>(d), false);
    long double delta_ld = (kn.g - kn.k) - static_cast<long double>(sp.diff);
    max_delta = std::max(max_delta, std::abs(delta_ld));
  }
  out.spot_check_max_delta = static_cast<double>(max_delta);

  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

ConstituentBounds constituent_bounds(const GridSpec& spec) {
  GridAxes axes = build_axes(spec);
  const std::size_t na = axes.alpha.size(), nt = axes.tau.size(), nu = axes.mu.size();
  const int threads = resolve_threads(spec.threads);
  const double d = spec.delta;

  struct Acc {
    ConstituentBounds t;
    bool any = false;
  };
  const std::size_t chunk_count = std::min<std::size_t>(na, static_cast<std::size_t>(threads) * 8);
  std::vector<Acc> accs(chunk_count);
  std::atomic<std::size_t> next{0};

  auto run_chunk = [&](std::size_t ci) {
    Acc& acc = accs[ci];
    ConstituentBounds& tb = acc.t;
    tb.min_n0_den = 0;
    const std::size_t i_begin = ci * na / chunk_count;
    const std::size_t i_end = (ci + 1) * na / chunk_count;
    auto upd = [](double& slot, double v) { slot = std::max(slot, v); };
    for (std::size_t i = i_begin; i < i_end; ++i) {
      const double a = axes.alpha[i];
      for (std::size_t j = 0; j < nt; ++j) {
        const double t = axes.tau[j];
        for (std::size_t l = 0; l < nu; ++l) {
          Kernel kn = Kernel::eval(a, t, axes.mu[l], d, true);
          upd(tb.abs_e[0], std::abs(kn.e0));
          upd(tb.abs_e[1], std::abs(kn.e1));
          upd(tb.abs_e[2], std::abs(kn.e2));
          upd(tb.grad_e[0], kn.de0.norm());
          upd(tb.grad_e[1], kn.de1.norm());
          upd(tb.grad_e[2], kn.de2.norm());
          upd(tb.abs_n[0], std::abs(kn.n0));
          upd(tb.abs_n[1], std::abs(kn.n1));
          upd(tb.abs_n[2], std::abs(kn.n2));
          upd(tb.grad_n2, kn.dn2.norm());
          upd(tb.abs_n0_num, std::abs(kn.num));
          if (!acc.any || std::abs(kn.den) < tb.min_n0_den) tb.min_n0_den = std::abs(kn.den);
          upd(tb.grad_n0_den, kn.dden.norm());
          // numerator gradient per its two-term split
          const double au = a * axes.mu[l];
          const double s = std::sqrt(au);
          VecT<double> g_poly{axes.mu[l] / 2 * (1 - d - t), -au / 2, a / 2 * (1 - d - t)};
          VecT<double> g_root{d * d / 4 * axes.mu[l] / (2 * s), 0, d * d / 4 * a / (2 * s)};
          upd(tb.grad_n0_num, g_poly.norm() + g_root.norm());
          upd(tb.abs_b, std::abs(kn.b));
          upd(tb.grad_b, kn.db.norm());
          upd(tb.grad_k, kn.dk.norm());
          acc.any = true;
        }
      }
    }
  };
  auto worker = [&] {
    for (;;) {
      std::size_t ci = next.fetch_add(1);
      if (ci >= chunk_count) return;
      run_chunk(ci);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  ConstituentBounds tb;
  bool any = false;
  auto upd = [](double& slot, double v) { slot = std::max(slot, v); };
  for (const Acc& acc : accs) {
    if (!acc.any) continue;
    for (int i = 0; i < 3; ++i) {
      upd(tb.abs_e[i], acc.t.abs_e[i]);
      upd(tb.grad_e[i], acc.t.grad_e[i]);
      upd(tb.abs_n[i], acc.t.abs_n[i]);
    }
    upd(tb.grad_n2, acc.t.grad_n2);
    upd(tb.abs_n0_num, acc.t.abs_n0_num);
    tb.min_n0_den = any ? std::min(tb.min_n0_den, acc.t.min_n0_den) : acc.t.min_n0_den;
    upd(tb.grad_n0_den, acc.t.grad_n0_den);
    upd(tb.grad_n0_num, acc.t.grad_n0_num);
    upd(tb.abs_b, acc.t.abs_b);
    upd(tb.grad_b, acc.t.grad_b);
    upd(tb.grad_k, acc.t.grad_k);
    any = true;
  }
  tb.grad_n0_composite =
      tb.grad_n0_num / tb.min_n0_den + tb.abs_n0_num * tb.grad_n0_den / (tb.min_n0_den * tb.min_n0_den);
  tb.grad_n1_composite = 1 + tb.grad_n0_composite + tb.grad_n2;
  return tb;
}

CertificateResult certificate(const GridSpec& spec, const SweepOutcome& sw, const ConstituentBounds& tb) {
  CertificateResult cr;
  const double e0 = tb.abs_e[0], e1 = tb.abs_e[1], e2 = tb.abs_e[2];
  const double de0 = tb.grad_e[0], de1 = tb.grad_e[1], de2 = tb.grad_e[2];
  const double n0 = tb.abs_n[0], n1 = tb.abs_n[1], n2 = tb.abs_n[2];
  const double dn0 = tb.grad_n0_composite, dn1 = tb.grad_n1_composite, dn2 = tb.grad_n2;
  const double b = tb.abs_b, db = tb.grad_b;

  cr.grad_g[0] = 2 * (b * de0 + e0 * db);
  cr.grad_g[1] = n0 * (n0 * de0 + 2 * e0 * dn0) + (b + 0.5 * n0 * n0) * (de0 + de1) +
                 (e0 + e1) * (db + n0 * dn0);
  cr.grad_g[2] = n0 * (n0 * de0 + 2 * e0 * dn0) + n0 * n1 * (de0 + de1) +
                 (e0 + e1) * (n0 * dn1 + n1 * dn0) +
                 (b + n0 * (0.5 * n0 + n1)) * (de0 + de2) +
                 (e0 + e2) * (db + n0 * (0.5 * dn0 + dn1) + (0.5 * n0 + n1) * dn0);
  cr.grad_g[3] = n0 * (n0 * de0 + 2 * e0 * dn0) + n0 * n1 * (de0 + de1) +
                 (e0 + e1) * (n0 * dn1 + n1 * dn0) + n0 * n2 * (de0 + de2) +
                 (e0 + e2) * (n0 * dn2 + n2 * dn0) +
                 (2 * b + n0 * (n0 + 2 * n1 + 2 * n2)) * de1 +
                 e1 * (2 * db + n0 * (dn0 + 2 * dn1 + 2 * dn2) + (n0 + 2 * n1 + 2 * n2) * dn0);

  cr.composite = *std::max_element(cr.grad_g, cr.grad_g + 4) + tb.grad_k;
  cr.rho_over_h = spec.rho / to_double(spec.h);
  cr.min_diff_ok = sw.min_diff >= spec.rho;
  cr.verbatim = cr.min_diff_ok && cr.rho_over_h > cr.composite;
  cr.conservative = cr.min_diff_ok && spec.rho / (to_double(spec.h) * std::sqrt(3.0) / 2) > cr.composite;
  return cr;
}

std::vector<CeilingEntry> compare_ceilings(const ConstituentBounds& t, const CertificateResult& c,
                                        const ReferenceCeilings& ref) {
  std::vector<CeilingEntry> out;
  auto cap = [&](std::string name, double v, double r) {
    out.push_back({std::move(name), v, r, v <= r});
  };
  for (int i = 0; i < 3; ++i) {
    cap("abs_e" + std::to_string(i), t.abs_e[i], ref.abs_e[i]);
    cap("grad_e" + std::to_string(i), t.grad_e[i], ref.grad_e[i]);
    cap("abs_n" + std::to_string(i), t.abs_n[i], ref.abs_n[i]);
  }
  cap("grad_n0_composite", t.grad_n0_composite, ref.grad_n[0]);
  cap("grad_n1_composite", t.grad_n1_composite, ref.grad_n[1]);
  cap("grad_n2", t.grad_n2, ref.grad_n[2]);
  cap("abs_b", t.abs_b, ref.abs_b);
  cap("grad_b", t.grad_b, ref.grad_b);
  cap("grad_k", t.grad_k, ref.grad_k);
  cap("abs_n0_num", t.abs_n0_num, ref.abs_n0_num);
  out.push_back({"min_n0_den", t.min_n0_den, ref.min_n0_den, t.min_n0_den >= ref.min_n0_den});
  cap("grad_n0_den", t.grad_n0_den, ref.grad_n0_den);
  cap("grad_n0_num", t.grad_n0_num, ref.grad_n0_num);
  for (int i = 0; i < 4; ++i)
    cap("grad_g" + std::to_string(i + 1), c.grad_g[i], ref.grad_g[i]);
  cap("composite", c.composite, ref.composite);
  return out;
}

}  // namespace tridecomp
