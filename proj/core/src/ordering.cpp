#include "hyperfactor/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "hyperfactor/error.hpp"

namespace hyperfactor {

namespace {

using cld = std::complex<long double>;

std::vector<cld> reciprocals(const std::vector<Complex>& zeros) {
  std::vector<cld> v;
  v.reserve(zeros.size());
  for (const auto& a : zeros) v.push_back((Complex(1L) / a).to_complex_long_double());
  return v;
}

long double prefix_max_ld(const std::vector<cld>& v, const std::vector<std::size_t>& perm) {
  cld s = 0.0L;
  long double m = 0.0L;
  for (std::size_t i : perm) {
    s += v[i];
    m = std::max(m, std::abs(s));
  }
  return m;
}

std::vector<std::size_t> exhaustive(const std::vector<cld>& v) {
  std::vector<std::size_t> perm(v.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> best = perm;
  long double best_val = prefix_max_ld(v, perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    long double val = prefix_max_ld(v, perm);
    if (val < best_val) {
      best_val = val;
      best = perm;
    }
  }
  return best;
}

// Depth-first search, children visited in order of the resulting prefix
// modulus; the first leaf reached is the plain greedy ordering.
struct Dfs {
  const std::vector<cld>& v;
  long double limit;
  std::size_t budget;
  std::size_t visits = 0;
  std::vector<char> used;
  std::vector<std::size_t> path;

  bool run(cld s) {
    if (path.size() == v.size()) return true;
    if (++visits > budget) return false;
    std::vector<std::pair<long double, std::size_t>> kids;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (used[i]) continue;
      long double m = std::abs(s + v[i]);
      if (m <= limit) kids.emplace_back(m, i);
    }
    std::sort(kids.begin(), kids.end());
    for (const auto& [m, i] : kids) {
      used[i] = 1;
      path.push_back(i);
      if (run(s + v[i])) return true;
      path.pop_back();
      used[i] = 0;
      if (visits > budget) return false;
    }
    return false;
  }
};

std::vector<std::size_t> greedy(const std::vector<cld>& v) {
  std::vector<char> used(v.size(), 0);
  std::vector<std::size_t> out;
  cld s = 0.0L;
  for (std::size_t step = 0; step < v.size(); ++step) {
    std::size_t best = v.size();
    long double bm = 0.0L;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (used[i]) continue;
      long double m = std::abs(s + v[i]);
      if (best == v.size() || m < bm) {
        bm = m;
        best = i;
      }
    }
    used[best] = 1;
    out.push_back(best);
    s += v[best];
  }
  return out;
}

// Half-plane rule: take the unused vector pointing most against the running
// sum (largest magnitude among those with non-positive inner product).
std::vector<std::size_t> halfplane(const std::vector<cld>& v) {
  std::vector<char> used(v.size(), 0);
  std::vector<std::size_t> out;
  cld s = 0.0L;
  for (std::size_t step = 0; step < v.size(); ++step) {
    std::size_t pick = v.size();
    long double pick_mag = -1.0L;
    std::size_t fallback = v.size();
    long double fallback_dot = 0.0L;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (used[i]) continue;
      long double dot = s.real() * v[i].real() + s.imag() * v[i].imag();
      if (dot <= 0.0L && std::abs(v[i]) > pick_mag) {
        pick_mag = std::abs(v[i]);
        pick = i;
      }
      if (fallback == v.size() || dot < fallback_dot) {
        fallback_dot = dot;
        fallback = i;
      }
    }
    if (pick == v.size()) pick = fallback;
    used[pick] = 1;
    out.push_back(pick);
    s += v[pick];
  }
  return out;
}

std::vector<Complex> permute(const std::vector<Complex>& zeros, const std::vector<std::size_t>& perm) {
  std::vector<Complex> out;
  out.reserve(perm.size());
  for (std::size_t i : perm) out.push_back(zeros[i]);
  return out;
}

}  // namespace

Real prefix_reciprocal_max(const std::vector<Complex>& zeros) {
  Complex s;
  Real m;
  for (const auto& a : zeros) {
    s += Complex(1L) / a;
    m = max(m, abs(s));
  }
  return m;
}

Real exhaustive_best_prefix(const std::vector<Complex>& zeros) {
  if (zeros.size() > 10) throw PreconditionError("exhaustive_best_prefix: at most 10 elements");
  std::vector<std::size_t> perm(zeros.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Complex> inv;
  for (const auto& a : zeros) inv.push_back(Complex(1L) / a);
  Real best;
  bool first = true;
  do {
    Complex s;
    Real m;
    for (std::size_t i : perm) {
      s += inv[i];
      m = max(m, abs(s));
    }
    if (first || m < best) best = m;
    first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

OrderingResult order_zeros(const std::vector<Complex>& zeros, const Real& t, const OrderingOptions& opts) {
  OrderingResult res;
  for (const auto& a : zeros) {
    if (a.is_zero()) throw PreconditionError("order_zeros: zero element has no reciprocal");
  }
  const Real limit = sqrt(Real(5L)) * t;
  {
    Real term_max;
    Complex total;
    for (const auto& a : zeros) {
      Complex inv = Complex(1L) / a;
      term_max = max(term_max, abs(inv));
      total += inv;
    }
    res.preconditions_hold = term_max <= t && abs(total) <= t;
  }
  if (zeros.empty()) {
    res.ok = true;
    res.method = "exhaustive";
    return res;
  }
  const std::vector<cld> v = reciprocals(zeros);
  // Slightly inside the limit so long-double rounding cannot push the MPFR
  // check over it.
  const long double lim_ld = limit.to_long_double() * (1.0L - 1e-15L);

  auto finish = [&](const std::vector<std::size_t>& perm, const char* method) {
    res.ordered = permute(zeros, perm);
    res.prefix_max = prefix_reciprocal_max(res.ordered);
    res.ok = res.prefix_max <= limit;
    res.method = method;
  };

  if (zeros.size() <= opts.exhaustive_cutoff) {
    finish(exhaustive(v), "exhaustive");
    return res;
  }
  std::vector<std::size_t> g = greedy(v);
  if (prefix_max_ld(v, g) <= lim_ld) {
    finish(g, "greedy");
    if (res.ok) return res;
  }
  Dfs dfs{v, lim_ld, opts.node_budget, 0, std::vector<char>(v.size(), 0), {}};
  if (dfs.run(0.0L)) {
    finish(dfs.path, "backtrack");
    if (res.ok) return res;
  }
  std::vector<std::size_t> h = halfplane(v);
  // Report whichever of the fallbacks did better.
  if (prefix_max_ld(v, h) <= prefix_max_ld(v, g)) {
    finish(h, "halfplane");
  } else {
    finish(g, "greedy");
  }
  return res;
}

}  // namespace hyperfactor
