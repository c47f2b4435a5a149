#include "hyperfactor/roots.hpp"

#include <algorithm>
#include <cfloat>
#include <climits>
#include <cmath>
#include <complex>

#include "hyperfactor/error.hpp"

namespace hyperfactor {

namespace {

using cld = std::complex<long double>;

constexpr long double kLdEps = LDBL_EPSILON;
// Long-double Aberth sweeps before moving to the working precision.
constexpr int kLdSweeps = 200;
// Sweeps per intermediate rung of the precision ladder.
constexpr int kLadderSweeps = 60;

double log2_abs(const Complex& z) {
  Real a = abs(z);
  if (a.is_zero()) return -HUGE_VAL;
  long e = 0;
  long double m = a.mantissa(e);
  return static_cast<double>(e) + std::log2(static_cast<double>(m));
}

// Upper convex hull of (i, lc[i]) over finite entries; returns vertex indices.
std::vector<std::size_t> upper_hull(const std::vector<double>& lc) {
  std::vector<std::size_t> h;
  for (std::size_t i = 0; i < lc.size(); ++i) {
    if (!std::isfinite(lc[i])) continue;
    while (h.size() >= 2) {
      std::size_t a = h[h.size() - 2], b = h.back();
      double cross = (static_cast<double>(b) - a) * (lc[i] - lc[a]) -
                     (lc[b] - lc[a]) * (static_cast<double>(i) - a);
      if (cross >= 0) {
        h.pop_back();
      } else {
        break;
      }
    }
    h.push_back(i);
  }
  return h;
}

// Starting points from the Newton polygon of the scaled polynomial.
std::vector<cld> initial_points(const std::vector<double>& lc) {
  const std::size_t d = lc.size() - 1;
  std::vector<cld> z;
  z.reserve(d);
  auto hull = upper_hull(lc);
  const long double two_pi = 2.0L * std::acos(-1.0L);
  for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
    std::size_t i0 = hull[s], i1 = hull[s + 1];
    std::size_t cnt = i1 - i0;
    long double rho = std::exp2(static_cast<long double>(lc[i0] - lc[i1]) / static_cast<long double>(cnt));
    if (!std::isfinite(rho) || rho == 0.0L) rho = 1.0L;
    for (std::size_t j = 0; j < cnt; ++j) {
      long double ang = two_pi * (static_cast<long double>(j) / cnt + static_cast<long double>(i0) / d) + 0.7L;
      z.push_back(std::polar(rho, ang));
    }
  }
  return z;
}

struct LdEval {
  cld newton;      // p / p'
  bool converged;  // backward error at long-double noise level
  bool finite;
};

// Newton ratio of a monic-scaled polynomial with long-double coefficients b.
LdEval ld_newton(const std::vector<cld>& b, const std::vector<long double>& babs, cld w) {
  const std::size_t d = b.size() - 1;
  LdEval out{};
  long double aw = std::abs(w);
  if (aw <= 1.0L) {
    cld p = 0.0L, dp = 0.0L;
    long double s = 0.0L;
    for (std::size_t i = d + 1; i-- > 0;) {
      dp = dp * w + p;
      p = p * w + b[i];
      s = s * aw + babs[i];
    }
    out.newton = p / dp;
    out.converged = std::abs(p) <= 8.0L * static_cast<long double>(d + 1) * kLdEps * s;
  } else {
    // Reversed polynomial in y = 1/w avoids overflow for large |w|.
    cld y = 1.0L / w;
    long double ay = 1.0L / aw;
    cld p = 0.0L, dp = 0.0L;
    long double s = 0.0L;
    for (std::size_t i = 0; i <= d; ++i) {
      dp = dp * y + p;
      p = p * y + b[i];
      s = s * ay + babs[i];
    }
    out.newton = w * p / (static_cast<long double>(d) * p - y * dp);
    out.converged = std::abs(p) <= 8.0L * static_cast<long double>(d + 1) * kLdEps * s;
  }
  out.finite = std::isfinite(out.newton.real()) && std::isfinite(out.newton.imag());
  return out;
}

void ld_aberth(const std::vector<cld>& b, std::vector<cld>& w) {
  const std::size_t d = w.size();
  std::vector<long double> babs(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) babs[i] = std::abs(b[i]);
  std::vector<char> done(d, 0);
  for (int sweep = 0; sweep < kLdSweeps; ++sweep) {
    bool all = true;
    for (std::size_t i = 0; i < d; ++i) {
      if (done[i]) continue;
      LdEval ev = ld_newton(b, babs, w[i]);
      if (!ev.finite) {
        done[i] = 1;
        continue;
      }
      if (ev.converged) {
        done[i] = 1;
        continue;
      }
      cld sum = 0.0L;
      for (std::size_t j = 0; j < d; ++j) {
        if (j != i) sum += 1.0L / (w[i] - w[j]);
      }
      cld corr = ev.newton / (1.0L - ev.newton * sum);
      if (!std::isfinite(corr.real()) || !std::isfinite(corr.imag())) {
        done[i] = 1;
        continue;
      }
      w[i] -= corr;
      if (std::abs(corr) <= kLdEps * std::abs(w[i])) done[i] = 1;
      all = false;
    }
    if (all) break;
  }
}

// Allocation-free MPFR scratch for one Aberth sweep.
struct MpScratch {
  mpfr_t vr, vi, dr, di, tr, ti, sr, si, ar, ai, nr, ni, q;

  explicit MpScratch(mpfr_prec_t prec) {
    for (mpfr_ptr x : {vr, vi, dr, di, tr, ti, sr, si, ar, ai, nr, ni, q}) mpfr_init2(x, prec);
  }
  ~MpScratch() {
    for (mpfr_ptr x : {vr, vi, dr, di, tr, ti, sr, si, ar, ai, nr, ni, q}) mpfr_clear(x);
  }
  MpScratch(const MpScratch&) = delete;
  MpScratch& operator=(const MpScratch&) = delete;
};

// (xr + i xi) *= (yr + i yi), using t as scratch.
void cmul_inplace(mpfr_ptr xr, mpfr_ptr xi, mpfr_srcptr yr, mpfr_srcptr yi, mpfr_ptr tr, mpfr_ptr ti) {
  mpfr_fmms(tr, xr, yr, xi, yi, MPFR_RNDN);
  mpfr_fmma(ti, xr, yi, xi, yr, MPFR_RNDN);
  mpfr_swap(xr, tr);
  mpfr_swap(xi, ti);
}

// (xr + i xi) = (ar + i ai) / (br + i bi); q and tr are scratch.
void cdiv(mpfr_ptr xr, mpfr_ptr xi, mpfr_srcptr ar, mpfr_srcptr ai, mpfr_srcptr br, mpfr_srcptr bi, mpfr_ptr q,
          mpfr_ptr tr) {
  mpfr_fmma(q, br, br, bi, bi, MPFR_RNDN);
  mpfr_fmma(tr, ar, br, ai, bi, MPFR_RNDN);
  mpfr_fmms(xi, ai, br, ar, bi, MPFR_RNDN);
  mpfr_div(xr, tr, q, MPFR_RNDN);
  mpfr_div(xi, xi, q, MPFR_RNDN);
}

double log2_mp(mpfr_srcptr re, mpfr_srcptr im) {
  const bool zr = mpfr_zero_p(re) != 0, zi = mpfr_zero_p(im) != 0;
  if (zr && zi) return -HUGE_VAL;
  long er = 0, ei = 0;
  double mr = zr ? 0.0 : mpfr_get_d_2exp(&er, re, MPFR_RNDN);
  double mi = zi ? 0.0 : mpfr_get_d_2exp(&ei, im, MPFR_RNDN);
  long e = std::max(zr ? LONG_MIN : er, zi ? LONG_MIN : ei);
  double a = zr ? 0.0 : std::ldexp(mr, static_cast<int>(std::max(-2000L, er - e)));
  double b = zi ? 0.0 : std::ldexp(mi, static_cast<int>(std::max(-2000L, ei - e)));
  return static_cast<double>(e) + 0.5 * std::log2(a * a + b * b);
}

// log2 of sum |c_i| |z|^i, approximated by the dominant term plus log2(d+1).
double log2_scale(const std::vector<double>& lc, double lz) {
  double best = -HUGE_VAL;
  for (std::size_t i = 0; i < lc.size(); ++i) {
    if (std::isfinite(lc[i])) best = std::max(best, lc[i] + static_cast<double>(i) * lz);
  }
  return best + std::log2(static_cast<double>(lc.size()));
}

// p(z) into (vr, vi) and p'(z) into (dr, di).
void horner(const Poly& p, mpfr_srcptr zr, mpfr_srcptr zim, MpScratch& s) {
  mpfr_set_zero(s.vr, 1);
  mpfr_set_zero(s.vi, 1);
  mpfr_set_zero(s.dr, 1);
  mpfr_set_zero(s.di, 1);
  for (std::size_t k = p.size(); k-- > 0;) {
    cmul_inplace(s.dr, s.di, zr, zim, s.tr, s.ti);
    mpfr_add(s.dr, s.dr, s.vr, MPFR_RNDN);
    mpfr_add(s.di, s.di, s.vi, MPFR_RNDN);
    cmul_inplace(s.vr, s.vi, zr, zim, s.tr, s.ti);
    mpfr_add(s.vr, s.vr, p[k].re.raw(), MPFR_RNDN);
    mpfr_add(s.vi, s.vi, p[k].im.raw(), MPFR_RNDN);
  }
}

struct RungResult {
  bool converged = false;
  // max over roots of log2(sum |c_i||z|^i / |z p'(z)|): bits lost to root
  // conditioning at the final iterate.
  double cond_bits = 0.0;
};

// Aberth sweeps at precision `prec` (z is rounded to it). Converged when
// every root meets the backward-error or step-size test at that precision.
RungResult mp_aberth(const Poly& p, const std::vector<double>& lc, std::vector<Complex>& z, int budget,
                     mpfr_prec_t prec) {
  const std::size_t d = z.size();
  const double pbits = static_cast<double>(prec);
  for (auto& zi : z) {
    mpfr_prec_round(zi.re.raw(), prec, MPFR_RNDN);
    mpfr_prec_round(zi.im.raw(), prec, MPFR_RNDN);
  }
  MpScratch s(prec);
  RungResult res;
  std::vector<char> done(d, 0);
  for (int sweep = 0; sweep < budget; ++sweep) {
    bool all = true;
    for (std::size_t i = 0; i < d; ++i) {
      if (done[i]) continue;
      all = false;
      mpfr_srcptr zr = z[i].re.raw();
      mpfr_srcptr zim = z[i].im.raw();
      horner(p, zr, zim, s);
      const double lz = log2_mp(zr, zim);
      const double lscale = log2_scale(lc, lz);
      if (log2_mp(s.vr, s.vi) <= lscale - pbits + 6.0) {
        res.cond_bits = std::max(res.cond_bits, lscale - lz - log2_mp(s.dr, s.di));
        done[i] = 1;
        continue;
      }
      if (mpfr_zero_p(s.dr) && mpfr_zero_p(s.di)) throw ConvergenceError("roots: vanishing derivative");
      cdiv(s.nr, s.ni, s.vr, s.vi, s.dr, s.di, s.q, s.tr);  // newton = p / p'
      // sum_j 1 / (z_i - z_j)
      mpfr_set_zero(s.sr, 1);
      mpfr_set_zero(s.si, 1);
      for (std::size_t j = 0; j < d; ++j) {
        if (j == i) continue;
        mpfr_sub(s.ar, zr, z[j].re.raw(), MPFR_RNDN);
        mpfr_sub(s.ai, zim, z[j].im.raw(), MPFR_RNDN);
        mpfr_fmma(s.q, s.ar, s.ar, s.ai, s.ai, MPFR_RNDN);
        if (mpfr_zero_p(s.q)) continue;
        mpfr_div(s.ar, s.ar, s.q, MPFR_RNDN);
        mpfr_div(s.ai, s.ai, s.q, MPFR_RNDN);
        mpfr_add(s.sr, s.sr, s.ar, MPFR_RNDN);
        mpfr_sub(s.si, s.si, s.ai, MPFR_RNDN);
      }
      // corr = newton / (1 - newton * sum)
      cmul_inplace(s.sr, s.si, s.nr, s.ni, s.tr, s.ti);
      mpfr_ui_sub(s.sr, 1, s.sr, MPFR_RNDN);
      mpfr_neg(s.si, s.si, MPFR_RNDN);
      cdiv(s.ar, s.ai, s.nr, s.ni, s.sr, s.si, s.q, s.tr);
      if (!mpfr_number_p(s.ar) || !mpfr_number_p(s.ai)) throw OverflowError("roots: non-finite Aberth step");
      mpfr_sub(z[i].re.raw(), z[i].re.raw(), s.ar, MPFR_RNDN);
      mpfr_sub(z[i].im.raw(), z[i].im.raw(), s.ai, MPFR_RNDN);
      if (log2_mp(s.ar, s.ai) <= lz - pbits + 4.0) {
        res.cond_bits = std::max(res.cond_bits, lscale - lz - log2_mp(s.dr, s.di));
        done[i] = 1;
      }
    }
    if (all) break;
  }
  res.converged = true;
  for (char c : done) {
    if (!c) res.converged = false;
  }
  return res;
}

}  // namespace

std::vector<Root> roots(const Poly& p, const RootOptions& opts) {
  if (p.degree() < 1) throw PreconditionError("roots: polynomial must be nonconstant");
  // Exact zeros at the origin.
  std::size_t zeros_at_origin = 0;
  while (p[zeros_at_origin].is_zero()) ++zeros_at_origin;
  std::vector<Complex> tail(p.coeffs().begin() + static_cast<long>(zeros_at_origin), p.coeffs().end());
  Poly q(std::move(tail));
  const std::size_t d = static_cast<std::size_t>(q.degree());

  std::vector<Complex> z;
  if (d == 1) {
    z.push_back(-q[0] / q[1]);
  } else if (d > 1) {
    // Scale z = s w with s = (|c_0| / |c_d|)^{1/d}, normalise to monic.
    Real s = root(abs(q[0]) / abs(q[d]), d);
    std::vector<Complex> bm(d + 1);
    std::vector<double> lb(d + 1);
    Real sp(1L);
    const Complex inv_lead = Complex(1L) / q[d];
    for (std::size_t i = 0; i <= d; ++i) {
      bm[i] = q[i] * inv_lead * sp;
      lb[i] = log2_abs(bm[i]);
      sp *= s;
    }
    std::vector<cld> b(d + 1);
    for (std::size_t i = 0; i <= d; ++i) {
      if (lb[i] > 16000.0) {
        // Out of long-double range: keep direction, clamp magnitude.
        Complex u = bm[i] / abs(bm[i]);
        b[i] = u.to_complex_long_double() * std::exp2(16000.0L);
      } else {
        b[i] = bm[i].to_complex_long_double();
      }
    }
    std::vector<cld> w = initial_points(lb);
    ld_aberth(b, w);

    std::vector<double> lc(d + 1);
    for (std::size_t i = 0; i <= d; ++i) lc[i] = log2_abs(q[i]);
    z.reserve(d);
    for (const auto& wi : w) {
      Complex zi = Complex(wi) * s;
      if (!zi.is_finite()) zi = Complex(s);
      z.push_back(std::move(zi));
    }
    // Precision ladder. A rung whose iterates lose nearly all their bits to
    // root conditioning is followed by one wide enough to resolve them.
    const int budget = std::max(opts.max_sweeps, 1);
    const mpfr_prec_t P = working_precision();
    mpfr_prec_t lev = std::min<mpfr_prec_t>(P, 128);
    for (;;) {
      RungResult rr = mp_aberth(q, lc, z, lev == P ? budget : kLadderSweeps, lev);
      if (lev == P) {
        if (!rr.converged) {
          throw ConvergenceError("roots: no convergence within the sweep budget at " + std::to_string(P) + " bits");
        }
        break;
      }
      mpfr_prec_t next = 2 * lev;
      while (static_cast<double>(next) < rr.cond_bits + 64.0 && next < P) next *= 2;
      lev = std::min(next, P);
    }
  }

  std::vector<Root> out;
  out.reserve(zeros_at_origin + z.size());
  for (std::size_t i = 0; i < zeros_at_origin; ++i) out.push_back({Complex(), Real()});
  for (auto& zi : z) {
    // residual |p(z)| / sum |c_i||z|^i
    Real az = abs(zi);
    Complex val, tmp;
    Real scale;
    for (std::size_t i = p.size(); i-- > 0;) {
      mul_into(tmp, val, zi);
      val = tmp + p[i];
      scale = scale * az + abs(p[i]);
    }
    Real res = scale.is_zero() ? Real() : abs(val) / scale;
    out.push_back({std::move(zi), std::move(res)});
  }
  return out;
}

ModulusBounds min_modulus_bounds(const Poly& p) {
  if (p.degree() < 1) throw PreconditionError("min_modulus_bounds: polynomial must be nonconstant");
  if (p[0].is_zero()) throw PreconditionError("min_modulus_bounds: p(0) = 0");
  const std::size_t d = static_cast<std::size_t>(p.degree());
  std::vector<double> lc(d + 1);
  for (std::size_t i = 0; i <= d; ++i) lc[i] = log2_abs(p[i]);
  ModulusBounds b;
  b.log2_upper = HUGE_VAL;
  for (std::size_t k = 1; k <= d; ++k) {
    if (!std::isfinite(lc[k])) continue;
    double lbinom = (std::lgamma(d + 1.0) - std::lgamma(k + 1.0) - std::lgamma(d - k + 1.0)) / std::log(2.0);
    b.log2_upper = std::min(b.log2_upper, (lbinom + lc[0] - lc[k]) / static_cast<double>(k));
  }
  // log2 sum_{i>=1} |c_i| 2^{t i} is increasing in t; bisect for lc[0].
  auto g = [&](double t) {
    double m = -HUGE_VAL;
    for (std::size_t i = 1; i <= d; ++i) {
      if (std::isfinite(lc[i])) m = std::max(m, lc[i] + t * static_cast<double>(i));
    }
    double s = 0.0;
    for (std::size_t i = 1; i <= d; ++i) {
      if (std::isfinite(lc[i])) s += std::exp2(lc[i] + t * static_cast<double>(i) - m);
    }
    return m + std::log2(s);
  };
  double lo = b.log2_upper - 1.0, hi = b.log2_upper;
  while (g(lo) > lc[0]) lo = 2.0 * lo - hi - 1.0;
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    (g(mid) > lc[0] ? hi : lo) = mid;
  }
  b.log2_lower = lo;
  return b;
}

bool certify_zero_within(const Poly& p, double r, int starts, int steps) {
  const long d = p.degree();
  if (d < 1 || !(r > 0.0) || starts < 1) return false;
  const mpfr_prec_t prec = working_precision();
  const double lr = std::log2(r);
  const double ld = std::log2(static_cast<double>(d));
  const double rho = std::exp2(min_modulus_bounds(p).log2_lower);
  MpScratch s(prec);
  Real zr, zi, wr, wi;
  // Starts: the angles of smallest |p| on the circle |z| = rho.
  const int scan = 8 * starts;
  std::vector<std::pair<double, double>> cand;
  for (int j = 0; j < scan; ++j) {
    const double th = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(scan);
    zr = Real(rho * std::cos(th));
    zi = Real(rho * std::sin(th));
    horner(p, zr.raw(), zi.raw(), s);
    cand.emplace_back(log2_mp(s.vr, s.vi), th);
  }
  std::sort(cand.begin(), cand.end());
  for (int j = 0; j < starts && j < scan; ++j) {
    zr = Real(rho * std::cos(cand[static_cast<std::size_t>(j)].second));
    zi = Real(rho * std::sin(cand[static_cast<std::size_t>(j)].second));
    horner(p, zr.raw(), zi.raw(), s);
    double lv = log2_mp(s.vr, s.vi);
    for (int it = 0; it < steps; ++it) {
      if (mpfr_zero_p(s.dr) && mpfr_zero_p(s.di)) break;
      cdiv(s.nr, s.ni, s.vr, s.vi, s.dr, s.di, s.q, s.tr);
      // Some zero lies within d |p / p'| of z.
      const double lz = log2_mp(zr.raw(), zi.raw());
      const double lstep = log2_mp(s.nr, s.ni);
      if ((std::exp2(lz - lr) + std::exp2(ld + lstep - lr)) * (1.0 + 1e-9) < 1.0) return true;
      // Damped Newton: halve the step until |p| decreases.
      bool moved = false;
      for (int h = 0; h < 30 && !moved; ++h) {
        mpfr_sub(wr.raw(), zr.raw(), s.nr, MPFR_RNDN);
        mpfr_sub(wi.raw(), zi.raw(), s.ni, MPFR_RNDN);
        horner(p, wr.raw(), wi.raw(), s);
        const double lw = log2_mp(s.vr, s.vi);
        if (lw < lv) {
          std::swap(zr, wr);
          std::swap(zi, wi);
          lv = lw;
          moved = true;
        } else {
          // s.nr/s.ni were not touched by horner.
          mpfr_div_2ui(s.nr, s.nr, 1, MPFR_RNDN);
          mpfr_div_2ui(s.ni, s.ni, 1, MPFR_RNDN);
        }
      }
      if (!moved) break;
    }
  }
  return false;
}

std::vector<Complex> root_values(const std::vector<Root>& roots) {
  std::vector<Complex> v;
  v.reserve(roots.size());
  for (const auto& r : roots) v.push_back(r.value);
  return v;
}

}  // namespace hyperfactor
