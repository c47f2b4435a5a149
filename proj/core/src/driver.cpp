#include "hyperfactor/driver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "hyperfactor/dense_sequence.hpp"
#include "hyperfactor/error.hpp"
#include "hyperfactor/remainder.hpp"
#include "hyperfactor/roots.hpp"

namespace hyperfactor {

namespace {

Real pow2(long e) { return ldexp(Real(1L), e); }

Poly abs_poly(const Poly& p) {
  std::vector<Complex> c;
  c.reserve(p.size());
  for (const auto& x : p.coeffs()) c.emplace_back(abs(x));
  return Poly(std::move(c));
}

// |T|: the operator with coefficientwise moduli. Its action on |f| bounds
// every term summed while computing T^n f.
DiffOperator magnitude_operator(const DiffOperator& T) {
  if (T.kind() == SymbolKind::ScaledTranslation) {
    return DiffOperator::translation(Complex(abs(T.lambda())), Complex(abs(T.shift())));
  }
  std::vector<Complex> c;
  for (const auto& x : T.symbol_coeffs()) c.emplace_back(abs(x));
  return DiffOperator::taylor(std::move(c));
}

ResidualMeasure measure(const DiffOperator& T, std::size_t n, const Poly& f, const Poly& p, const Real& R,
                        bool with_lower, std::size_t samples) {
  ResidualMeasure m;
  Poly g = apply_n(T, n, f) - p;
  Real upper;
  if (with_lower) {
    DiskNormEstimate est = samples ? disk_norm(g, R, samples) : disk_norm(g, R);
    upper = est.upper;
    m.lower = est.lower;
  } else {
    upper = disk_norm_upper(g, R);
  }
  Real scale = add_up(disk_norm_upper(apply_n(magnitude_operator(T), n, abs_poly(f)), R), disk_norm_upper(p, R));
  const long terms = std::max(1L, f.degree() + 2);
  m.noise = mul_up(scale, ldexp(Real(16L * terms), -static_cast<long>(working_precision())));
  m.upper = add_up(upper, m.noise);
  return m;
}

Real max_of(const std::vector<Real>& v) {
  Real m;
  for (const auto& x : v) m = max(m, x);
  return m;
}

struct NeedPrecision {};

struct Outcome {
  bool measured = false;  // all active residuals present
  std::vector<std::string> failed;
  std::vector<Real> residuals;
  std::vector<Real> residuals_lower;
  std::vector<Real> continuity;
  StageWork work;
  Poly f_new;
  Real q_norm;
  Real prefix_max;
  bool zeros_done = false;
};

struct StageContext {
  const std::vector<DiffOperator>& ops;
  const RunConfig& cfg;
  std::size_t k;
  std::size_t active;
  const Poly& p;
  const Poly& f_prev;
  const std::vector<std::size_t>& prev_n;  // n_1 .. n_{k-1}
  Real prev_max_zero;
  Real threshold;
  Real budget;
  Real R;
  Real R_ref;
  std::map<std::pair<std::size_t, mpfr_prec_t>, Complex>& r_cache;
};

Complex stage_r(StageContext& ctx, std::size_t c) {
  const DiffOperator& T = ctx.ops[c];
  if (T.J() != 0) return {};
  auto key = std::make_pair(c, working_precision());
  auto it = ctx.r_cache.find(key);
  if (it != ctx.r_cache.end()) return it->second;
  Complex r = choose_r(T, stage_constants(T, ctx.f_prev, ctx.p, ctx.R_ref));
  ctx.r_cache.emplace(key, r);
  return r;
}

// Continuity ||T_i^{n_j} d||_R for j < k, i < active(j).
void measure_continuity(const StageContext& ctx, const Poly& d, Outcome& out) {
  const Real lim = pow2(-static_cast<long>(ctx.k));
  bool bad = false;
  out.continuity.clear();
  for (std::size_t j = 1; j < ctx.k; ++j) {
    const std::size_t aj = active_operators(ctx.ops.size(), j);
    for (std::size_t i = 0; i < aj; ++i) {
      ResidualMeasure m = measure(ctx.ops[i], ctx.prev_n[j - 1], d, Poly(), ctx.R, false, 0);
      if (m.noise > lim / Real(64L) && !(m.upper - m.noise > lim)) throw NeedPrecision{};
      if (!(m.upper < lim)) bad = true;
      out.continuity.push_back(m.upper);
    }
  }
  if (bad) out.failed.emplace_back("continuity");
}

// A noisy measurement raises precision only when `may_raise` (a candidate
// that already failed a clause keeps its noisy value for the trace).
void measure_residuals(const StageContext& ctx, std::size_t n, const Poly& f, Outcome& out, bool with_lower,
                       bool may_raise = true) {
  out.residuals.clear();
  out.residuals_lower.clear();
  bool bad = false;
  for (std::size_t i = 0; i < ctx.active; ++i) {
    ResidualMeasure m = measure(ctx.ops[i], n, f, ctx.p, ctx.R, with_lower, ctx.cfg.samples);
    if (may_raise && m.noise > ctx.threshold / Real(64L) && !(m.upper - m.noise > ctx.threshold)) {
      throw NeedPrecision{};
    }
    if (!(m.upper <= ctx.threshold)) bad = true;
    out.residuals.push_back(m.upper);
    out.residuals_lower.push_back(m.lower);
  }
  out.measured = true;
  if (bad) out.failed.emplace_back("residual");
}

// Full evaluation of one candidate at the working precision. With `force`
// every measurement is made even after a clause has failed.
Outcome evaluate(StageContext& ctx, std::size_t n, std::size_t c, bool force) {
  const mpfr_prec_t P = working_precision();
  const Real half_tol = pow2(-static_cast<long>(P / 2));
  const ConstructionConfig& cc = ctx.cfg.construction;
  Outcome out;
  out.work = build_quotient(ctx.ops[c], ctx.f_prev, ctx.p, n, stage_r(ctx, c), cc);
  StageWork& w = out.work;
  w.diag.division_error = division_identity_error(w, ctx.f_prev);
  if (w.diag.division_error > half_tol) throw NeedPrecision{};

  const Real kr(static_cast<long>(ctx.k));
  out.q_norm = disk_norm_upper(w.q, ctx.R);
  if (!(out.q_norm < Real(1L) / (kr * kr))) out.failed.emplace_back("q_norm");
  if (!(w.diag.q_linear < Real(1L) / Real(static_cast<long>(n)))) out.failed.emplace_back("q_linear");
  if (!(w.diag.deg_q > static_cast<long>(ctx.k))) out.failed.emplace_back("degree");

  // Residuals are always measured so the search trace shows the trend.
  Poly qp1 = add_constant(w.q, Complex(1L));
  Poly f_cheap = ctx.f_prev * qp1;
  measure_residuals(ctx, n, f_cheap, out, false, force || out.failed.empty());
  if (out.failed.size() == 1 && out.failed[0] == "residual" && 2 * P <= ctx.cfg.precision_ceiling) {
    // An ill-conditioned quotient can look bad only through rounding; if
    // doubling P cuts the residual in half, raise.
    Real here = max_of(out.residuals), there;
    {
      PrecisionScope scope(2 * P);
      StageWork w2 = build_quotient(ctx.ops[c], ctx.f_prev, ctx.p, n, stage_r(ctx, c), cc);
      Poly f2 = ctx.f_prev * add_constant(w2.q, Complex(1L));
      for (std::size_t i = 0; i < ctx.active; ++i) {
        there = max(there, measure(ctx.ops[i], n, f2, ctx.p, ctx.R, false, 0).upper);
      }
    }
    if (there * Real(2L) < here) throw NeedPrecision{};
  }
  if (!out.failed.empty() && !force) return out;
  measure_continuity(ctx, f_cheap - ctx.f_prev, out);
  if (!out.failed.empty() && !force) return out;

  if (w.q.degree() < 1) {
    out.failed.emplace_back("no_zeros");
    out.f_new = ctx.f_prev;
    return out;
  }
  if (!force) {
    // Skip root finding when the zero-modulus clauses must fail.
    const double need = std::max(real_pow(n, cc.exp_zero_radius).to_double(), ctx.prev_max_zero.to_double());
    ModulusBounds mb = min_modulus_bounds(qp1);
    if (std::exp2(mb.log2_upper) * (1.0 + 1e-9) < need || certify_zero_within(qp1, need)) {
      out.failed.emplace_back("min_zero_bound");
      return out;
    }
  }
  extract_zeros(w, cc);
  if (w.diag.reconstruction_error > half_tol) throw NeedPrecision{};
  out.zeros_done = true;
  std::vector<std::string> zf;
  if (!(w.diag.min_zero > real_pow(n, cc.exp_zero_radius))) zf.emplace_back("min_zero");
  if (!(w.diag.min_zero > ctx.prev_max_zero)) zf.emplace_back("zero_growth");
  if (!zeros_distinct(w.zeros_ordered)) zf.emplace_back("distinct");
  {
    PrefixProductResult pp = prefix_product_check(w.zeros_ordered, ctx.R, ctx.budget, false);
    out.prefix_max = pp.max_dev;
    if (!pp.ok) zf.emplace_back("prefix_product");
  }
  out.failed.insert(out.failed.end(), zf.begin(), zf.end());
  if (!out.failed.empty() && !force) return out;

  out.f_new = ctx.f_prev * from_unit_factors(w.zeros_ordered);
  out.failed.clear();
  if (!(out.q_norm < Real(1L) / (kr * kr))) out.failed.emplace_back("q_norm");
  if (!(w.diag.q_linear < Real(1L) / Real(static_cast<long>(n)))) out.failed.emplace_back("q_linear");
  if (!(w.diag.deg_q > static_cast<long>(ctx.k))) out.failed.emplace_back("degree");
  measure_residuals(ctx, n, out.f_new, out, true);
  measure_continuity(ctx, out.f_new - ctx.f_prev, out);
  out.failed.insert(out.failed.end(), zf.begin(), zf.end());
  return out;
}

Real max_modulus(const std::vector<Complex>& zs, std::size_t from, std::size_t to) {
  Real m;
  for (std::size_t i = from; i < to; ++i) m = max(m, abs(zs[i]));
  return m;
}

}  // namespace

void RunConfig::validate() const {
  if (stages < 1) throw PreconditionError("stages must be at least 1");
  if (precision_bits < 64) throw PreconditionError("precision must be at least 64 bits");
  if (precision_ceiling < precision_bits) throw PreconditionError("precision ceiling below starting precision");
  if (linear_window < 1) throw PreconditionError("linear_window must be positive");
  construction.validate();
}

Real StageRecord::residual() const { return max_of(residuals); }

std::vector<bool> residual_trend(const StageRecord& rec) {
  std::map<std::size_t, std::vector<Real>> by_n;
  std::size_t ops = 0;
  for (const auto& t : rec.trace) {
    if (t.residuals.empty()) continue;
    ops = std::max(ops, t.residuals.size());
    auto& v = by_n[t.n];
    for (std::size_t i = 0; i < t.residuals.size(); ++i) {
      if (i >= v.size()) {
        v.push_back(t.residuals[i]);
      } else {
        v[i] = min(v[i], t.residuals[i]);
      }
    }
  }
  std::vector<bool> out(ops, true);
  for (std::size_t i = 0; i < ops; ++i) {
    std::optional<Real> last;
    std::size_t count = 0;
    for (const auto& [n, v] : by_n) {
      if (i >= v.size()) continue;
      if (last && !(v[i] < *last)) out[i] = false;
      last = v[i];
      ++count;
    }
    if (count < 2) out[i] = false;
  }
  return out;
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Certified: return "certified";
    case RunStatus::BestEffort: return "best-effort";
    case RunStatus::PrecisionExhausted: return "precision-exhausted";
  }
  return "unknown";
}

Poly initial_q1(const DiffOperator& T) {
  require_nonscalar(T);
  const std::size_t J = T.J();
  if (J == 0) {
    Complex b = Complex(Real(1L) / (abs(T.coeff(0)) + abs(T.coeff(1))));
    return Poly::monomial(b, 1);
  }
  return Poly::monomial(Complex(Real(1L) / factorial(J)), J);
}

Real stage_threshold(const DiffOperator& T, std::size_t k) {
  if (k == 1 && T.J() == 0) {
    return Real(1L) + pow2(-static_cast<long>(working_precision()) + 16);
  }
  return pow2(-static_cast<long>(k));
}

std::vector<std::size_t> candidate_counts(std::size_t n_prev, std::size_t n_max, std::size_t linear_window) {
  std::vector<std::size_t> out;
  std::size_t n = n_prev + 1;
  for (; n <= n_max && n <= n_prev + linear_window; ++n) out.push_back(n);
  if (out.empty()) return out;
  n = out.back();
  while (true) {
    n = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * 1.5));
    if (n >= n_max) break;
    out.push_back(n);
  }
  if (out.back() < n_max) out.push_back(n_max);
  return out;
}

std::size_t active_operators(std::size_t count, std::size_t k) { return std::min(count, k); }

ResidualMeasure measure_residual(const DiffOperator& T, std::size_t n, const Poly& f, const Poly& p, const Real& R,
                                 std::size_t samples) {
  return measure(T, n, f, p, R, true, samples);
}

std::vector<Poly> stage_products(const FactorList& fl) {
  std::vector<Poly> out;
  Poly f = Poly::constant(Complex(1L));
  for (std::size_t j = 1; j < fl.stage_offsets.size(); ++j) {
    std::vector<Complex> block(fl.factors.begin() + static_cast<long>(fl.stage_offsets[j - 1]),
                               fl.factors.begin() + static_cast<long>(fl.stage_offsets[j]));
    f = f * from_unit_factors(block);
    out.push_back(f);
  }
  return out;
}

RunResult run(const std::vector<DiffOperator>& ops, const RunConfig& cfg, const CandidateCallback& on_candidate) {
  cfg.validate();
  if (ops.empty()) throw PreconditionError("at least one operator is required");
  for (const auto& T : ops) require_nonscalar(T);
  RunResult res;
  res.operators = ops;
  res.config = cfg;
  mpfr_prec_t P = cfg.precision_bits;
  PrecisionScope scope(P);

  // f at the current precision, rebuilt from the factors when P rises.
  std::map<mpfr_prec_t, Poly> f_at;
  auto current_f = [&]() -> const Poly& {
    auto it = f_at.find(working_precision());
    if (it == f_at.end()) {
      Poly f = Poly::constant(Complex(1L));
      if (!res.factors.factors.empty()) f = from_unit_factors(res.factors.factors);
      it = f_at.emplace(working_precision(), std::move(f)).first;
    }
    return it->second;
  };

  // Stage 1.
  {
    const DiffOperator& T = ops[0];
    Poly q1 = initial_q1(T);
    Poly p1 = dense_sequence(T, 1);
    std::vector<Complex> zeros = root_values(roots(add_constant(q1, Complex(1L))));
    StageRecord rec;
    rec.k = 1;
    rec.n = 1;
    rec.deg_q = q1.degree();
    rec.precision = P;
    rec.threshold = stage_threshold(T, 1);
    rec.q_norm = disk_norm_upper(q1, Real(1L));
    rec.q_linear = abs(q1.coeff(1));
    rec.prefix_budget = Real(1L);
    PrefixProductResult pp = prefix_product_check(zeros, Real(1L), rec.prefix_budget, false);
    rec.prefix_product_max = pp.max_dev;
    Poly f1 = from_unit_factors(zeros);
    ResidualMeasure m = measure_residual(T, 1, f1, p1, Real(1L), cfg.samples);
    rec.residuals.push_back(m.upper);
    rec.residuals_lower.push_back(m.lower);
    rec.min_zero = abs(zeros[0]);
    for (const auto& a : zeros) {
      rec.min_zero = min(rec.min_zero, abs(a));
      rec.max_zero = max(rec.max_zero, abs(a));
    }
    if (!(m.upper <= rec.threshold)) rec.failed.emplace_back("residual");
    if (!pp.ok) rec.failed.emplace_back("prefix_product");
    rec.certified = rec.failed.empty();
    res.factors.factors = zeros;
    res.factors.stage_offsets.push_back(zeros.size());
    f_at.emplace(P, std::move(f1));
    res.records.push_back(std::move(rec));
    res.precision_schedule.push_back(P);
  }

  bool upstream_uncertified = !res.records.back().certified;
  if (upstream_uncertified) res.status = RunStatus::BestEffort;
  const Real R_ref(static_cast<long>(cfg.stages));
  std::vector<std::size_t> prev_n{1};

  for (std::size_t k = 2; k <= cfg.stages; ++k) {
    if (upstream_uncertified && !cfg.allow_best_effort) {
      res.message = "halted after best-effort stage " + std::to_string(k - 1);
      break;
    }
    const Poly p = dense_sequence(ops[0], k);
    const std::size_t active = active_operators(ops.size(), k);
    const std::size_t d_prev = res.factors.stage_offsets.back();
    const std::size_t d_prev2 = res.factors.stage_offsets[res.factors.stage_offsets.size() - 2];
    std::map<std::pair<std::size_t, mpfr_prec_t>, Complex> r_cache;

    StageRecord rec;
    rec.k = k;
    rec.threshold = pow2(-static_cast<long>(k));
    std::optional<Outcome> accepted;
    std::size_t acc_n = 0, acc_op = 0;
    bool any_exhaust = false;
    bool have_best = false;
    bool best_passes = false;
    Real best_score;
    std::size_t best_n = 0, best_op = 0;

    auto make_ctx = [&](const Poly& f_prev) {
      const Real kr(static_cast<long>(k));
      Real fnorm = disk_norm_upper(f_prev, Real(static_cast<long>(k - 1)));
      return StageContext{ops,
                          cfg,
                          k,
                          active,
                          p,
                          f_prev,
                          prev_n,
                          max_modulus(res.factors.factors, d_prev2, d_prev),
                          pow2(-static_cast<long>(k)),
                          pow2(-static_cast<long>(k - 1)) / fnorm,
                          kr,
                          R_ref,
                          r_cache};
    };

    // Evaluates (n, c), raising P on precision trouble. Returns nullopt when
    // the ceiling is hit.
    auto attempt = [&](std::size_t n, std::size_t c, bool force, CandidateTrace* tr) -> std::optional<Outcome> {
      for (;;) {
        set_working_precision(P);
        if (tr) tr->precision = P;
        try {
          StageContext ctx = make_ctx(current_f());
          return evaluate(ctx, n, c, force);
        } catch (const NeedPrecision&) {
        } catch (const PrecisionError&) {
        }
        if (P * 2 > cfg.precision_ceiling) return std::nullopt;
        P *= 2;
      }
    };

    for (std::size_t n : candidate_counts(prev_n.back(), cfg.n_max, cfg.linear_window)) {
      for (std::size_t c = 0; c < active && !accepted; ++c) {
        CandidateTrace tr;
        tr.n = n;
        tr.op = c;
        std::optional<Outcome> o;
        try {
          o = attempt(n, c, false, &tr);
        } catch (const PreconditionError& e) {
          tr.failed.emplace_back(std::string("precondition: ") + e.what());
          if (on_candidate) on_candidate(k, tr);
        rec.trace.push_back(std::move(tr));
          continue;
        }
        if (!o) {
          tr.failed.emplace_back("precision_ceiling");
          any_exhaust = true;
          if (on_candidate) on_candidate(k, tr);
        rec.trace.push_back(std::move(tr));
          continue;
        }
        tr.residuals = o->residuals;
        tr.failed = o->failed;
        if (o->measured) {
          // Best effort: the first candidate meeting the residual and
          // continuity clauses, else the smallest residual.
          Real score = max_of(o->residuals);
          bool passes = std::none_of(o->failed.begin(), o->failed.end(), [](const std::string& f) {
            return f == "residual" || f == "continuity";
          });
          if (!best_passes && (passes || !have_best || score < best_score)) {
            best_passes = passes;
            have_best = true;
            best_score = score;
            best_n = n;
            best_op = c;
          }
        }
        if (on_candidate) on_candidate(k, tr);
        rec.trace.push_back(std::move(tr));
        if (o->failed.empty() && o->zeros_done) {
          accepted = std::move(o);
          acc_n = n;
          acc_op = c;
        }
      }
      if (accepted) break;
    }

    if (!accepted) {
      if (!have_best) {
        res.status = any_exhaust ? RunStatus::PrecisionExhausted : RunStatus::BestEffort;
        res.message = "stage " + std::to_string(k) + ": no candidate could be evaluated";
        break;
      }
      std::optional<Outcome> o;
      try {
        o = attempt(best_n, best_op, true, nullptr);
      } catch (const PreconditionError& e) {
        res.status = RunStatus::BestEffort;
        res.message = "stage " + std::to_string(k) + ": " + e.what();
        break;
      }
      if (!o) {
        res.status = RunStatus::PrecisionExhausted;
        res.message = "stage " + std::to_string(k) + ": precision ceiling reached";
        break;
      }
      accepted = std::move(o);
      acc_n = best_n;
      acc_op = best_op;
      rec.best_effort = true;
    }

    Outcome& o = *accepted;
    rec.n = acc_n;
    rec.construction_op = acc_op;
    rec.deg_q = o.work.diag.deg_q;
    rec.residuals = o.residuals;
    rec.residuals_lower = o.residuals_lower;
    rec.continuity = o.continuity;
    rec.q_norm = o.q_norm;
    rec.q_linear = o.work.diag.q_linear;
    rec.min_zero = o.work.diag.min_zero;
    rec.max_zero = o.work.diag.max_zero;
    rec.prefix_product_max = o.prefix_max;
    rec.prefix_budget = pow2(-static_cast<long>(k - 1)) / disk_norm_upper(current_f(), Real(static_cast<long>(k - 1)));
    rec.perturbed = o.work.diag.perturbed;
    rec.precision = P;
    rec.failed = o.failed;
    if (upstream_uncertified) rec.failed.emplace_back("upstream_best_effort");
    rec.certified = rec.failed.empty() && !rec.best_effort;
    if (!o.zeros_done) o.work.zeros_ordered.clear();

    res.factors.factors.insert(res.factors.factors.end(), o.work.zeros_ordered.begin(), o.work.zeros_ordered.end());
    res.factors.stage_offsets.push_back(res.factors.factors.size());
    f_at.clear();
    f_at.emplace(P, std::move(o.f_new));
    prev_n.push_back(acc_n);
    if (!rec.certified) {
      upstream_uncertified = true;
      res.status = RunStatus::BestEffort;
    }
    res.records.push_back(std::move(rec));
    res.precision_schedule.push_back(P);
  }

  set_working_precision(P);
  res.f = current_f();
  return res;
}

}  // namespace hyperfactor
