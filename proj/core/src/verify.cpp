#include "hyperfactor/verify.hpp"

#include "hyperfactor/dense_sequence.hpp"
#include "hyperfactor/error.hpp"

namespace hyperfactor {

namespace {

Real pow2(long e) { return ldexp(Real(1L), e); }

}  // namespace

bool VerifyReport::ok() const { return flag_count() == 0; }

std::size_t VerifyReport::flag_count() const {
  std::size_t c = flags.size();
  for (const auto& s : stages) c += s.flags.size();
  return c;
}

VerifyReport verify_certificate(const std::vector<DiffOperator>& ops, const FactorList& fl,
                                const std::vector<StageRecord>& records) {
  VerifyReport rep;
  if (records.empty() && fl.factors.empty()) return rep;
  if (ops.empty()) throw PreconditionError("verify: no operators");
  if (fl.stage_offsets.empty() || fl.stage_offsets.front() != 0 || fl.stage_offsets.back() != fl.factors.size()) {
    throw PreconditionError("verify: stage offsets do not cover the factor list");
  }
  for (std::size_t j = 1; j < fl.stage_offsets.size(); ++j) {
    if (fl.stage_offsets[j] < fl.stage_offsets[j - 1]) throw PreconditionError("verify: offsets decrease");
  }
  if (fl.stage_offsets.size() != records.size() + 1) {
    throw PreconditionError("verify: one factor block per stage record is required");
  }
  for (const auto& a : fl.factors) {
    if (a.is_zero()) throw PreconditionError("verify: zero factor");
  }

  const Real tol = pow2(-static_cast<long>(working_precision() / 2));
  const std::vector<Poly> fk = stage_products(fl);
  const std::size_t K = records.size();
  rep.fidelity = relative_coeff_error(from_unit_factors(fl.factors), fk.back());
  if (rep.fidelity > tol) rep.flags.emplace_back("factor product disagrees with stage products");

  bool all_certified = true;
  for (std::size_t idx = 0; idx < K; ++idx) {
    const StageRecord& r = records[idx];
    all_certified = all_certified && r.certified;
    if (r.k != idx + 1) rep.flags.emplace_back("stage indices are not 1..K");
    if (idx > 0 && r.n <= records[idx - 1].n) rep.flags.emplace_back("iterate counts not increasing");
  }

  Poly f_prev = Poly::constant(Complex(1L));
  for (std::size_t idx = 0; idx < K; ++idx) {
    const StageRecord& rec = records[idx];
    const std::size_t k = idx + 1;
    const Real R(static_cast<long>(k));
    const Poly p = dense_sequence(ops[0], k);
    const std::size_t active = active_operators(ops.size(), k);
    StageCheck sc;
    sc.k = k;
    sc.n = rec.n;
    sc.residual_recorded = rec.residuals;
    sc.continuity_recorded = rec.continuity;
    sc.prefix_recorded = rec.prefix_product_max;

    auto exceeds = [&](const Real& recomputed, const Real& recorded) {
      return recomputed > Real(2L) * recorded + tol;
    };

    for (std::size_t i = 0; i < active; ++i) {
      Real v = measure_residual(ops[i], rec.n, fk[idx], p, R).upper;
      sc.residual_recomputed.push_back(v);
      if (i >= rec.residuals.size()) {
        sc.flags.emplace_back("missing residual for operator " + std::to_string(i + 1));
        continue;
      }
      if (exceeds(v, rec.residuals[i])) sc.flags.emplace_back("residual mismatch, operator " + std::to_string(i + 1));
      if (rec.certified && !(v <= rec.threshold)) {
        sc.flags.emplace_back("certified residual exceeds threshold, operator " + std::to_string(i + 1));
      }
    }

    const Poly diff = fk[idx] - f_prev;
    const Real lim = pow2(-static_cast<long>(k));
    std::size_t pos = 0;
    for (std::size_t j = 1; j < k; ++j) {
      for (std::size_t i = 0; i < active_operators(ops.size(), j); ++i, ++pos) {
        Real v = measure_residual(ops[i], records[j - 1].n, diff, Poly(), R).upper;
        sc.continuity_recomputed.push_back(v);
        if (pos >= rec.continuity.size()) {
          sc.flags.emplace_back("missing continuity entry");
          continue;
        }
        if (exceeds(v, rec.continuity[pos])) sc.flags.emplace_back("continuity mismatch");
        if (rec.certified && !(v < lim)) sc.flags.emplace_back("certified continuity exceeds 2^-k");
      }
    }

    std::vector<Complex> block(fl.factors.begin() + static_cast<long>(fl.stage_offsets[idx]),
                               fl.factors.begin() + static_cast<long>(fl.stage_offsets[idx + 1]));
    sc.prefix_budget = k == 1 ? Real(1L) : pow2(-static_cast<long>(k - 1)) / disk_norm_upper(f_prev, Real(static_cast<long>(k - 1)));
    PrefixProductResult pp = prefix_product_check(block, R, sc.prefix_budget, false);
    sc.prefix_recomputed = pp.max_dev;
    if (exceeds(pp.max_dev, rec.prefix_product_max)) sc.flags.emplace_back("prefix product mismatch");
    if (rec.certified && !pp.ok) sc.flags.emplace_back("certified prefix product exceeds budget");

    if (all_certified) {
      sc.telescoping_bound = rec.threshold;
      for (std::size_t j = k; j < K; ++j) sc.telescoping_bound += pow2(-static_cast<long>(j + 1));
      for (std::size_t i = 0; i < active; ++i) {
        Real v = measure_residual(ops[i], rec.n, fk.back(), p, R).upper;
        sc.telescoping.push_back(v);
        if (!(v <= sc.telescoping_bound)) sc.flags.emplace_back("telescoping bound fails");
      }
    }
    f_prev = fk[idx];
    rep.stages.push_back(std::move(sc));
  }
  return rep;
}

}  // namespace hyperfactor
