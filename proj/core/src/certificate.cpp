#include "hyperfactor/certificate.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "hyperfactor/error.hpp"

namespace hyperfactor {

namespace {

using json = nlohmann::ordered_json;

struct Writer {
  std::size_t digits;

  json num(const Real& x) const { return x.to_string(digits); }
  json cnum(const Complex& z) const { return json::array({num(z.re), num(z.im)}); }
  json nums(const std::vector<Real>& v) const {
    json a = json::array();
    for (const auto& x : v) a.push_back(num(x));
    return a;
  }
};

json operator_json(const DiffOperator& T, const Writer& w) {
  json o;
  if (T.kind() == SymbolKind::ScaledTranslation) {
    o["kind"] = "translation";
    o["lambda"] = w.cnum(T.lambda());
    o["a"] = w.cnum(T.shift());
  } else {
    o["kind"] = "poly";
    json c = json::array();
    for (const auto& x : T.symbol_coeffs()) c.push_back(w.cnum(x));
    o["coeffs"] = c;
  }
  return o;
}

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

Real parse_real(const json& j) {
  if (j.is_string()) return Real(std::string_view(j.get_ref<const std::string&>()));
  if (j.is_number_integer()) return Real(j.get<long>());
  if (j.is_number()) return Real(std::string_view(j.dump()));
  fail("expected a decimal string, got " + j.dump());
}

Complex parse_complex(const json& j) {
  if (j.is_array() && j.size() == 2) return {parse_real(j[0]), parse_real(j[1])};
  if (j.is_string() || j.is_number()) return Complex(parse_real(j));
  fail("expected [re, im], got " + j.dump());
}

std::vector<Real> parse_reals(const json& j) {
  if (!j.is_array()) fail("expected an array of decimal strings");
  std::vector<Real> out;
  for (const auto& x : j) out.push_back(parse_real(x));
  return out;
}

std::vector<std::string> parse_strings(const json& j) {
  if (!j.is_array()) fail("expected an array of strings");
  std::vector<std::string> out;
  for (const auto& x : j) out.push_back(x.get<std::string>());
  return out;
}

template <class T>
T get_num(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) fail(std::string("field '") + key + "' must be a number");
  return v.get<T>();
}

DiffOperator parse_operator(const json& j) {
  const json& kind = field(j, "kind");
  if (!kind.is_string()) fail("'kind' must be a string");
  const std::string k = kind.get<std::string>();
  DiffOperator T = [&] {
    try {
      if (k == "poly") {
        const json& c = field(j, "coeffs");
        if (!c.is_array() || c.empty()) fail("'coeffs' must be a nonempty array");
        std::vector<Complex> coeffs;
        for (const auto& x : c) coeffs.push_back(parse_complex(x));
        return DiffOperator::taylor(std::move(coeffs));
      }
      if (k == "translation") {
        return DiffOperator::translation(parse_complex(field(j, "lambda")), parse_complex(field(j, "a")));
      }
    } catch (const PreconditionError& e) {
      fail(std::string("invalid operator: ") + e.what());
    }
    fail("unknown operator kind '" + k + "' (expected \"poly\" or \"translation\")");
  }();
  try {
    require_nonscalar(T);
  } catch (const PreconditionError& e) {
    fail(e.what());
  }
  return T;
}

std::vector<DiffOperator> parse_operator_list(const json& j) {
  std::vector<DiffOperator> ops;
  if (j.is_array()) {
    for (const auto& x : j) ops.push_back(parse_operator(x));
  } else if (j.is_object() && j.contains("operators")) {
    return parse_operator_list(j.at("operators"));
  } else {
    ops.push_back(parse_operator(j));
  }
  if (ops.empty()) fail("no operators given");
  return ops;
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::size_t decimal_digits(mpfr_prec_t P) {
  return static_cast<std::size_t>(std::ceil(static_cast<double>(P) * 0.30102999566398120)) + 2;
}

Certificate make_certificate(const RunResult& run) {
  Certificate c;
  c.operators = run.operators;
  c.config = run.config;
  c.precision_schedule = run.precision_schedule;
  c.precision = run.config.precision_bits;
  for (auto p : run.precision_schedule) c.precision = std::max(c.precision, p);
  c.status = to_string(run.status);
  c.message = run.message;
  c.records = run.records;
  c.factors = run.factors;
  return c;
}

std::string write_certificate(const Certificate& c) {
  const Writer w{decimal_digits(c.precision)};
  json root;
  root["tool"] = c.tool;
  root["version"] = c.version;
  json ops = json::array();
  for (const auto& T : c.operators) ops.push_back(operator_json(T, w));
  root["operators"] = ops;
  const RunConfig& cfg = c.config;
  root["config"] = {{"stages", cfg.stages},
                    {"n_max", cfg.n_max},
                    {"precision_bits", cfg.precision_bits},
                    {"precision_ceiling", cfg.precision_ceiling},
                    {"samples", cfg.samples},
                    {"allow_best_effort", cfg.allow_best_effort},
                    {"linear_window", cfg.linear_window},
                    {"exp_outer", cfg.construction.exp_outer},
                    {"exp_zero_radius", cfg.construction.exp_zero_radius},
                    {"exp_degree_cap", cfg.construction.exp_degree_cap},
                    {"perturbation_scale", cfg.construction.perturbation_scale},
                    {"norm_samples", cfg.construction.norm_samples}};
  root["precision_bits"] = c.precision;
  root["precision_schedule"] = c.precision_schedule;
  root["status"] = c.status;
  root["message"] = c.message;

  json stages = json::array();
  for (const auto& r : c.records) {
    json s;
    s["k"] = r.k;
    s["n"] = r.n;
    s["construction_operator"] = r.construction_op;
    s["deg_q"] = r.deg_q;
    s["residual"] = w.num(r.residual());
    s["residuals"] = w.nums(r.residuals);
    s["residuals_lower"] = w.nums(r.residuals_lower);
    s["continuity_residuals"] = w.nums(r.continuity);
    s["threshold"] = w.num(r.threshold);
    s["q_norm"] = w.num(r.q_norm);
    s["q_linear"] = w.num(r.q_linear);
    s["min_zero"] = w.num(r.min_zero);
    s["max_zero"] = w.num(r.max_zero);
    s["prefix_product_max"] = w.num(r.prefix_product_max);
    s["prefix_budget"] = w.num(r.prefix_budget);
    s["perturbed"] = r.perturbed;
    s["certified"] = r.certified;
    s["best_effort"] = r.best_effort;
    s["precision_bits"] = r.precision;
    s["failed"] = r.failed;
    s["residual_trend_decreasing"] = residual_trend(r);
    json tr = json::array();
    for (const auto& t : r.trace) {
      // Trace values are diagnostics; 17 digits suffice.
      json e;
      e["n"] = t.n;
      e["op"] = t.op;
      e["precision_bits"] = t.precision;
      json res = json::array();
      for (const auto& x : t.residuals) res.push_back(x.to_string(17));
      e["residuals"] = res;
      e["failed"] = t.failed;
      tr.push_back(e);
    }
    s["trace"] = tr;
    stages.push_back(s);
  }
  root["stages"] = stages;
  json fac = json::array();
  for (const auto& a : c.factors.factors) fac.push_back(w.cnum(a));
  root["factors"] = fac;
  root["stage_offsets"] = c.factors.stage_offsets;
  return root.dump(1) + "\n";
}

Certificate read_certificate(std::string_view text) {
  const json root = parse_text(text);
  if (!root.is_object()) fail("certificate must be a JSON object");
  Certificate c;
  try {
    c.tool = field(root, "tool").get<std::string>();
    c.version = field(root, "version").get<std::string>();
    c.precision = get_num<mpfr_prec_t>(root, "precision_bits");
    if (c.precision < 2 || c.precision > (1L << 24)) fail("precision_bits out of range");
    PrecisionScope scope(c.precision);
    c.operators = parse_operator_list(field(root, "operators"));
    const json& cfg = field(root, "config");
    c.config.stages = get_num<std::size_t>(cfg, "stages");
    c.config.n_max = get_num<std::size_t>(cfg, "n_max");
    c.config.precision_bits = get_num<mpfr_prec_t>(cfg, "precision_bits");
    c.config.precision_ceiling = get_num<mpfr_prec_t>(cfg, "precision_ceiling");
    c.config.samples = get_num<std::size_t>(cfg, "samples");
    c.config.allow_best_effort = field(cfg, "allow_best_effort").get<bool>();
    c.config.linear_window = get_num<std::size_t>(cfg, "linear_window");
    c.config.construction.exp_outer = get_num<double>(cfg, "exp_outer");
    c.config.construction.exp_zero_radius = get_num<double>(cfg, "exp_zero_radius");
    c.config.construction.exp_degree_cap = get_num<double>(cfg, "exp_degree_cap");
    c.config.construction.perturbation_scale = get_num<double>(cfg, "perturbation_scale");
    c.config.construction.norm_samples = get_num<std::size_t>(cfg, "norm_samples");
    c.precision_schedule = field(root, "precision_schedule").get<std::vector<mpfr_prec_t>>();
    c.status = field(root, "status").get<std::string>();
    c.message = field(root, "message").get<std::string>();

    for (const auto& s : field(root, "stages")) {
      StageRecord r;
      r.k = get_num<std::size_t>(s, "k");
      r.n = get_num<std::size_t>(s, "n");
      r.construction_op = get_num<std::size_t>(s, "construction_operator");
      r.deg_q = get_num<long>(s, "deg_q");
      r.residuals = parse_reals(field(s, "residuals"));
      r.residuals_lower = parse_reals(field(s, "residuals_lower"));
      r.continuity = parse_reals(field(s, "continuity_residuals"));
      r.threshold = parse_real(field(s, "threshold"));
      r.q_norm = parse_real(field(s, "q_norm"));
      r.q_linear = parse_real(field(s, "q_linear"));
      r.min_zero = parse_real(field(s, "min_zero"));
      r.max_zero = parse_real(field(s, "max_zero"));
      r.prefix_product_max = parse_real(field(s, "prefix_product_max"));
      r.prefix_budget = parse_real(field(s, "prefix_budget"));
      r.perturbed = field(s, "perturbed").get<bool>();
      r.certified = field(s, "certified").get<bool>();
      r.best_effort = field(s, "best_effort").get<bool>();
      r.precision = get_num<mpfr_prec_t>(s, "precision_bits");
      r.failed = parse_strings(field(s, "failed"));
      if (s.contains("trace")) {
        for (const auto& e : s.at("trace")) {
          CandidateTrace t;
          t.n = get_num<std::size_t>(e, "n");
          t.op = get_num<std::size_t>(e, "op");
          t.precision = get_num<mpfr_prec_t>(e, "precision_bits");
          t.residuals = parse_reals(field(e, "residuals"));
          t.failed = parse_strings(field(e, "failed"));
          r.trace.push_back(std::move(t));
        }
      }
      c.records.push_back(std::move(r));
    }
    c.factors.factors.clear();
    for (const auto& a : field(root, "factors")) c.factors.factors.push_back(parse_complex(a));
    c.factors.stage_offsets = field(root, "stage_offsets").get<std::vector<std::size_t>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what());
  }
  return c;
}

std::vector<DiffOperator> parse_operator_specs(std::string_view text) {
  const json root = parse_text(text);
  try {
    return parse_operator_list(root);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed operator spec: ") + e.what());
  }
}

std::string operator_spec_json(const std::vector<DiffOperator>& ops) {
  const Writer w{decimal_digits(working_precision())};
  json a = json::array();
  for (const auto& T : ops) a.push_back(operator_json(T, w));
  return a.dump(1) + "\n";
}

}  // namespace hyperfactor
