#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hyperfactor/driver.hpp"

namespace hyperfactor {

inline constexpr const char* kToolName = "hyperfactor";
inline constexpr const char* kToolVersion = "0.1.0";

struct Certificate {
  std::string tool = kToolName;
  std::string version = kToolVersion;
  std::vector<DiffOperator> operators;
  RunConfig config;
  /// Precision the numbers were written at (max of the schedule).
  mpfr_prec_t precision = 0;
  std::vector<mpfr_prec_t> precision_schedule;
  std::string status;
  std::string message;
  std::vector<StageRecord> records;
  FactorList factors;
};

Certificate make_certificate(const RunResult& run);

/// Significant decimal digits written for precision P: ceil(P log10 2) + 2.
std::size_t decimal_digits(mpfr_prec_t P);

/// Deterministic JSON text (no timestamps); numbers are decimal strings.
std::string write_certificate(const Certificate& cert);
/// Parses at the precision stored in the file. Throws ParseError.
Certificate read_certificate(std::string_view json);

/// Operator specs: a single object, an array of objects, or
/// {"operators": [...]}. Objects are {"kind": "poly", "coeffs": [[re, im], ...]}
/// or {"kind": "translation", "lambda": [re, im], "a": [re, im]}. Scalar
/// symbols are rejected. Throws ParseError.
std::vector<DiffOperator> parse_operator_specs(std::string_view json);
std::string operator_spec_json(const std::vector<DiffOperator>& ops);

}  // namespace hyperfactor
