#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hyperfactor/certificate.hpp"
#include "hyperfactor/error.hpp"
#include "hyperfactor/presets.hpp"
#include "hyperfactor/verify.hpp"

namespace hf = hyperfactor;

namespace {

enum Exit { kOk = 0, kInput = 1, kBestEffort = 2, kFlagged = 3, kPrecision = 4 };

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hf::ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A spec argument is inline JSON when it starts with '{' or '['.
std::vector<hf::DiffOperator> load_operators(const std::string& arg) {
  auto first = arg.find_first_not_of(" \t\n");
  bool inline_json = first != std::string::npos && (arg[first] == '{' || arg[first] == '[');
  return hf::parse_operator_specs(inline_json ? arg : slurp(arg));
}

std::string sci(const hf::Real& x) { return x.to_string(4); }

void print_table(std::ostream& os, const std::vector<hf::StageRecord>& records, std::size_t n_ops) {
  os << "k    n     deg_q  ";
  for (std::size_t i = 0; i < n_ops; ++i) os << "residual[T" << i + 1 << "]  ";
  os << "continuity  prefix/budget           bits  certified  failed\n";
  for (const auto& r : records) {
    char head[64];
    std::snprintf(head, sizeof head, "%-4zu %-5zu %-6ld ", r.k, r.n, r.deg_q);
    os << head;
    for (std::size_t i = 0; i < n_ops; ++i) {
      std::string v = i < r.residuals.size() ? sci(r.residuals[i]) : "-";
      v.resize(std::max<std::size_t>(v.size(), 14), ' ');
      os << v;
    }
    hf::Real cmax;
    for (const auto& c : r.continuity) cmax = hf::max(cmax, c);
    std::string c = r.continuity.empty() ? "-" : sci(cmax);
    c.resize(std::max<std::size_t>(c.size(), 12), ' ');
    std::string pb = sci(r.prefix_product_max) + "/" + sci(r.prefix_budget);
    pb.resize(std::max<std::size_t>(pb.size(), 24), ' ');
    os << c << pb << r.precision << (r.precision < 1000 ? "   " : "  ") << (r.certified ? "yes" : "no ")
       << "        ";
    for (std::size_t i = 0; i < r.failed.size(); ++i) os << (i ? "," : "") << r.failed[i];
    os << "\n";
  }
}

void print_trends(std::ostream& os, const std::vector<hf::StageRecord>& records) {
  for (const auto& r : records) {
    if (!r.best_effort) continue;
    auto tr = hf::residual_trend(r);
    os << "stage " << r.k << " best effort; residual decreasing in n:";
    for (std::size_t i = 0; i < tr.size(); ++i) os << " T" << i + 1 << "=" << (tr[i] ? "yes" : "no");
    os << "\n";
  }
}

int status_code(hf::RunStatus s) {
  switch (s) {
    case hf::RunStatus::Certified: return kOk;
    case hf::RunStatus::BestEffort: return kBestEffort;
    case hf::RunStatus::PrecisionExhausted: return kPrecision;
  }
  return kInput;
}

struct RunFlags {
  std::size_t stages = 6;
  std::size_t n_max = 300;
  long precision = 256;
  long ceiling = 1024;
  std::size_t samples = 0;
  bool allow_best_effort = false;
  unsigned long seed = 0;
  bool verbose = false;

  hf::RunConfig config() const {
    hf::RunConfig c;
    c.stages = stages;
    c.n_max = n_max;
    c.precision_bits = precision;
    c.precision_ceiling = ceiling;
    c.samples = samples;
    c.allow_best_effort = allow_best_effort;
    return c;
  }
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("-K,--stages", f.stages, "number of stages")->check(CLI::PositiveNumber);
  cmd->add_option("--nmax", f.n_max, "largest iterate count tried per stage")->check(CLI::PositiveNumber);
  cmd->add_option("--precision-bits", f.precision, "starting working precision")->check(CLI::Range(64L, 1L << 20));
  cmd->add_option("--precision-ceiling", f.ceiling, "precision never raised beyond this")
      ->check(CLI::Range(64L, 1L << 22));
  cmd->add_option("--samples", f.samples, "circle samples for reported lower bounds (0 = default)");
  cmd->add_flag("--allow-best-effort", f.allow_best_effort, "continue past uncertified stages");
  cmd->add_option("--seed", f.seed, "seed for randomized harnesses; the construction is deterministic");
  cmd->add_flag("-v,--verbose", f.verbose, "print every candidate to stderr");
}

int run_and_report(const std::vector<hf::DiffOperator>& ops, const hf::RunConfig& cfg, const std::string& out_path,
                   bool print_cert_to_stdout, bool verbose) {
  hf::CandidateCallback cb;
  auto last = std::chrono::steady_clock::now();
  if (verbose) {
    cb = [&last](std::size_t k, const hf::CandidateTrace& t) {
      auto now = std::chrono::steady_clock::now();
      double secs = std::chrono::duration<double>(now - last).count();
      last = now;
      std::cerr << "  stage " << k << " n=" << t.n << " op=" << t.op + 1 << " bits=" << t.precision;
      for (const auto& r : t.residuals) std::cerr << " res=" << r.to_string(3);
      for (const auto& f : t.failed) std::cerr << " !" << f;
      char buf[32];
      std::snprintf(buf, sizeof buf, " (%.2fs)", secs);
      std::cerr << buf << "\n";
    };
  }
  hf::RunResult res = hf::run(ops, cfg, cb);
  hf::Certificate cert = hf::make_certificate(res);
  std::string text = hf::write_certificate(cert);
  std::ostream& table = print_cert_to_stdout ? std::cerr : std::cout;
  for (std::size_t i = 0; i < ops.size(); ++i) table << "T" << i + 1 << ": " << ops[i].describe() << "\n";
  print_table(table, res.records, ops.size());
  print_trends(table, res.records);
  table << "status: " << hf::to_string(res.status);
  if (!res.message.empty()) table << " (" << res.message << ")";
  table << "\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw hf::ParseError("cannot write '" + out_path + "'");
    out << text;
  } else if (print_cert_to_stdout) {
    std::cout << text;
  }
  return status_code(res.status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear factorizations of hypercyclic entire functions for T = phi(D), with certificates"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hf::kToolVersion);

  RunFlags cflags;
  std::string spec_path, preset_name, out_path;
  std::vector<std::string> operator_args;
  auto* construct = app.add_subcommand("construct", "run the stage construction and write a certificate");
  construct->add_option("spec", spec_path, "operator spec JSON file");
  construct->add_option("--preset", preset_name, "maclane, birkhoff, shifted-identity or multi");
  construct->add_option("--operators", operator_args, "operator spec (file or inline JSON); repeatable");
  construct->add_option("-o,--output", out_path, "certificate path (default: stdout)");
  add_run_flags(construct, cflags);

  std::string cert_path;
  auto* verify = app.add_subcommand("verify", "recompute every claim of a certificate");
  verify->add_option("certificate", cert_path, "certificate JSON file")->required();

  RunFlags dflags;
  std::string demo_name;
  auto* demo = app.add_subcommand("demo", "run a preset at small K and print the stage table");
  demo->add_option("name", demo_name, "maclane, birkhoff, shifted-identity or multi")->required();
  demo->add_option("-o,--output", out_path, "also write the certificate here");
  add_run_flags(demo, dflags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    if (*construct) {
      std::vector<hf::DiffOperator> ops;
      if (!preset_name.empty()) ops = hf::preset(preset_name).operators;
      if (!spec_path.empty()) {
        auto more = hf::parse_operator_specs(slurp(spec_path));
        ops.insert(ops.end(), more.begin(), more.end());
      }
      for (const auto& a : operator_args) {
        auto more = load_operators(a);
        ops.insert(ops.end(), more.begin(), more.end());
      }
      if (ops.empty()) throw hf::ParseError("no operator given (use a spec file, --preset or --operators)");
      return run_and_report(ops, cflags.config(), out_path, true, cflags.verbose);
    }
    if (*verify) {
      hf::Certificate cert = hf::read_certificate(slurp(cert_path));
      hf::PrecisionScope scope(cert.precision);
      hf::VerifyReport rep = hf::verify_certificate(cert.operators, cert.factors, cert.records);
      std::cout << "k    n     residual recorded -> recomputed        continuity max recorded -> recomputed  flags\n";
      for (const auto& s : rep.stages) {
        hf::Real rr, rc, cr, cc;
        for (const auto& x : s.residual_recorded) rr = hf::max(rr, x);
        for (const auto& x : s.residual_recomputed) rc = hf::max(rc, x);
        for (const auto& x : s.continuity_recorded) cr = hf::max(cr, x);
        for (const auto& x : s.continuity_recomputed) cc = hf::max(cc, x);
        char head[32];
        std::snprintf(head, sizeof head, "%-4zu %-5zu ", s.k, s.n);
        std::string a = sci(rr) + " -> " + sci(rc);
        a.resize(std::max<std::size_t>(a.size(), 36), ' ');
        std::string b = s.continuity_recorded.empty() ? "-" : sci(cr) + " -> " + sci(cc);
        b.resize(std::max<std::size_t>(b.size(), 40), ' ');
        std::cout << head << a << " " << b;
        for (std::size_t i = 0; i < s.flags.size(); ++i) std::cout << (i ? "; " : "") << s.flags[i];
        std::cout << "\n";
      }
      for (const auto& f : rep.flags) std::cout << "flag: " << f << "\n";
      std::cout << "factor product fidelity: " << sci(rep.fidelity) << "\n";
      std::cout << (rep.ok() ? "verification passed" : "verification FAILED: " + std::to_string(rep.flag_count()) +
                                                           " flag(s)")
                << "\n";
      return rep.ok() ? kOk : kFlagged;
    }
    if (*demo) {
      hf::Preset p = hf::preset(demo_name);
      hf::RunConfig cfg = dflags.config();
      if (demo->count("--stages") == 0) cfg.stages = p.demo_stages;
      // A demo shows every stage, certified or not.
      cfg.allow_best_effort = true;
      std::cout << "demo " << p.name << ": " << p.description << ", K = " << cfg.stages << "\n";
      return run_and_report(p.operators, cfg, out_path, false, dflags.verbose);
    }
  } catch (const hf::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const hf::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const hf::PrecisionError& e) {
    std::cerr << "precision exhausted: " << e.what() << "\n";
    return kPrecision;
  }
  return kInput;
}
