#pragma once

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "capelli/capelli.hpp"

#ifndef CAPELLI_DEFAULT_LEDGER
#define CAPELLI_DEFAULT_LEDGER "data/conventions.json"
#endif

namespace capelli::cli {

enum ExitCode { kOk = 0, kFailed = 1, kUsage = 2 };

/// Raised for bad input; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string ledger_path() {
  if (const char* env = std::getenv("CAPELLI_LEDGER"); env != nullptr && *env != '\0') return env;
  return CAPELLI_DEFAULT_LEDGER;
}

inline const std::vector<std::string>& identity_names() {
  static const std::vector<std::string> names{"capelli",       "theorem1", "cauchy_binet", "turnbull",
                                              "turnbull_lemma", "cayley",   "dual_capelli"};
  return names;
}

inline CapelliConfig read_config(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("malformed config JSON in " + path + ": " + e.what());
  }
  CapelliConfig c = [&] {
    try {
      return config_from_json(j);
    } catch (const std::invalid_argument& e) {
      throw UsageError(path + ": " + e.what());
    }
  }();
  if (c.n() != n) throw UsageError("config has n=" + std::to_string(c.n()) + " but --n " + std::to_string(n));
  return c;
}

struct VerifyArgs {
  std::string identity;
  int n = 0;
  std::optional<int> m;
  std::optional<int> s;
  bool json = false;
  bool large = false;
  int offset_perturbation = 0;
};

inline VerificationReport dispatch_verify(const VerifyArgs& a) {
  const VerifyOptions opts{.allow_large = a.large, .offset_perturbation = a.offset_perturbation};
  auto conventions = ConventionLedger::load(ledger_path());
  if (a.identity == "capelli") return verify_capelli(a.n, opts);
  if (a.identity == "theorem1") return verify_theorem1(a.n, {kNormalVariant, kDualVariant}, opts);
  if (a.identity == "turnbull_lemma") return verify_turnbull_lemma(a.n, opts);
  if (a.identity == "cayley") {
    if (!a.s) throw UsageError("verify cayley requires --s");
    return verify_cayley(a.n, *a.s, opts);
  }
  if (a.identity == "cauchy_binet") {
    if (!a.m) throw UsageError("verify cauchy_binet requires --m");
    return verify_cauchy_binet(a.n, *a.m, conventions.resolve(a.identity), opts);
  }
  if (a.identity == "turnbull") return verify_turnbull(a.n, conventions.resolve(a.identity), opts);
  if (a.identity == "dual_capelli") return verify_dual_capelli(a.n, conventions.resolve(a.identity), opts);
  throw UsageError("unknown identity '" + a.identity + "'");
}

inline void print_human(const VerificationReport& r, std::ostream& out) {
  out << r.identity << " n=" << r.n;
  if (r.m) out << " m=" << *r.m;
  if (r.s) out << " s=" << *r.s;
  out << ": " << (r.passed ? "PASS" : "FAIL") << " (residual " << r.residual_terms << " terms)\n";
  if (r.pinned_convention) out << "convention: " << *r.pinned_convention << '\n';
}

inline void print_config(const CapelliConfig& c, std::ostream& out) {
  out << to_json(c).dump() << '\n' << diagram(c);
}

/// Entry point. args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact verifier for Capelli-type identities in the polynomial Weyl algebra", "capelli"};
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check one identity by exact normal-form comparison");
  verify->add_option("identity", va.identity, "capelli | theorem1 | cauchy_binet | turnbull | turnbull_lemma | cayley | dual_capelli")
      ->required();
  verify->add_option("--n", va.n, "Matrix size")->required();
  verify->add_option("--m", va.m, "Number of rows (cauchy_binet)");
  verify->add_option("--s", va.s, "Determinant power (cayley)");
  verify->add_flag("--json", va.json, "Print the report as JSON");
  verify->add_flag("--large", va.large, "Allow n = 4");
  verify->add_option("--offset-perturbation", va.offset_perturbation)->group("");

  int n = 0;
  int cls = 1;
  int m = 1;
  std::string config_path;
  auto* enumerate = app.add_subcommand("configs-enumerate", "List the configuration class C^M");
  enumerate->add_option("--n", n)->required();
  enumerate->add_option("--class", cls, "Class index M in [1, n+1]");

  auto* trace = app.add_subcommand("configs-trace", "Run the splicing algorithm step by step");
  trace->add_option("--n", n)->required();
  trace->add_option("--config", config_path, "Configuration JSON file")->required();

  auto* fib = app.add_subcommand("fiber", "Preimages of a configuration under one step");
  fib->add_option("--n", n)->required();
  fib->add_option("--m", m)->required();
  fib->add_option("--config", config_path)->required();

  std::string pin_identity;
  std::optional<int> pin_m;
  auto* pin = app.add_subcommand("pin", "Resolve an identity's offset convention and record it in the ledger");
  pin->add_option("identity", pin_identity, "cauchy_binet | turnbull | dual_capelli")->required();
  pin->add_option("--n", n)->required();
  pin->add_option("--m", pin_m);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (verify->parsed()) {
      if (std::find(identity_names().begin(), identity_names().end(), va.identity) == identity_names().end())
        throw UsageError("unknown identity '" + va.identity + "'");
      const auto report = dispatch_verify(va);
      if (va.json)
        out << to_json(report).dump() << '\n';
      else
        print_human(report, out);
      return report.passed ? kOk : kFailed;
    }
    if (enumerate->parsed()) {
      if (n < 1 || n > 6) throw UsageError("configs-enumerate supports 1 <= n <= 6");
      const auto configs = enumerate_configs(n, cls);
      for (const auto& c : configs) out << to_json(c).dump() << '\n';
      out << configs.size() << " configurations in C^" << cls << " (n=" << n << ")\n";
      return kOk;
    }
    if (trace->parsed()) {
      const auto c = read_config(config_path, n);
      const auto steps = lambda_trace(c);
      out << "start\n";
      print_config(steps.front(), out);
      for (int step = 1; step <= n; ++step) {
        if (steps[step] == steps[step - 1]) {
          out << "L^" << step << ": unchanged\n";
        } else {
          out << "L^" << step << ":\n";
          print_config(steps[step], out);
        }
      }
      return kOk;
    }
    if (fib->parsed()) {
      const auto c = read_config(config_path, n);
      const auto preimages = fiber(c, m);
      for (const auto& p : preimages) print_config(p, out);
      out << preimages.size() << " preimage" << (preimages.size() == 1 ? "" : "s") << " under L^" << m << '\n';
      return kOk;
    }
    if (pin->parsed()) {
      if (!is_pinnable(pin_identity)) throw UsageError("no convention to pin for '" + pin_identity + "'");
      if (n < 1 || n > 3) throw UsageError("pin supports 1 <= n <= 3");
      auto pinned = pin_convention(pin_identity, n, pin_m);
      const auto path = ledger_path();
      auto ledger = ConventionLedger::load(path);
      ledger.put(pinned);
      ledger.save(path);
      out << pin_identity << ": " << pinned.convention.describe() << '\n' << "ledger: " << path << '\n';
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kUsage;
}

}  // namespace capelli::cli
