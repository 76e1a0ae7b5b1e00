#include "terzatic/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "terzatic/functional.hpp"
#include "terzatic/instance_io.hpp"
#include "terzatic/oracle.hpp"

namespace terzatic {
namespace {

using nlohmann::json;

struct Common {
  std::optional<std::size_t> cap;
  std::optional<double> tolerance;
};

std::size_t resolve_cap(const Common& common) {
  if (common.cap) return *common.cap;
  if (const char* env = std::getenv("TERZATIC_CAP"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || v == 0) throw ValidationError("must be a positive integer", "TERZATIC_CAP");
    return static_cast<std::size_t>(v);
  }
  return kDefaultEnumerationCap;
}

SizeRange parse_range(const std::string& text, const std::string& path) {
  const auto colon = text.find(':');
  try {
    std::size_t used = 0;
    if (colon == std::string::npos) {
      const auto v = std::stoul(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {v, v};
    }
    const auto lo = std::stoul(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(text);
    const std::string hi_text = text.substr(colon + 1);
    const auto hi = std::stoul(hi_text, &used);
    if (used != hi_text.size()) throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw ValidationError("expected <min>:<max>, got '" + text + "'", path);
  }
}

template <Scalar T>
std::string print_scalar(const T& v) {
  if constexpr (is_exact_v<T>) {
    return format_rational(v);
  } else {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
}

template <Scalar T>
SimpleInstance<T> single_block(const GeneralInstance<T>& g, WeightFamily family) {
  if (g.k() != 1) throw ValidationError("this operation needs exactly one block", "instance.blocks");
  return SimpleInstance<T>(g.weights(0, family), g.block(0).x);
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string file;
  std::string functional = "generalized";
  std::string family = "p";
};

int cmd_eval(const EvalArgs& a, const Common& common, std::ostream& out) {
  const WeightFamily family = a.family == "r" ? WeightFamily::r : WeightFamily::p;
  const std::size_t cap = resolve_cap(common);
  return std::visit(
      [&](const auto& file) {
        const auto& g = file.instance;
        if (a.functional == "jensen") {
          out << print_scalar(jensen(file.function, single_block(g, family))) << "\n";
        } else {
          out << print_scalar(generalized_jensen(file.function, g, family, cap)) << "\n";
        }
        return int{kExitOk};
      },
      read_instance_file(a.file));
}

// ---- check -----------------------------------------------------------------

struct CheckArgs {
  std::string file;
  std::string target = "def2";
  std::optional<std::string> direction;
  bool literal = false;
};

template <Scalar T>
CheckReport<T> run_check(const InstanceFile<T>& file, FuzzTarget target, const RatioCheckOptions& opts) {
  const FunctionModel<T> f = file.effective_function();
  const auto& g = file.instance;
  switch (target) {
    case FuzzTarget::def2:
      return check_def2(f, single_block(g, WeightFamily::p), opts.direction, std::optional<T>{}, opts);
    case FuzzTarget::lemma5:
      return check_lemma5(f, g, opts.direction, std::optional<T>{}, opts);
    case FuzzTarget::thm6_lower:
      return theorem6_lower_check(f, g, opts);
    case FuzzTarget::thm6_upper:
      return theorem6_upper_check(f, g, opts);
    case FuzzTarget::cor8_lower:
    case FuzzTarget::cor8_upper: {
      if (g.k() != 1) throw ValidationError("this operation needs exactly one block", "instance.blocks");
      if (!g.has_r()) throw ValidationError("missing field", "instance.r_blocks");
      return corollary8_check(f, g.block(0).x, g.block(0).p, (*g.r_blocks())[0],
                              target == FuzzTarget::cor8_lower ? Side::lower : Side::upper, Certificate<T>::of(f),
                              opts);
    }
  }
  throw std::logic_error("unhandled target");
}

int cmd_check(const CheckArgs& a, const Common& common, std::ostream& out) {
  const FuzzTarget target = parse_fuzz_target(a.target);
  RatioCheckOptions opts;
  opts.cap = resolve_cap(common);
  opts.relative_tolerance = common.tolerance;
  if (a.direction) opts.direction = parse_direction(*a.direction);
  opts.verify_literal_forms = a.literal;
  return std::visit(
      [&](const auto& file) {
        const auto report = run_check(file, target, opts);
        out << to_json(report).dump(2) << "\n";
        return report.verdict == Verdict::violated ? int{kExitViolated} : int{kExitOk};
      },
      read_instance_file(a.file));
}

// ---- certificate -----------------------------------------------------------

struct CertificateArgs {
  std::string function = "power:3";
  std::string x_bar;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::string n_range = "2:6";
  std::string mode = "float";
  std::string domain_upper = "1";
};

template <Scalar T>
int certificate_in_mode(const CertificateArgs& a, std::ostream& out) {
  const auto f = parse_function_spec<T>(a.function);
  const T x_bar = parse_scalar<T>(a.x_bar);
  const T upper = parse_scalar<T>(a.domain_upper);
  const auto est = estimate_certificate(f, x_bar, parse_range(a.n_range, "n_range"), a.trials, a.seed, upper);
  out << to_json(est).dump(2) << "\n";
  return kExitOk;
}

int cmd_certificate(const CertificateArgs& a, std::ostream& out) {
  if (a.mode == "rational") return certificate_in_mode<Rational>(a, out);
  return certificate_in_mode<double>(a, out);
}

// ---- fuzz ------------------------------------------------------------------

struct FuzzArgs {
  std::string target = "def2";
  std::string function = "power:3";
  std::optional<std::string> certificate;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::string mode = "float";
  std::string k_range = "1:3";
  std::string n_range = "1:4";
  std::string domain_upper = "1";
  std::optional<std::string> direction;
  bool r_equals_p = false;
  std::string out_dir = "reproducers";
  std::size_t max_reproducers = 20;
};

template <Scalar T>
void write_reproducers(const FuzzConfig<T>& config, const FuzzReport<T>& report, const FuzzArgs& a,
                       std::ostream& err) {
  namespace fs = std::filesystem;
  fs::create_directories(a.out_dir);
  const FunctionModel<T> f = config.certificate ? config.function.with_certificate(config.certificate) : config.function;
  const std::size_t count = std::min(report.violations.size(), a.max_reproducers);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& v = report.violations[i];
    json doc = to_json(InstanceFile<T>{config.function, f.certificate(), v.instance});
    doc["reproducer"] = {{"target", std::string(to_string(config.target))},
                         {"seed", config.seed},
                         {"trial", v.trial},
                         {"sub_seed", v.sub_seed},
                         {"slack", scalar_to_json(v.report.slack)}};
    const fs::path path = fs::path(a.out_dir) / ("violation_" + std::to_string(v.trial) + ".json");
    std::ofstream file(path);
    file << doc.dump(2) << "\n";
    if (!file) throw ValidationError("cannot write reproducer '" + path.string() + "'", "out");
  }
  err << "wrote " << count << " reproducer(s) to " << a.out_dir << "\n";
}

template <Scalar T>
int fuzz_in_mode(const FuzzArgs& a, const Common& common, std::ostream& out, std::ostream& err) {
  FuzzConfig<T> config{.target = parse_fuzz_target(a.target), .function = parse_function_spec<T>(a.function)};
  if (a.certificate) config.certificate = parse_coefficients<T>(*a.certificate);
  config.trials = a.trials;
  config.seed = a.seed;
  config.shape.k = parse_range(a.k_range, "k_range");
  config.shape.n = parse_range(a.n_range, "n_range");
  config.domain_upper = parse_scalar<T>(a.domain_upper);
  if (a.direction) config.direction = parse_direction(*a.direction);
  config.force_r_equals_p = a.r_equals_p;
  config.relative_tolerance = common.tolerance;
  config.cap = resolve_cap(common);

  const auto report = run_fuzz(config);
  out << to_json(report).dump(2) << "\n";
  if (report.violations.empty()) return kExitOk;
  write_reproducers(config, report, a, err);
  return kExitViolated;
}

int cmd_fuzz(const FuzzArgs& a, const Common& common, std::ostream& out, std::ostream& err) {
  if (a.mode == "rational") return fuzz_in_mode<Rational>(a, common, out, err);
  return fuzz_in_mode<double>(a, common, out, err);
}

// ---- selftest --------------------------------------------------------------

int cmd_selftest(std::ostream& out) {
  const auto result = oracle::run_selftest(oracle::pinned_examples());
  for (const auto& failure : result.failures) out << "FAIL " << failure << "\n";
  out << "selftest: " << result.passed << " passed, " << result.failures.size() << " failed in "
      << result.elapsed.count() << " s\n";
  return result.ok() ? kExitOk : kExitViolated;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jensen-functional bounds: evaluation, checks, certificate estimation and fuzzing", "terzatic"};
  app.require_subcommand(1);
  Common common;

  const auto add_common = [&](CLI::App* sub, bool with_tolerance) {
    sub->add_option("--cap", common.cap, "Multi-index enumeration cap (overrides TERZATIC_CAP)")
        ->check(CLI::PositiveNumber);
    if (with_tolerance) sub->add_option("--tolerance", common.tolerance, "Relative verdict tolerance");
  };
  const std::vector<std::string> modes{"float", "rational"};

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate the Jensen or generalized Jensen functional");
  eval_cmd->add_option("file", eval.file, "Instance file")->required();
  eval_cmd->add_option("--functional", eval.functional)->check(CLI::IsMember({"jensen", "generalized"}));
  eval_cmd->add_option("--family", eval.family)->check(CLI::IsMember({"p", "r"}));
  add_common(eval_cmd, false);

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Check one inequality on an instance file");
  check_cmd->add_option("file", check.file, "Instance file")->required();
  check_cmd->add_option("--target", check.target, "def2|lemma5|thm6-lower|thm6-upper|cor8-lower|cor8-upper");
  check_cmd->add_option("--direction", check.direction)->check(CLI::IsMember({"super", "sub"}));
  check_cmd->add_flag("--literal", check.literal, "Also evaluate the uncompressed displays and require agreement");
  add_common(check_cmd, true);

  CertificateArgs cert;
  auto* cert_cmd = app.add_subcommand("certificate", "Estimate the sharp certificate constant at a barycenter");
  cert_cmd->add_option("--function", cert.function, "power:<p> | cube_log | poly:<c0,...> | a*f+b*g");
  cert_cmd->add_option("--x-bar", cert.x_bar, "Barycenter, strictly inside (0, a)")->required();
  cert_cmd->add_option("--trials", cert.trials);
  cert_cmd->add_option("--seed", cert.seed);
  cert_cmd->add_option("--n-range", cert.n_range, "<min>:<max> points per instance");
  cert_cmd->add_option("--mode", cert.mode)->check(CLI::IsMember(modes));
  cert_cmd->add_option("--domain-upper", cert.domain_upper);

  FuzzArgs fuzz;
  auto* fuzz_cmd = app.add_subcommand("fuzz", "Search random instances for violations");
  fuzz_cmd->add_option("--target", fuzz.target);
  fuzz_cmd->add_option("--function", fuzz.function);
  fuzz_cmd->add_option("--certificate", fuzz.certificate, "Polynomial coefficients c0,c1,... in the barycenter");
  fuzz_cmd->add_option("--trials", fuzz.trials);
  fuzz_cmd->add_option("--seed", fuzz.seed);
  fuzz_cmd->add_option("--mode", fuzz.mode)->check(CLI::IsMember(modes));
  fuzz_cmd->add_option("--k-range", fuzz.k_range);
  fuzz_cmd->add_option("--n-range", fuzz.n_range);
  fuzz_cmd->add_option("--domain-upper", fuzz.domain_upper);
  fuzz_cmd->add_option("--direction", fuzz.direction)->check(CLI::IsMember({"super", "sub"}));
  fuzz_cmd->add_flag("--r-equals-p", fuzz.r_equals_p);
  fuzz_cmd->add_option("--out", fuzz.out_dir, "Directory for reproducer files");
  fuzz_cmd->add_option("--max-reproducers", fuzz.max_reproducers);
  add_common(fuzz_cmd, true);

  auto* selftest_cmd = app.add_subcommand("selftest", "Recompute the pinned exact examples");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*eval_cmd) return cmd_eval(eval, common, out);
    if (*check_cmd) return cmd_check(check, common, out);
    if (*cert_cmd) return cmd_certificate(cert, out);
    if (*fuzz_cmd) return cmd_fuzz(fuzz, common, out, err);
    if (*selftest_cmd) return cmd_selftest(out);
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace terzatic
