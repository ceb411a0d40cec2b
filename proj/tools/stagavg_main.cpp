// stagavg: experiment runner, constants calculator and auditors.
//
//   stagavg run --problem l1 --alpha 1e-3 --k-max 16 --seed 1 --out l1.csv
//   stagavg constants --problem asym --alpha 1e-3 --s 0.5
//   stagavg frame-doubling --problem l1 --dim 1 --frames 10 --z 4 --out fd.csv
//   stagavg verify --suite drift --seed 1
//
// Exit codes: 0 success, 2 invalid configuration, 3 numeric failure,
// 4 verification failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stagavg/stagavg.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitVerify = 4;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

// Fills options of `sub` that were not given on the command line from a flat
// `key = value` file. Keys are long option names without the dashes.
void apply_config_file(CLI::App& sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw stagavg::IoError(path, "cannot open config file");
  CLI::ConfigINI parser;
  for (const auto& item : parser.from_config(in)) {
    const std::string key = item.fullname();
    if (key == "config") throw stagavg::InvalidArgument("config files cannot nest");
    CLI::Option* opt = nullptr;
    try {
      opt = sub.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw stagavg::InvalidArgument(path + ": unknown key '" + key + "'");
    }
    if (opt->count() > 0) continue;
    std::string value;
    for (std::size_t i = 0; i < item.inputs.size(); ++i) {
      if (i) value += ',';
      value += item.inputs[i];
    }
    opt->add_result(value);
    opt->run_callback();
  }
}

struct ProblemArgs {
  std::string name = "l1";
  std::size_t dim = 100;
  double half_width = 4.0;
  double delta = 1e-6;

  void add_to(CLI::App& sub) {
    sub.add_option("--problem", name, "l1, asym or deadzone")->capture_default_str();
    sub.add_option("--dim", dim)->capture_default_str();
    sub.add_option("--half-width", half_width, "W = [-h, h]^n")->capture_default_str();
    sub.add_option("--delta", delta, "dead-zone width")->capture_default_str();
  }

  stagavg::ProblemSpec spec() const {
    stagavg::ProblemSpec s;
    s.name = name;
    s.dim = dim;
    s.half_width = half_width;
    s.delta = delta;
    return s;
  }
};

struct RunArgs {
  ProblemArgs problem;
  std::string variants = "staggered,constant,heuristic,polynomial";
  double alpha = 1e-4;
  double c = 1.0;
  std::uint64_t decay_eta = 3;
  std::uint64_t trials = 10;
  unsigned k_max = 18;
  std::uint64_t seed = 0;
  std::string out;
  std::optional<double> w0;
  unsigned threads = 0;
  std::string plot_script;
  std::string config;
};

int do_run(CLI::App& sub, const RunArgs& a) {
  if (!a.config.empty()) apply_config_file(sub, a.config);
  stagavg::ExperimentConfig cfg;
  cfg.problem = a.problem.spec();
  cfg.variants =
      stagavg::make_variants(split_list(a.variants), a.alpha, a.c, a.decay_eta, a.k_max);
  cfg.trials = a.trials;
  cfg.k_max = a.k_max;
  cfg.seed = a.seed;
  cfg.output_path = a.out;
  cfg.w0_fill = a.w0;
  cfg.threads = a.threads;

  const auto summary = stagavg::run_experiment(cfg);
  if (a.out.empty()) {
    std::cout << stagavg::to_csv(summary);
  } else {
    stagavg::write_csv(summary, a.out);
  }
  if (!a.plot_script.empty()) {
    if (a.out.empty()) throw stagavg::InvalidArgument("--plot-script needs --out");
    stagavg::emit_plot_script(a.out, a.plot_script);
  }
  return 0;
}

struct ConstantsArgs {
  ProblemArgs problem;
  double alpha = 1e-4;
  std::optional<double> s;
  std::optional<double> dist0;
  bool csv = false;
};

int do_constants(const ConstantsArgs& a) {
  const auto p = stagavg::make_problem(a.problem.spec());
  const auto report = stagavg::constants_report(p, a.alpha, a.s, a.dist0);
  std::cout << (a.csv ? stagavg::format_csv(report) : stagavg::format_human(report));
  return 0;
}

struct FrameArgs {
  ProblemArgs problem;
  std::uint64_t frames = 10;
  std::optional<double> z;
  std::optional<double> lipschitz;
  std::string out;
};

int do_frame(const FrameArgs& a) {
  const auto det = stagavg::make_problem(a.problem.spec()).deterministic();
  const double z = a.z.value_or(det.dist_to_opt(det.default_start()));
  const double h = a.lipschitz.value_or(det.g_bound());
  const auto fd = stagavg::make_frame_doubling_config(det, a.frames, z, h);
  const auto result = stagavg::frame_doubling_run(det, fd);

  std::ostringstream csv;
  csv << "frame,alpha,dist,bound\n";
  for (std::size_t i = 0; i < result.per_frame_dists.size(); ++i) {
    const int e = static_cast<int>(i);
    csv << i + 1 << ',' << stagavg::format_real(std::ldexp(1.0, -(e + 1))) << ','
        << stagavg::format_real(result.per_frame_dists[i]) << ','
        << stagavg::format_real(std::ldexp(fd.theta, -e)) << '\n';
  }
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw stagavg::IoError(a.out, "cannot open for writing");
    f << csv.str();
    if (!f) throw stagavg::IoError(a.out, "write failed");
  }
  std::cerr << "theta = " << stagavg::format_real(fd.theta) << ", frame_len = " << fd.frame_len
            << ", rounds = " << result.rounds << '\n';
  return 0;
}

struct VerifyArgs {
  std::string suite;
  std::uint64_t seed = 0;
};

int do_verify(const VerifyArgs& a) {
  std::vector<std::string_view> suites;
  if (a.suite == "all") {
    suites.assign(std::begin(stagavg::kSuites), std::end(stagavg::kSuites));
  } else {
    suites.push_back(a.suite);
  }
  bool failed = false;
  std::cout << stagavg::kReportHeader << '\n';
  for (auto suite : suites) {
    for (const auto& r : stagavg::run_suite(suite, a.seed)) {
      std::cout << stagavg::to_line(r) << '\n';
      std::cerr << "# " << r.name << ": " << r.detail << '\n';
      failed = failed || r.verdict == stagavg::Verdict::fail;
    }
  }
  return failed ? kExitVerify : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Staggered time-average subgradient experiments"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "run an averaging experiment and write a CSV summary");
  run_args.problem.add_to(*run);
  run->add_option("--variants", run_args.variants, "comma-separated list")
      ->capture_default_str();
  run->add_option("--alpha", run_args.alpha)->capture_default_str();
  run->add_option("--c", run_args.c, "heuristic step constant")->capture_default_str();
  run->add_option("--decay-eta", run_args.decay_eta)->capture_default_str();
  run->add_option("--trials", run_args.trials)->capture_default_str();
  run->add_option("--k-max", run_args.k_max, "horizon 2^k_max - 1")->capture_default_str();
  run->add_option("--seed", run_args.seed)->capture_default_str();
  run->add_option("--out", run_args.out, "CSV path (stdout when omitted)");
  run->add_option("--w0", run_args.w0, "start at (w0, ..., w0)");
  run->add_option("--threads", run_args.threads, "0 = hardware concurrency");
  run->add_option("--plot-script", run_args.plot_script, "also write a matplotlib script");
  run->add_option("--config", run_args.config, "key = value file; flags take precedence");

  ConstantsArgs const_args;
  auto* constants = app.add_subcommand("constants", "print the theory constants");
  const_args.problem.add_to(*constants);
  constants->add_option("--alpha", const_args.alpha)->capture_default_str();
  constants->add_option("--s", const_args.s, "S for problems without polyhedral structure");
  constants->add_option("--dist0", const_args.dist0, "initial distance (default: corner)");
  constants->add_flag("--csv", const_args.csv);

  FrameArgs frame_args;
  auto* frame = app.add_subcommand("frame-doubling", "deterministic frame-doubling run");
  frame_args.problem.add_to(*frame);
  frame->add_option("--frames", frame_args.frames, "M")->capture_default_str();
  frame->add_option("--z", frame_args.z, "bound on the initial distance");
  frame->add_option("--lipschitz", frame_args.lipschitz, "H");
  frame->add_option("--out", frame_args.out);

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "run an audit suite");
  verify->add_option("--suite", verify_args.suite, "drift, lemma2, concentration, bounds, frame or all")
      ->required();
  verify->add_option("--seed", verify_args.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*run) return do_run(*run, run_args);
    if (*constants) return do_constants(const_args);
    if (*frame) return do_frame(frame_args);
    if (*verify) return do_verify(verify_args);
  } catch (const stagavg::NumericFailure& e) {
    std::cerr << "stagavg: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const stagavg::Error& e) {
    std::cerr << "stagavg: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const CLI::ParseError& e) {
    std::cerr << "stagavg: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
