#include "stagavg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "stagavg/errors.hpp"
#include "stagavg/format.hpp"

namespace stagavg {

std::vector<SummaryRow> Summary::rows_for(Variant v) const {
  std::vector<SummaryRow> out;
  std::copy_if(rows.begin(), rows.end(), std::back_inserter(out),
               [v](const SummaryRow& r) { return r.variant == v; });
  return out;
}

std::vector<std::uint64_t> sampling_schedule(unsigned k_max) {
  if (k_max < 1 || k_max > 63) throw InvalidArgument("k_max must lie in [1, 63]");
  std::vector<std::uint64_t> out;
  for (unsigned k = 1; k <= k_max; ++k) out.push_back((std::uint64_t{1} << k) - 2);
  return out;
}

std::uint64_t trial_stream_id(Variant v, std::uint64_t trial) noexcept {
  return (static_cast<std::uint64_t>(v) << 48) ^ trial;
}

std::vector<AlgorithmConfig> make_variants(const std::vector<std::string>& names, double alpha,
                                           double heuristic_c, std::uint64_t decay_eta,
                                           unsigned k_max) {
  if (k_max < 1 || k_max > 63) throw InvalidArgument("k_max must lie in [1, 63]");
  std::vector<AlgorithmConfig> out;
  for (const auto& name : names) {
    AlgorithmConfig cfg;
    cfg.variant = parse_variant(name);
    cfg.alpha = alpha;
    cfg.heuristic_c = heuristic_c;
    cfg.decay_eta = decay_eta;
    cfg.horizon = (std::uint64_t{1} << k_max) - 1;
    out.push_back(std::move(cfg));
  }
  return out;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw InvalidArgument("trials must be >= 1");
  if (cfg.k_max < 1 || cfg.k_max > 62) throw InvalidArgument("k_max must lie in [1, 62]");
  if (cfg.variants.empty()) throw InvalidArgument("at least one variant is required");
  const std::uint64_t needed = (std::uint64_t{1} << cfg.k_max) - 1;
  for (std::size_t i = 0; i < cfg.variants.size(); ++i) {
    validate(cfg.variants[i]);
    if (cfg.variants[i].horizon < needed) {
      throw InvalidArgument("variant '" + std::string(to_string(cfg.variants[i].variant)) +
                            "': horizon must be >= 2^k_max - 1 = " + std::to_string(needed));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (cfg.variants[j].variant == cfg.variants[i].variant) {
        throw InvalidArgument("variant '" + std::string(to_string(cfg.variants[i].variant)) +
                              "' listed twice");
      }
    }
  }
}

Summary run_experiment(const ExperimentConfig& cfg) {
  return run_experiment(make_problem(cfg.problem), cfg);
}

Summary run_experiment(const Problem& p, const ExperimentConfig& cfg) {
  validate(cfg);
  const auto schedule = sampling_schedule(cfg.k_max);
  const std::size_t n_variants = cfg.variants.size();
  const std::size_t n_jobs = n_variants * cfg.trials;

  std::vector<AlgorithmConfig> variants = cfg.variants;
  if (cfg.w0_fill) {
    for (auto& v : variants) v.w0 = Point(p.dim(), *cfg.w0_fill);
  }

  std::vector<Trace> traces(n_jobs);
  std::vector<std::exception_ptr> errors(n_jobs);
  std::atomic<std::size_t> next_job{0};

  auto worker = [&] {
    for (std::size_t job = next_job++; job < n_jobs; job = next_job++) {
      const std::size_t vi = job / cfg.trials;
      const std::uint64_t trial = job % cfg.trials;
      const auto& vcfg = variants[vi];
      try {
        RandomSource src = make_stream(cfg.seed, trial_stream_id(vcfg.variant, trial));
        traces[job] = run(p, vcfg, src, schedule);
      } catch (const NumericFailure& e) {
        errors[job] = std::make_exception_ptr(NumericFailure(
            e.round(), "variant " + std::string(to_string(vcfg.variant)) + ", trial " +
                           std::to_string(trial) + ": " + e.what()));
      } catch (...) {
        errors[job] = std::current_exception();
      }
    }
  };

  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_jobs));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Summary summary;
  summary.trials = cfg.trials;
  summary.oracle_calls_per_trial.resize(n_variants);
  const double trials = static_cast<double>(cfg.trials);

  std::vector<std::size_t> order(n_variants);
  for (std::size_t i = 0; i < n_variants; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return variants[a].variant < variants[b].variant;
  });

  for (std::size_t vi : order) {
    const std::size_t base = vi * cfg.trials;
    for (std::uint64_t trial = 0; trial < cfg.trials; ++trial) {
      if (traces[base + trial].oracle_calls != variants[vi].horizon) {
        throw ContractViolation("oracle budget mismatch for variant " +
                                std::string(to_string(variants[vi].variant)));
      }
    }
    summary.oracle_calls_per_trial[vi] = variants[vi].horizon;
    for (std::size_t si = 0; si < schedule.size(); ++si) {
      double sum_gap = 0.0, sum_dist = 0.0;
      for (std::uint64_t trial = 0; trial < cfg.trials; ++trial) {
        const auto& s = traces[base + trial].samples[si];
        sum_gap += s.gap_estimate;
        sum_dist += s.dist;
      }
      const double mean = sum_gap / trials;
      double ss = 0.0;
      for (std::uint64_t trial = 0; trial < cfg.trials; ++trial) {
        const double d = traces[base + trial].samples[si].gap_estimate - mean;
        ss += d * d;
      }
      SummaryRow row;
      row.variant = variants[vi].variant;
      row.t = schedule[si];
      row.mean_gap = mean;
      row.stderr_gap = cfg.trials > 1 ? std::sqrt(ss / (trials - 1.0)) / std::sqrt(trials) : 0.0;
      row.mean_dist = sum_dist / trials;
      summary.rows.push_back(row);
    }
  }
  return summary;
}

std::string to_csv(const Summary& s) {
  std::string out = "variant,t,mean_gap,stderr_gap,mean_dist\n";
  for (const auto& r : s.rows) {
    out += to_string(r.variant);
    out += ',';
    out += std::to_string(r.t);
    out += ',';
    out += format_real(r.mean_gap);
    out += ',';
    out += format_real(r.stderr_gap);
    out += ',';
    out += format_real(r.mean_dist);
    out += '\n';
  }
  return out;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError(path, "cannot open for writing");
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  os.close();
  if (!os) throw IoError(path, "write failed");
}

std::string py_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\\' || c == '\'') out += '\\';
    out += c;
  }
  return out + "'";
}

}  // namespace

void write_csv(const Summary& s, const std::string& path) { write_file(path, to_csv(s)); }

void emit_plot_script(const std::string& csv_path, const std::string& out_path) {
  if (!std::filesystem::exists(csv_path)) throw IoError(csv_path, "CSV file does not exist");
  const std::string png = std::filesystem::path(csv_path).replace_extension(".png").string();
  std::string script = R"PY(#!/usr/bin/env python3
# Log-log plot of mean optimality gap against round, one curve per variant.
# Usage: python3 <script> [csv] [png]
import csv
import sys
from collections import OrderedDict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

CSV_PATH = @CSV@
PNG_PATH = @PNG@


def main():
    csv_path = sys.argv[1] if len(sys.argv) > 1 else CSV_PATH
    png_path = sys.argv[2] if len(sys.argv) > 2 else PNG_PATH
    curves = OrderedDict()
    with open(csv_path, newline="") as f:
        for row in csv.DictReader(f):
            t = int(row["t"])
            gap = float(row["mean_gap"])
            if t > 0 and gap > 0:
                curves.setdefault(row["variant"], []).append((t, gap))
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for name, pts in curves.items():
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", markersize=3, label=name)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("round t")
    ax.set_ylabel("mean F(estimate) - F*")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    print(png_path)


if __name__ == "__main__":
    main()
)PY";
  auto replace = [&script](const std::string& key, const std::string& value) {
    script.replace(script.find(key), key.size(), value);
  };
  replace("@CSV@", py_quote(csv_path));
  replace("@PNG@", py_quote(png));
  write_file(out_path, script);
}

}  // namespace stagavg
