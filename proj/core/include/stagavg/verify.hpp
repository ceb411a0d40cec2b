#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stagavg/algorithms.hpp"
#include "stagavg/harness.hpp"
#include "stagavg/problem.hpp"

namespace stagavg {

enum class Verdict { pass, fail, inconclusive };

std::string_view to_string(Verdict v) noexcept;

/// Outcome of one auditor. `observed` and `threshold` are reported so that a
/// failure can be reproduced and judged from the line alone.
struct CheckReport {
  std::string name;
  Verdict verdict = Verdict::fail;
  double observed = 0.0;
  double threshold = 0.0;
  std::uint64_t samples = 0;
  std::string detail;

  bool passed() const noexcept { return verdict == Verdict::pass; }
};

/// `name,passed,observed,threshold,samples`
std::string to_line(const CheckReport& r);
inline constexpr std::string_view kReportHeader = "name,passed,observed,threshold,samples";

/// Pathwise |K_{t+1} − K_t| ≤ 2·α_t·G on every step of a full run, with
/// 1e-9 absolute slack. `observed` is max_t (|ΔK| − 2α_tG).
CheckReport check_lemma2(const Problem& p, const AlgorithmConfig& cfg, RandomSource& src);

/// Monte-Carlo one-step drift at `w`: mean K' ≤ K − α·L/2 + 4·stderr with
/// L = L_P, or η(S) for general problems (pass `s`). Requires K(w) at least
/// α·B_P (resp. B_G(α, S)) and n ≥ 1000 unless the problem is deterministic.
CheckReport check_drift(const Problem& p, double alpha, const Point& w, std::uint64_t n,
                        RandomSource& src, std::optional<double> s = std::nullopt);

struct ConcentrationOptions {
  std::optional<Point> w0;               ///< default: problem's default start
  std::optional<double> s;               ///< required for general problems
  std::vector<std::uint64_t> sample_at;  ///< default: 0, powers of two, T, rounds − 1
};

/// Exponential-moment envelope E[e^{rK_t/α}] ≤ D + e^{rK_0/α}ρ^t (5·stderr
/// slack) and, for t ≥ T, E[K_t²] ≤ α²U. Requires trials ≥ 100. Reports
/// inconclusive when the moment would overflow.
CheckReport check_concentration(const Problem& p, double alpha, std::uint64_t trials,
                                std::uint64_t rounds, RandomSource& src,
                                const ConcentrationOptions& options = {});

struct TheoremBoundOptions {
  Variant variant = Variant::staggered;
  std::optional<double> s;      ///< required for general problems
  std::optional<double> dist0;  ///< default: distance of the default start
};

/// For every sampled round t = 2^{k+1} − 2 whose block starts at
/// 2^k − 1 ≥ transient: mean_gap ≤ αG²/2 + αU/(2·2^k) + 4·stderr.
/// Inconclusive when no sampled block is post-transient.
CheckReport check_theorem_bound(const Summary& summary, const Problem& p, double alpha,
                                const TheoremBoundOptions& options = {});

/// ‖w_[i] − w_[i]*‖ ≤ θ·2^{−(i−1)} for i = 1..M+1 and
/// F(w_[M+1]) − F* ≤ θ·H·2^{−M}, compared exactly.
CheckReport check_frame_doubling(const Problem& p, const FrameDoublingConfig& fd);

inline constexpr std::string_view kSuites[] = {"drift", "lemma2", "concentration", "bounds",
                                               "frame"};

/// Built-in audit suites. Throws InvalidArgument for unknown suite names.
std::vector<CheckReport> run_suite(std::string_view suite, std::uint64_t seed);

}  // namespace stagavg
