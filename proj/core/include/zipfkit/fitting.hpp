#pragma once

// Log-log least-squares estimation of the rank-frequency exponent, and
// two-segment (crossover) fits.
//
// f(r) ~ C * r^(-alpha) is fitted as log10 f = intercept - alpha * log10 r by
// unweighted OLS with one point per integer rank in the window.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "zipfkit/ranking.hpp"

namespace zipfkit {

struct FitWindow {
  std::uint64_t lo = 1;
  std::uint64_t hi = 1;

  double decades() const;

  friend bool operator==(const FitWindow&, const FitWindow&) = default;
};

// Parses "lo:hi".
FitWindow parse_window(std::string_view text);
std::string to_string(const FitWindow& window);

inline constexpr double kMinFitDecades = 0.5;
inline constexpr double kMinCrossoverDecades = 1.5;
inline constexpr int kDefaultCandidatesPerDecade = 50;

struct FitOptions {
  // Per-bin means of log10 r and log10 f, bins_per_decade geometric bins.
  // Smoothing for plots; the exponent is then fitted on bin centres.
  bool log_binning = false;
  int bins_per_decade = 10;
};

struct PowerLawFit {
  double alpha = 0.0;         // -slope
  double intercept = 0.0;     // log10 f at log10 r = 0
  double r_squared = 0.0;
  double alpha_stderr = 0.0;
  double sse = 0.0;           // residual sum of squares, log10 units
  FitWindow window;           // clamped to the vocabulary
  std::size_t n_points = 0;   // ranks (or bins) used

  double predict_log10(double rank) const;
};

// Throws NumericError when the (clamped) window spans fewer than 0.5 decades
// or holds fewer than 3 points.
PowerLawFit fit_power_law(const RankedDistribution& dist, FitWindow window,
                          const FitOptions& options = {});

// OLS on explicit (log10 r, log10 f) points; the window is recorded as given.
PowerLawFit fit_log_points(const std::vector<double>& log_rank, const std::vector<double>& log_freq,
                           FitWindow window);

struct SegmentedFit {
  std::uint64_t breakpoint = 0;
  PowerLawFit low_fit;   // [outer.lo, breakpoint]
  PowerLawFit high_fit;  // [breakpoint, outer.hi]
  double total_sse = 0.0;
  FitWindow outer;
};

struct CrossoverOptions {
  int candidates_per_decade = kDefaultCandidatesPerDecade;
  double min_segment_decades = kMinFitDecades;
};

// Every admissible candidate breakpoint, in ascending order.
std::vector<SegmentedFit> scan_breakpoints(const RankedDistribution& dist, FitWindow outer,
                                           const CrossoverOptions& options = {});

// Minimum total SSE over the log-spaced candidate grid, ties to the smallest
// breakpoint. The outer window must span at least 1.5 decades.
SegmentedFit detect_crossover(const RankedDistribution& dist, FitWindow outer,
                              const CrossoverOptions& options = {});

struct Residual {
  std::uint64_t rank = 0;
  double value = 0.0;  // log10 f(r) - fitted log10 f(r)
};

struct SignRun {
  std::uint64_t first_rank = 0;
  std::uint64_t last_rank = 0;
  std::size_t length = 0;
  int sign = 0;  // +1, -1 (zero residuals break runs)
};

struct ResidualReport {
  std::vector<Residual> residuals;
  double max_abs = 0.0;
  std::size_t run_count = 0;
  SignRun longest_run;
  // Wald-Wolfowitz runs test; strongly negative values mean systematic
  // curvature rather than scatter. Zero when undefined.
  double runs_z = 0.0;
};

ResidualReport goodness_report(const RankedDistribution& dist, const PowerLawFit& fit);

std::string fit_to_json(const PowerLawFit& fit, int indent = -1);
std::string segmented_to_json(const SegmentedFit& fit, int indent = -1);

}  // namespace zipfkit
