#include "zipfkit/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <json.hpp>

#include "tsv.hpp"
#include "zipfkit/error.hpp"

namespace zipfkit {
namespace {

constexpr double kDecadeSlack = 1e-12;

struct Ols {
  double slope = 0.0;
  double intercept = 0.0;
  double sse = 0.0;
  double syy = 0.0;
  double sxx = 0.0;
  std::size_t n = 0;
};

Ols ols(const double* x, const double* y, std::size_t n) {
  Ols r;
  r.n = n;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    r.sxx += dx * dx;
    sxy += dx * dy;
    r.syy += dy * dy;
  }
  r.slope = r.sxx > 0.0 ? sxy / r.sxx : 0.0;
  r.intercept = my - r.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (r.intercept + r.slope * x[i]);
    r.sse += e * e;
  }
  return r;
}

PowerLawFit to_fit(const Ols& o, FitWindow window) {
  PowerLawFit f;
  f.alpha = -o.slope;
  f.intercept = o.intercept;
  f.sse = o.sse;
  if (o.syy > 0.0) {
    f.r_squared = std::clamp(1.0 - o.sse / o.syy, 0.0, 1.0);
  } else {
    f.r_squared = 1.0;
  }
  f.alpha_stderr = (o.n > 2 && o.sxx > 0.0)
                       ? std::sqrt(o.sse / static_cast<double>(o.n - 2) / o.sxx)
                       : 0.0;
  f.window = window;
  f.n_points = o.n;
  return f;
}

// Clamps hi to the vocabulary and checks the window is usable.
FitWindow checked_window(const RankedDistribution& dist, FitWindow w, double min_decades) {
  if (dist.empty()) throw NumericError("cannot fit an empty distribution");
  if (w.lo < 1) throw NumericError("fit window must start at rank >= 1");
  if (w.lo >= w.hi) {
    throw NumericError(fmt::format("fit window {} is empty (need lo < hi)", to_string(w)));
  }
  const std::uint64_t v = dist.vocabulary();
  if (w.lo > v) {
    throw NumericError(fmt::format("fit window {} starts beyond the vocabulary size {}", to_string(w), v));
  }
  w.hi = std::min<std::uint64_t>(w.hi, v);
  if (w.hi - w.lo + 1 < 3) {
    throw NumericError(fmt::format("fit window {} holds fewer than 3 ranks", to_string(w)));
  }
  if (w.decades() < min_decades - kDecadeSlack) {
    throw NumericError(fmt::format(
        "fit window {} spans {:.3f} decades; at least {} are required for a meaningful exponent",
        to_string(w), w.decades(), min_decades));
  }
  return w;
}

struct LogPoints {
  std::vector<double> x;
  std::vector<double> y;
};

LogPoints log_points(const RankedDistribution& dist, FitWindow w) {
  LogPoints p;
  const std::size_t n = w.hi - w.lo + 1;
  p.x.reserve(n);
  p.y.reserve(n);
  for (std::uint64_t r = w.lo; r <= w.hi; ++r) {
    p.x.push_back(std::log10(static_cast<double>(r)));
    p.y.push_back(std::log10(dist.frequency(r)));
  }
  return p;
}

}  // namespace

double FitWindow::decades() const {
  return std::log10(static_cast<double>(hi)) - std::log10(static_cast<double>(lo));
}

FitWindow parse_window(std::string_view text) {
  auto parts = detail::split(text, ':');
  std::size_t lo = 0, hi = 0;
  if (parts.size() != 2 || !detail::parse_size(detail::trim(parts[0]), lo) ||
      !detail::parse_size(detail::trim(parts[1]), hi)) {
    throw ConfigError(fmt::format("window '{}' must look like lo:hi", text));
  }
  if (lo < 1 || lo >= hi) throw ConfigError(fmt::format("window '{}' needs 1 <= lo < hi", text));
  return FitWindow{lo, hi};
}

std::string to_string(const FitWindow& window) { return fmt::format("{}:{}", window.lo, window.hi); }

double PowerLawFit::predict_log10(double rank) const { return intercept - alpha * std::log10(rank); }

PowerLawFit fit_log_points(const std::vector<double>& log_rank, const std::vector<double>& log_freq,
                           FitWindow window) {
  if (log_rank.size() != log_freq.size()) throw NumericError("point arrays differ in length");
  if (log_rank.size() < 3) throw NumericError("need at least 3 points to fit");
  return to_fit(ols(log_rank.data(), log_freq.data(), log_rank.size()), window);
}

PowerLawFit fit_power_law(const RankedDistribution& dist, FitWindow window, const FitOptions& options) {
  const FitWindow w = checked_window(dist, window, kMinFitDecades);
  LogPoints p = log_points(dist, w);
  if (!options.log_binning) return to_fit(ols(p.x.data(), p.y.data(), p.x.size()), w);

  if (options.bins_per_decade < 1) throw ConfigError("bins_per_decade must be >= 1");
  const double per = options.bins_per_decade;
  const double origin = std::log10(static_cast<double>(w.lo));
  std::vector<double> bx, by;
  double sx = 0.0, sy = 0.0;
  std::size_t count = 0;
  long current = -1;
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    const long bin = static_cast<long>(std::floor((p.x[i] - origin) * per + 1e-9));
    if (bin != current && count > 0) {
      bx.push_back(sx / static_cast<double>(count));
      by.push_back(sy / static_cast<double>(count));
      sx = sy = 0.0;
      count = 0;
    }
    current = bin;
    sx += p.x[i];
    sy += p.y[i];
    ++count;
  }
  if (count > 0) {
    bx.push_back(sx / static_cast<double>(count));
    by.push_back(sy / static_cast<double>(count));
  }
  if (bx.size() < 3) {
    throw NumericError(fmt::format("log binning of window {} yields fewer than 3 bins", to_string(w)));
  }
  return to_fit(ols(bx.data(), by.data(), bx.size()), w);
}

std::vector<SegmentedFit> scan_breakpoints(const RankedDistribution& dist, FitWindow outer,
                                           const CrossoverOptions& options) {
  if (options.candidates_per_decade < 1) throw ConfigError("candidates_per_decade must be >= 1");
  const FitWindow w = checked_window(dist, outer, kMinCrossoverDecades);
  const LogPoints p = log_points(dist, w);

  std::vector<std::uint64_t> candidates;
  const double lo = static_cast<double>(w.lo);
  for (int k = 1;; ++k) {
    const double r = std::round(lo * std::pow(10.0, static_cast<double>(k) / options.candidates_per_decade));
    if (r >= static_cast<double>(w.hi)) break;
    const auto c = static_cast<std::uint64_t>(r);
    if (!candidates.empty() && candidates.back() == c) continue;
    const FitWindow low{w.lo, c};
    const FitWindow high{c, w.hi};
    if (low.decades() < options.min_segment_decades - kDecadeSlack) continue;
    if (high.decades() < options.min_segment_decades - kDecadeSlack) continue;
    candidates.push_back(c);
  }
  if (candidates.empty()) {
    throw NumericError(fmt::format("no breakpoint in {} leaves two segments of {} decades", to_string(w),
                                   options.min_segment_decades));
  }

  std::vector<SegmentedFit> fits;
  fits.reserve(candidates.size());
  for (std::uint64_t c : candidates) {
    const std::size_t split = c - w.lo;  // index of the breakpoint rank
    SegmentedFit s;
    s.breakpoint = c;
    s.outer = w;
    s.low_fit = to_fit(ols(p.x.data(), p.y.data(), split + 1), FitWindow{w.lo, c});
    s.high_fit = to_fit(ols(p.x.data() + split, p.y.data() + split, p.x.size() - split),
                        FitWindow{c, w.hi});
    s.total_sse = s.low_fit.sse + s.high_fit.sse;
    fits.push_back(s);
  }
  return fits;
}

SegmentedFit detect_crossover(const RankedDistribution& dist, FitWindow outer,
                              const CrossoverOptions& options) {
  const auto fits = scan_breakpoints(dist, outer, options);
  const SegmentedFit* best = &fits.front();
  for (const auto& f : fits) {
    if (f.total_sse < best->total_sse) best = &f;
  }
  return *best;
}

ResidualReport goodness_report(const RankedDistribution& dist, const PowerLawFit& fit) {
  ResidualReport rep;
  const FitWindow w = fit.window;
  if (w.lo < 1 || w.hi > dist.vocabulary() || w.lo > w.hi) {
    throw NumericError(fmt::format("fit window {} does not match the distribution", to_string(w)));
  }
  rep.residuals.reserve(w.hi - w.lo + 1);
  for (std::uint64_t r = w.lo; r <= w.hi; ++r) {
    const double res = std::log10(dist.frequency(r)) - fit.predict_log10(static_cast<double>(r));
    rep.residuals.push_back({r, res});
    rep.max_abs = std::max(rep.max_abs, std::abs(res));
  }

  SignRun cur;
  std::size_t n_pos = 0, n_neg = 0;
  auto close = [&] {
    if (cur.length == 0) return;
    ++rep.run_count;
    if (cur.length > rep.longest_run.length) rep.longest_run = cur;
    cur = {};
  };
  for (const auto& r : rep.residuals) {
    const int s = (r.value > 0.0) - (r.value < 0.0);
    if (s > 0) ++n_pos;
    if (s < 0) ++n_neg;
    if (s == 0 || s != cur.sign) close();
    if (s == 0) continue;
    if (cur.length == 0) {
      cur.first_rank = r.rank;
      cur.sign = s;
    }
    cur.last_rank = r.rank;
    ++cur.length;
  }
  close();

  const double n1 = static_cast<double>(n_pos), n2 = static_cast<double>(n_neg);
  const double n = n1 + n2;
  if (n1 > 0 && n2 > 0 && n > 1) {
    const double mean = 2.0 * n1 * n2 / n + 1.0;
    const double var = 2.0 * n1 * n2 * (2.0 * n1 * n2 - n) / (n * n * (n - 1.0));
    if (var > 0.0) rep.runs_z = (static_cast<double>(rep.run_count) - mean) / std::sqrt(var);
  }
  return rep;
}

namespace {

nlohmann::ordered_json fit_json(const PowerLawFit& fit) {
  nlohmann::ordered_json j;
  j["alpha"] = fit.alpha;
  j["intercept"] = fit.intercept;
  j["r_squared"] = fit.r_squared;
  j["alpha_stderr"] = fit.alpha_stderr;
  j["window"] = {{"lo", fit.window.lo}, {"hi", fit.window.hi}};
  j["n_points"] = fit.n_points;
  return j;
}

}  // namespace

std::string fit_to_json(const PowerLawFit& fit, int indent) { return fit_json(fit).dump(indent); }

std::string segmented_to_json(const SegmentedFit& fit, int indent) {
  nlohmann::ordered_json j;
  j["breakpoint"] = fit.breakpoint;
  j["low_fit"] = fit_json(fit.low_fit);
  j["high_fit"] = fit_json(fit.high_fit);
  j["total_sse"] = fit.total_sse;
  j["outer"] = {{"lo", fit.outer.lo}, {"hi", fit.outer.hi}};
  return j.dump(indent);
}

}  // namespace zipfkit
