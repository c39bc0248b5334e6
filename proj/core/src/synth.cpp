#include "zipfkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "zipfkit/error.hpp"

namespace zipfkit {
namespace {

void check_monkey(int letters, double q) {
  if (letters < 2 || letters > 26) {
    throw ConfigError(fmt::format("monkey alphabet size must be in 2..26, got {}", letters));
  }
  if (!(q > 0.0 && q < 1.0)) {
    throw ConfigError(fmt::format("space probability must be in (0, 1), got {}", q));
  }
}

// Cumulative probabilities of the given weights, last entry exactly 1.
std::vector<double> cdf_of(const std::vector<double>& weights) {
  std::vector<double> cdf(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    cdf[i] = acc;
  }
  for (auto& c : cdf) c /= acc;
  if (!cdf.empty()) cdf.back() = 1.0;
  return cdf;
}

TokenStream draw(const std::vector<double>& cdf, const std::vector<std::string>& words,
                 std::uint64_t n, std::uint64_t seed) {
  SplitRng rng(seed);
  TokenStream out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    out.push_back({words[static_cast<std::size_t>(it - cdf.begin())], i});
  }
  return out;
}

}  // namespace

double SplitRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t SplitRng::below(std::uint64_t bound) {
  if (bound == 0) throw NumericError("SplitRng::below requires a positive bound");
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t x = next();
    if (x >= threshold) return x % bound;
  }
}

double SplitRng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double analytic_monkey_alpha(int letters, double space_probability) {
  check_monkey(letters, space_probability);
  return 1.0 - std::log(1.0 - space_probability) / std::log(static_cast<double>(letters));
}

std::string monkey_characters(const MonkeyParams& params) {
  check_monkey(params.letters, params.space_probability);
  const double q = params.space_probability;
  const double m = params.letters;
  SplitRng rng(params.seed);
  std::string text(params.length, ' ');
  for (auto& ch : text) {
    const double u = rng.uniform();
    if (u < q) continue;
    auto idx = static_cast<int>((u - q) / (1.0 - q) * m);
    idx = std::min(idx, params.letters - 1);
    ch = static_cast<char>('a' + idx);
  }
  return text;
}

TokenStream monkey_text(const MonkeyParams& params) {
  const std::string text = monkey_characters(params);
  TokenStream out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ') {
      ++i;
      continue;
    }
    const std::size_t begin = i;
    while (i < text.size() && text[i] != ' ') ++i;
    out.push_back({text.substr(begin, i - begin), out.size()});
  }
  return out;
}

std::string synthetic_word(std::uint64_t index) {
  if (index == 0) throw ConfigError("synthetic word indices start at 1");
  std::string s;
  while (index > 0) {
    --index;
    s.push_back(static_cast<char>('a' + index % 26));
    index /= 26;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

TokenStream zipf_sample(const ZipfParams& params) {
  if (params.vocabulary < 1) throw ConfigError("Zipf vocabulary must be >= 1");
  if (!(params.alpha >= 0.0) || !std::isfinite(params.alpha)) {
    throw ConfigError(fmt::format("Zipf exponent must be finite and >= 0, got {}", params.alpha));
  }
  std::vector<double> weights(params.vocabulary);
  std::vector<std::string> words(params.vocabulary);
  for (std::uint64_t r = 1; r <= params.vocabulary; ++r) {
    weights[r - 1] = std::pow(static_cast<double>(r), -params.alpha);
    words[r - 1] = synthetic_word(r);
  }
  return draw(cdf_of(weights), words, params.tokens, params.seed);
}

TokenStream sample_distribution(const RankedDistribution& dist, std::uint64_t tokens,
                                std::uint64_t seed) {
  if (dist.empty()) throw ConfigError("cannot sample from an empty distribution");
  std::vector<double> weights;
  std::vector<std::string> words;
  weights.reserve(dist.vocabulary());
  words.reserve(dist.vocabulary());
  for (const auto& e : dist.entries()) {
    weights.push_back(e.frequency);
    words.push_back(e.word);
  }
  return draw(cdf_of(weights), words, tokens, seed);
}

RankedDistribution exact_zipf_table(double alpha, std::uint64_t vocabulary, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ConfigError(fmt::format("scale C must be positive, got {}", scale));
  }
  if (!std::isfinite(alpha)) throw ConfigError("exponent must be finite");
  std::vector<std::pair<std::string, double>> items;
  items.reserve(vocabulary);
  for (std::uint64_t r = 1; r <= vocabulary; ++r) {
    items.emplace_back(synthetic_word(r), scale * std::pow(static_cast<double>(r), -alpha));
  }
  return RankedDistribution::from_frequencies(std::move(items), Fingerprint::of("synthetic/exact"),
                                              /*real_valued=*/true);
}

RankedDistribution two_regime_table(const TwoRegimeParams& p) {
  if (p.breakpoint < 1 || p.breakpoint > p.vocabulary) {
    throw ConfigError("two-regime breakpoint must lie within 1..V");
  }
  if (!(p.scale > 0.0) || p.noise_sigma < 0.0) throw ConfigError("invalid two-regime parameters");
  SplitRng rng(p.seed);
  const double log_c = std::log10(p.scale);
  const double log_b = std::log10(static_cast<double>(p.breakpoint));
  std::vector<std::pair<std::string, double>> items;
  items.reserve(p.vocabulary);
  for (std::uint64_t r = 1; r <= p.vocabulary; ++r) {
    const double lr = std::log10(static_cast<double>(r));
    double y = r <= p.breakpoint ? log_c - p.alpha_low * lr
                                 : log_c - p.alpha_low * log_b - p.alpha_high * (lr - log_b);
    if (p.noise_sigma > 0.0) y += p.noise_sigma * rng.normal();
    items.emplace_back(synthetic_word(r), std::pow(10.0, y));
  }
  return RankedDistribution::from_frequencies(std::move(items), Fingerprint::of("synthetic/two-regime"),
                                              /*real_valued=*/true);
}

}  // namespace zipfkit
