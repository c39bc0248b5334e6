#pragma once

// Synthetic texts with known rank-frequency behaviour.
//
// All randomness comes from std::mt19937_64, whose output sequence is fixed
// by the C++ standard. Conversions to doubles, bounded integers and normal
// deviates are done here rather than through <random> distributions, whose
// algorithms vary between standard libraries.

#include <cstdint>
#include <random>
#include <string>

#include "zipfkit/ranking.hpp"
#include "zipfkit/text_ingest.hpp"

namespace zipfkit {

class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on [0, bound), bound > 0. Unbiased (rejection).
  std::uint64_t below(std::uint64_t bound);
  // Standard normal (Box-Muller, one deviate per call).
  double normal();

 private:
  std::mt19937_64 engine_;
};

// Random typing: i.i.d. characters, each of M letters with probability
// (1-q)/M, a space with probability q. Letters are 'a'.. in order.
struct MonkeyParams {
  int letters = 26;       // M, 2..26
  double space_probability = 0.2;  // q
  std::uint64_t length = 0;        // characters
  std::uint64_t seed = 1;
};

// 1 - ln(1-q) / ln M.
double analytic_monkey_alpha(int letters, double space_probability);

// Raw character sequence of the model.
std::string monkey_characters(const MonkeyParams& params);

// Maximal letter runs of monkey_characters(params).
TokenStream monkey_text(const MonkeyParams& params);

struct ZipfParams {
  double alpha = 1.0;
  std::uint64_t vocabulary = 1;  // V
  std::uint64_t tokens = 0;      // N
  std::uint64_t seed = 1;
};

// Letter-only name of the r-th synthetic word (bijective base 26:
// 1 -> "a", 26 -> "z", 27 -> "aa"), so generated text survives tokenize().
std::string synthetic_word(std::uint64_t index);

// N i.i.d. draws with p(r) = r^-alpha / sum_k k^-alpha over w_1..w_V.
TokenStream zipf_sample(const ZipfParams& params);

// N i.i.d. draws of words with probability proportional to their frequency.
TokenStream sample_distribution(const RankedDistribution& dist, std::uint64_t tokens,
                                std::uint64_t seed);

// Noise-free real-valued table f(r) = C r^-alpha, r = 1..V.
RankedDistribution exact_zipf_table(double alpha, std::uint64_t vocabulary, double scale);

struct TwoRegimeParams {
  double alpha_low = 1.0;
  double alpha_high = 1.6;
  std::uint64_t breakpoint = 1000;
  std::uint64_t vocabulary = 100000;
  double scale = 1.0e6;        // C
  double noise_sigma = 0.0;    // std dev of additive noise on log10 f
  std::uint64_t seed = 1;
};

// Real-valued f(r) = C r^-a1 for r <= r*, continued as
// C r*^-a1 (r/r*)^-a2 beyond, with optional Gaussian noise on log10 f.
// Noisy values are re-ranked, so rank r holds the r-th largest value.
RankedDistribution two_regime_table(const TwoRegimeParams& params);

}  // namespace zipfkit
