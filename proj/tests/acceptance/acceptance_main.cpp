// Acceptance suite. Prints one PASS / FAIL / SKIP line per criterion.
//
//   zipfkit_acceptance [--report] [1..8 ...]
//
// Exit status: 0 when every selected criterion passed, 1 on any FAIL,
// 77 when everything selected was skipped. --report always exits 0 once
// the criteria have run (used for criteria that are known to be red).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "zipfkit/corpus.hpp"
#include "zipfkit/fitting.hpp"
#include "zipfkit/lexicon.hpp"
#include "zipfkit/ranking.hpp"
#include "zipfkit/synth.hpp"
#include "zipfkit/text_ingest.hpp"

namespace fs = std::filesystem;
using namespace zipfkit;

namespace {

enum class Verdict { kPass, kFail, kSkip };

struct Outcome {
  Verdict verdict = Verdict::kPass;
  std::string summary;
  std::vector<std::string> details;
};

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

// --- 1 -------------------------------------------------------------------

Outcome exact_recovery() {
  auto d = exact_zipf_table(1.0, 10000, 1e6);
  auto fit = fit_power_law(d, {10, 10000});
  const double err = std::abs(fit.alpha - 1.0);
  Outcome o;
  o.verdict = err <= 1e-10 && std::abs(fit.r_squared - 1.0) <= 1e-12 ? Verdict::kPass : Verdict::kFail;
  o.summary = fmt::format("alpha={:.12f} |err|={:.1e} (tol 1e-10) r2={:.15f}", fit.alpha, err,
                          fit.r_squared);
  return o;
}

// --- 2 -------------------------------------------------------------------

// The window is fixed before looking at the data: two decades starting past
// the single-letter words.
constexpr FitWindow kMonkeyWindow{10, 10000};

Outcome monkey_oracle() {
  const MonkeyParams p{26, 0.2, 10000000, 20240601};
  auto d = rank(count_frequencies(monkey_text(p)));
  const double truth = analytic_monkey_alpha(p.letters, p.space_probability);
  auto fit = fit_power_law(d, kMonkeyWindow);
  Outcome o;
  o.verdict = std::abs(fit.alpha - truth) <= 0.05 ? Verdict::kPass : Verdict::kFail;
  o.summary = fmt::format("alpha={:.4f} over {} vs analytic {:.4f}, diff={:+.4f} (tol 0.05)", fit.alpha,
                          to_string(fit.window), truth, fit.alpha - truth);
  auto rep = goodness_report(d, fit);
  o.details.push_back(fmt::format("V={} tokens={} r2={:.4f} residual runs={} longest run ranks {}..{}",
                                  d.vocabulary(), d.total(), fit.r_squared, rep.run_count,
                                  rep.longest_run.first_rank, rep.longest_run.last_rank));
  return o;
}

Outcome monkey_sweep() {
  Outcome o;
  int ok_count = 0, n = 0;
  for (int m : {10, 26}) {
    for (double q : {0.1, 0.2}) {
      const MonkeyParams p{m, q, 10000000, 20240601};
      auto d = rank(count_frequencies(monkey_text(p)));
      const double truth = analytic_monkey_alpha(m, q);
      auto fit = fit_power_law(d, kMonkeyWindow);
      const bool ok = std::abs(fit.alpha - truth) <= 0.05;
      ok_count += ok;
      ++n;
      o.details.push_back(fmt::format("M={} q={} alpha={:.4f} analytic={:.4f} diff={:+.4f}", m, q,
                                      fit.alpha, truth, fit.alpha - truth));
    }
  }
  o.verdict = ok_count == n ? Verdict::kPass : Verdict::kFail;
  o.summary = fmt::format("{}/{} (M,q) settings within 0.05 over window {}", ok_count, n,
                          to_string(kMonkeyWindow));
  return o;
}

// --- 3 -------------------------------------------------------------------

Outcome sampler_recovery() {
  auto d = rank(count_frequencies(zipf_sample({1.2, 10000, 10000000, 20240602})));
  auto fit = fit_power_law(d, {10, 3000});
  Outcome o;
  o.verdict = fit.alpha >= 1.17 && fit.alpha <= 1.23 ? Verdict::kPass : Verdict::kFail;
  o.summary = fmt::format("alpha={:.4f} over [10,3000] (accept [1.17, 1.23]), V observed={}",
                          fit.alpha, d.vocabulary());
  return o;
}

// --- 4 -------------------------------------------------------------------

fs::path ulysses_path() {
  return env_or("ZIPFKIT_ULYSSES", std::string(ZIPFKIT_SOURCE_DIR) + "/data/texts/ulysses.txt");
}

Outcome ulysses() {
  Outcome o;
  const fs::path path = ulysses_path();
  if (!fs::exists(path)) {
    o.verdict = Verdict::kSkip;
    o.summary = fmt::format("text not found at {} (run tools/fetch_texts.py or set ZIPFKIT_ULYSSES)",
                            path.string());
    return o;
  }
  const auto raw = read_raw_text(path, "ulysses", "en");
  const auto tokens = tokenize(raw).tokens;
  auto d = rank(count_frequencies(tokens));
  auto fit = fit_power_law(d, {10, 10000});
  const double n = static_cast<double>(tokens.size());
  const double rel = (n - 264272.0) / 264272.0;
  const bool count_ok = std::abs(rel) <= 0.03;
  const bool alpha_ok = fit.alpha >= 0.95 && fit.alpha <= 1.15;
  const bool r2_ok = fit.r_squared > 0.98;
  o.verdict = count_ok && alpha_ok && r2_ok ? Verdict::kPass : Verdict::kFail;
  o.summary = fmt::format("tokens={} ({:+.2f}% vs 264272, tol 3%) alpha={:.4f} (accept [0.95,1.15]) r2={:.4f}",
                          tokens.size(), 100.0 * rel, fit.alpha, fit.r_squared);
  o.details.push_back(fmt::format("vocabulary={} source={}", d.vocabulary(), path.string()));
  return o;
}

// --- 5 -------------------------------------------------------------------

Outcome crossover() {
  Outcome o;
  TwoRegimeParams p;
  p.noise_sigma = 0.02;
  p.seed = 20240605;
  auto d = two_regime_table(p);
  auto s = detect_crossover(d, {10, 100000});
  const bool bp_ok = s.breakpoint >= 667 && s.breakpoint <= 1500;
  const bool a1_ok = std::abs(s.low_fit.alpha - 1.0) <= 0.05;
  const bool a2_ok = std::abs(s.high_fit.alpha - 1.6) <= 0.05;
  o.verdict = bp_ok && a1_ok && a2_ok ? Verdict::kPass : Verdict::kFail;
  o.summary = fmt::format("breakpoint={} (accept [667,1500]) alpha1={:.4f} (1.0+-0.05) alpha2={:.4f} (1.6+-0.05)",
                          s.breakpoint, s.low_fit.alpha, s.high_fit.alpha);

  const fs::path text = ulysses_path();
  const std::string lex_path = env_or("ZIPFKIT_EN_LEXICON", "");
  if (!fs::exists(text) || lex_path.empty() || !fs::exists(lex_path)) {
    o.details.push_back(
        "lemmatized Ulysses crossover (order 10^3): not evaluated, needs the text and "
        "ZIPFKIT_EN_LEXICON pointing at a full English lexicon");
    return o;
  }
  auto lex = load_lexicon(lex_path);
  auto tagged = tag_tokens(tokenize(read_raw_text(text, "ulysses", "en")).tokens, lex).tokens;
  auto lemmas = rank(count_frequencies(lemmatize(tagged)));
  auto ls = detect_crossover(lemmas, {10, std::min<std::uint64_t>(lemmas.vocabulary(), 30000)});
  const bool order_ok = ls.breakpoint >= 300 && ls.breakpoint <= 3000;
  o.details.push_back(fmt::format("lemmatized Ulysses breakpoint={} (order 10^3 means [300,3000]) -> {}",
                                  ls.breakpoint, order_ok ? "ok" : "off"));
  if (!order_ok) o.verdict = Verdict::kFail;
  return o;
}

// --- 6 -------------------------------------------------------------------

Outcome oracle_equivalence() {
  gen::Rng rng(20240606);
  int rank_ok = 0, shard_ok = 0, merge_ok = 0;
  const int cases = 100;
  for (int c = 0; c < cases; ++c) {
    auto vocab = gen::vocabulary(rng, gen::uniform_int(rng, 1, 2000));
    auto words = gen::random_words(rng, vocab, gen::uniform_int(rng, 0, 10000));
    auto stream = gen::to_stream(words);
    auto table = count_frequencies(stream);
    auto dist = rank(table);

    const auto expected = oracle::naive_rank(oracle::naive_count(words));
    bool same = dist.vocabulary() == expected.size();
    for (std::size_t i = 0; same && i < expected.size(); ++i) {
      const auto& e = dist.entries()[i];
      same = e.rank == expected[i].rank && e.word == expected[i].word &&
             e.frequency == static_cast<double>(expected[i].frequency);
    }
    rank_ok += same;

    const std::size_t shards = gen::uniform_int(rng, 1, 16);
    shard_ok += count_frequencies_sharded(stream, shards) == table;

    std::vector<FrequencyTable> parts;
    const std::size_t k = gen::uniform_int(rng, 1, 8);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t lo = stream.size() * i / k, hi = stream.size() * (i + 1) / k;
      parts.push_back(count_frequencies(TokenStream(stream.begin() + lo, stream.begin() + hi)));
    }
    merge_ok += merge_tables(parts) == table;
  }
  Outcome o;
  o.verdict = rank_ok == cases && shard_ok == cases && merge_ok == cases ? Verdict::kPass : Verdict::kFail;
  o.summary = fmt::format("naive ranking match {}/{}, sharded count {}/{}, merged shards {}/{}", rank_ok,
                          cases, shard_ok, cases, merge_ok, cases);
  return o;
}

// --- 7 -------------------------------------------------------------------

struct PropertyTally {
  std::map<std::string, std::pair<int, int>> counts;  // name -> (passed, run)
  void record(const std::string& name, bool ok) {
    auto& c = counts[name];
    c.first += ok;
    c.second += 1;
  }
};

Lexicon random_lexicon(gen::Rng& rng, const std::vector<std::string>& surfaces) {
  Lexicon lex;
  std::vector<std::string> lemmas;
  for (std::size_t i = 0; i < std::max<std::size_t>(1, surfaces.size() / 3); ++i) {
    lemmas.push_back("l" + gen::random_word(rng, 4));
  }
  for (const auto& s : surfaces) {
    if (rng() % 5 == 0) continue;  // not in the lexicon
    const int n = rng() % 4 == 0 ? 2 : 1;
    for (int k = 0; k < n; ++k) {
      lex.add(s, Analysis{lemmas[rng() % lemmas.size()], kAllPosTags[rng() % 6]});
    }
  }
  return lex;
}

Outcome invariant_suite() {
  gen::Rng rng(20240607);
  PropertyTally t;
  const int per_property = 200;

  for (int c = 0; c < per_property; ++c) {
    auto words = gen::random_words(rng, gen::vocabulary(rng, gen::uniform_int(rng, 1, 300)),
                                   gen::uniform_int(rng, 1, 3000));
    auto d = rank(count_frequencies(gen::to_stream(words)));
    bool complete = true, monotone = true;
    double sum = 0.0;
    for (std::size_t i = 0; i < d.vocabulary(); ++i) {
      complete = complete && d.entries()[i].rank == i + 1;
      if (i) monotone = monotone && d.entries()[i - 1].frequency >= d.entries()[i].frequency;
      sum += d.entries()[i].frequency;
    }
    t.record("rank completeness", complete && sum == static_cast<double>(words.size()));
    t.record("frequency monotonicity", monotone);
  }

  for (int c = 0; c < per_property; ++c) {
    auto vocab = gen::vocabulary(rng, gen::uniform_int(rng, 1, 200));
    auto stream = gen::to_stream(gen::random_words(rng, vocab, gen::uniform_int(rng, 0, 2000)));
    auto tagged = tag_tokens(stream, random_lexicon(rng, vocab)).tokens;
    const double n = static_cast<double>(stream.size());

    double class_sum_s = 0.0, class_sum_l = 0.0;
    for (PosTag p : kAllPosTags) {
      class_sum_s += class_sub_ranking(tagged, p, WordForm::kSurface).total();
      class_sum_l += class_sub_ranking(tagged, p, WordForm::kLemma).total();
    }
    t.record("conservation under class partition", class_sum_s == n && class_sum_l == n);

    auto lemma_stream = lemmatize(tagged);
    auto surf = count_frequencies(stream);
    auto lem = count_frequencies(lemma_stream);
    t.record("conservation under lemmatization",
             lemma_stream.size() == stream.size() && tagged.size() == stream.size() &&
                 lem.total() == surf.total());
    std::set<std::string> distinct_s, distinct_l;
    for (const auto& tok : stream) distinct_s.insert(tok.surface);
    for (const auto& tok : lemma_stream) distinct_l.insert(tok.surface);
    const auto ds = rank(surf), dl = rank(lem);
    const bool max_ok = ds.empty() || dl.frequency(1) >= ds.frequency(1);
    t.record("lemma vocabulary contraction",
             distinct_l.size() <= distinct_s.size() && lem.vocabulary() == distinct_l.size() && max_ok);
  }

  for (int c = 0; c < per_property; ++c) {
    auto words = gen::random_words(rng, gen::vocabulary(rng, gen::uniform_int(rng, 30, 500)), 20000);
    auto d = rank(count_frequencies(gen::to_stream(words)));
    if (d.vocabulary() < 10) {
      --c;
      continue;
    }
    const FitWindow w{1, d.vocabulary()};
    const double k = std::pow(10.0, gen::uniform_real(rng, -3.0, 3.0));
    auto a = fit_power_law(d, w);
    auto b = fit_power_law(d.scaled(k), w);
    t.record("scale equivariance of fits",
             std::abs(a.alpha - b.alpha) <= 1e-9 &&
                 std::abs((b.intercept - a.intercept) - std::log10(k)) <= 1e-9);
  }

  for (int c = 0; c < per_property; ++c) {
    auto words = gen::random_words(rng, gen::vocabulary(rng, gen::uniform_int(rng, 1, 500)),
                                   gen::uniform_int(rng, 1, 5000));
    auto d = rank(count_frequencies(gen::to_stream(words)));
    const double k = std::pow(10.0, gen::uniform_real(rng, -3.0, 3.0));
    auto rep = compare(d, d.scaled(k));
    bool zero = !rep.divergence_rank;
    for (const auto& g : rep.gap) zero = zero && std::abs(g.delta) <= 1e-12;
    t.record("compare(d, c*d) gap is zero", zero);
  }

  Outcome o;
  int passed = 0, run = 0;
  for (const auto& [name, c] : t.counts) {
    passed += c.first;
    run += c.second;
    o.details.push_back(fmt::format("{}: {}/{}", name, c.first, c.second));
  }
  o.verdict = passed == run && run >= 1000 ? Verdict::kPass : Verdict::kFail;
  o.summary = fmt::format("{}/{} property cases hold (need >= 1000)", passed, run);
  return o;
}

// --- 8 -------------------------------------------------------------------

Outcome not_reproducible() {
  Outcome o;
  o.details = {
      "NOT reproducible here: the Polish translation of Ulysses (copyrighted)",
      "NOT reproducible here: the British National Corpus class analysis (alpha=1.01 up to several thousand ranks)",
      "NOT reproducible here: the exact native/translated corpora of the corpus comparison (compositions unpublished)",
  };

  // Tail multiplied by r^-0.1 beyond rank 5000.
  auto a = exact_zipf_table(1.0, 10000, 1e6);
  std::vector<RankEntry> e = a.entries();
  for (auto& x : e) {
    if (x.rank > 5000) x.frequency *= std::pow(static_cast<double>(x.rank), -0.1);
  }
  auto b = RankedDistribution::from_ranked(e, {}, true);
  auto rep = compare(a, b);
  const bool constructed_ok =
      rep.divergence_rank && *rep.divergence_rank >= 2500 && *rep.divergence_rank <= 10000;
  o.details.push_back(fmt::format("constructed r^-0.1 tail beyond 5000: divergence_rank={} (accept [2500,10000])",
                                  rep.divergence_rank ? std::to_string(*rep.divergence_rank) : "none"));

  // "Translated" sample decays faster at high ranks than the "native" one.
  TwoRegimeParams native_p;
  native_p.alpha_high = 1.0;
  native_p.vocabulary = 30000;
  TwoRegimeParams translated_p = native_p;
  translated_p.alpha_high = 1.3;
  translated_p.breakpoint = 3000;
  auto native = rank(count_frequencies(sample_distribution(two_regime_table(native_p), 1000000, 81)));
  auto translated =
      rank(count_frequencies(sample_distribution(two_regime_table(translated_p), 1000000, 82)));
  auto dir = compare(translated, native);
  const double tail_delta = dir.gap.back().delta;
  const bool direction_ok = dir.divergence_rank && tail_delta < 0.0;
  o.details.push_back(fmt::format(
      "sampled translated-like vs native-like: divergence_rank={} tail delta={:+.3f} (expect negative)",
      dir.divergence_rank ? std::to_string(*dir.divergence_rank) : "none", tail_delta));

  o.verdict = constructed_ok && direction_ok ? Verdict::kPass : Verdict::kFail;
  o.summary = "stated above; substitute direction and divergence checks " +
              std::string(constructed_ok && direction_ok ? "hold" : "do not hold");
  return o;
}

const char* label(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "PASS";
    case Verdict::kFail: return "FAIL";
    case Verdict::kSkip: return "SKIP";
  }
  return "?";
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "exact recovery", 1.0, exact_recovery},
      {2, "monkey oracle", 30.0, monkey_oracle},
      {3, "sampler recovery", 60.0, sampler_recovery},
      {4, "Ulysses token count and exponent", 10.0, ulysses},
      {5, "crossover detection", 5.0, crossover},
      {6, "oracle equivalence", 5.0, oracle_equivalence},
      {7, "invariant suite", 60.0, invariant_suite},
      {8, "not reproducible at desk scale", 5.0, not_reproducible},
  };

  bool report = false, sweep = false;
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--report") {
      report = true;
    } else if (arg == "--monkey-sweep") {
      sweep = true;
    } else {
      try {
        selected.insert(std::stoi(arg));
      } catch (...) {
        std::cerr << "usage: " << argv[0] << " [--report] [--monkey-sweep] [1..8 ...]\n";
        return 2;
      }
    }
  }
  if (selected.empty() && !sweep) {
    for (const auto& c : criteria) selected.insert(c.id);
  }

  int fails = 0, skips = 0, run = 0;
  auto emit = [&](const std::string& name, const char* title, double budget,
                  const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.verdict = Verdict::kFail;
      o.summary = fmt::format("threw: {}", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.verdict == Verdict::kPass && secs >= budget) {
      o.verdict = Verdict::kFail;
      o.summary += " [over time budget]";
    }
    ++run;
    fails += o.verdict == Verdict::kFail;
    skips += o.verdict == Verdict::kSkip;
    std::cout << fmt::format("[{}] {} {}: {} ({:.2f} s, budget {} s)\n", label(o.verdict), name, title,
                             o.summary, secs, budget);
    for (const auto& d : o.details) std::cout << "       " << d << "\n";
    std::cout.flush();
  };

  for (const auto& c : criteria) {
    if (selected.count(c.id)) emit(fmt::format("C{}", c.id), c.title, c.budget_seconds, c.run);
  }
  if (sweep) emit("C2-sweep", "monkey exponent law over M x q", 120.0, monkey_sweep);

  if (report) return 0;
  if (fails) return 1;
  if (skips == run) return 77;
  return 0;
}
