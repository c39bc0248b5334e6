#include <gtest/gtest.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "generators.hpp"
#include "zipfkit/corpus.hpp"
#include "zipfkit/error.hpp"
#include "zipfkit/synth.hpp"

namespace zipfkit {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("zipfkit_corpus_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path write(const std::string& name, const std::string& content) const {
    std::ofstream(path_ / name, std::ios::binary) << content;
    return path_ / name;
  }

 private:
  fs::path path_;
};

CorpusManifest manifest_of(const TempDir& dir, const std::vector<std::string>& bodies) {
  CorpusManifest m;
  m.name = "t";
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    TextDescriptor d;
    d.id = "t" + std::to_string(i);
    d.path = dir.write(d.id + ".txt", bodies[i]);
    d.language = "en";
    m.texts.push_back(d);
  }
  return m;
}

PipelineConfig plain_config() {
  PipelineConfig c;
  c.rules.strip_gutenberg_boilerplate = false;
  return c;
}

TEST(Manifest, ParsesFieldsAndResolvesPaths) {
  auto m = parse_manifest(R"(
name: pl-translated
target_size: 1000
texts:
  - id: a
    path: texts/a.txt
    author: Someone
    language: pl
    origin: translated
    translator: Other
    source_language: en
    url: https://example.org/a.txt
  - id: b
    path: /abs/b.txt
    language: pl
    token_limit: 50
)",
                          "/base");
  EXPECT_EQ(m.name, "pl-translated");
  EXPECT_EQ(m.target_size, 1000u);
  ASSERT_EQ(m.texts.size(), 2u);
  EXPECT_EQ(m.texts[0].path, fs::path("/base/texts/a.txt"));
  EXPECT_EQ(m.texts[0].origin, Origin::kTranslated);
  EXPECT_EQ(m.texts[0].source_language, "en");
  EXPECT_EQ(m.texts[1].path, fs::path("/abs/b.txt"));
  EXPECT_EQ(m.texts[1].origin, Origin::kNative);
  EXPECT_EQ(m.texts[1].token_limit, 50u);
}

TEST(Manifest, RoundTripsThroughYaml) {
  auto m = parse_manifest("name: x\ntexts:\n  - {id: a, path: /p/a.txt, language: en, origin: translated, "
                          "source_language: unknown, sha256: abc}\n");
  auto back = parse_manifest(manifest_to_yaml(m));
  ASSERT_EQ(back.texts.size(), 1u);
  EXPECT_EQ(back.texts[0].path, m.texts[0].path);
  EXPECT_EQ(back.texts[0].source_language, "unknown");
  EXPECT_EQ(back.texts[0].sha256, "abc");
}

TEST(Manifest, Errors) {
  EXPECT_THROW(parse_manifest("name: x\ntexts: []\n"), ConfigError);
  EXPECT_THROW(parse_manifest("name: x\ntexts:\n  - {id: a}\n"), ConfigError);
  EXPECT_THROW(parse_manifest("name: x\ntexts:\n  - {id: a, path: a}\n  - {id: a, path: b}\n"),
               ConfigError);
  EXPECT_THROW(parse_manifest("name: x\ntexts:\n  - {id: a, path: a, origin: translated}\n"),
               ConfigError);
  EXPECT_THROW(parse_manifest("name: x\ntexts:\n  - {id: a, path: a, origin: other}\n"), ConfigError);
  EXPECT_THROW(parse_manifest("[1, 2"), ConfigError);
  EXPECT_THROW(load_manifest("/nonexistent/manifest.yaml"), InputError);
}

TEST(BuildCorpus, SingleTextEqualsDirectCount) {
  TempDir dir;
  auto m = manifest_of(dir, {"The cat saw the dog. The dog ran!"});
  auto cfg = plain_config();
  auto build = build_corpus(m, cfg);
  auto direct = count_frequencies(preprocess(read_raw_text(m.texts[0].path), cfg), cfg.fingerprint());
  EXPECT_EQ(build.table, direct);
  EXPECT_EQ(build.table.count("the"), 3u);
  ASSERT_EQ(build.per_text.size(), 1u);
  EXPECT_EQ(build.per_text[0].tokens, 8u);
}

TEST(BuildCorpus, UnionOfTextsAndOrderInsensitivity) {
  TempDir dir;
  gen::Rng rng(41);
  std::vector<std::string> bodies;
  for (int i = 0; i < 6; ++i) bodies.push_back(gen::random_text(rng, 300));
  auto m = manifest_of(dir, bodies);
  auto cfg = plain_config();
  auto whole = build_corpus(m, cfg);

  std::vector<FrequencyTable> parts;
  std::uint64_t sum = 0;
  for (const auto& t : m.texts) {
    parts.push_back(count_frequencies(preprocess(read_raw_text(t.path), cfg), cfg.fingerprint()));
    sum += parts.back().total();
  }
  EXPECT_EQ(whole.table, merge_tables(parts));
  EXPECT_EQ(whole.table.total(), sum);

  std::shuffle(m.texts.begin(), m.texts.end(), rng);
  EXPECT_EQ(build_corpus(m, cfg).table, whole.table);
}

TEST(BuildCorpus, HonoursTokenLimit) {
  TempDir dir;
  auto m = manifest_of(dir, {"a b c d e f"});
  m.texts[0].token_limit = 4;
  auto build = build_corpus(m, plain_config());
  EXPECT_EQ(build.table.total(), 4u);
  EXPECT_EQ(build.table.count("e"), 0u);
}

TEST(BuildCorpus, ReportsEveryBadText) {
  TempDir dir;
  auto m = manifest_of(dir, {"fine words", std::string("bad \xff byte")});
  TextDescriptor missing;
  missing.id = "gone";
  missing.path = dir.path() / "gone.txt";
  m.texts.push_back(missing);
  try {
    build_corpus(m, plain_config());
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("t1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("gone"), std::string::npos) << msg;
  }
}

TEST(BuildCorpus, FingerprintTracksPipeline) {
  auto a = plain_config();
  auto b = plain_config();
  b.rules.case_fold = false;
  EXPECT_NE(a.fingerprint(), b.fingerprint());
  auto c = plain_config();
  c.policy = FilterPolicy::kDropMisses;
  c.dictionary = Dictionary::from_words({"x"});
  c.dictionary_id = "d";
  EXPECT_NE(a.fingerprint(), c.fingerprint());
}

TEST(TrimToSize, WholeTextsExample) {
  CorpusManifest m;
  m.name = "m";
  for (const char* id : {"a", "b", "c"}) m.texts.push_back({fs::path(id), id});
  const std::vector<std::uint64_t> sizes = {500, 400, 300};
  auto r = trim_to_size(m, sizes, 950, TrimPolicy::kWholeTexts);
  ASSERT_EQ(r.manifest.texts.size(), 2u);
  EXPECT_EQ(r.total, 900u);
  EXPECT_EQ(r.shortfall, 50u);
  EXPECT_EQ(r.manifest.target_size, 950u);

  auto t = trim_to_size(m, sizes, 950, TrimPolicy::kTruncateLast);
  ASSERT_EQ(t.manifest.texts.size(), 3u);
  EXPECT_EQ(t.manifest.texts[2].token_limit, 50u);
  EXPECT_EQ(t.total, 950u);
  EXPECT_EQ(t.shortfall, 0u);

  EXPECT_THROW(trim_to_size(m, sizes, 1201, TrimPolicy::kWholeTexts), ConfigError);
  EXPECT_EQ(trim_to_size(m, sizes, 1200, TrimPolicy::kWholeTexts).total, 1200u);
}

TEST(TrimToSizeProperty, NeverExceedsTarget) {
  gen::Rng rng(42);
  for (int c = 0; c < 200; ++c) {
    CorpusManifest m;
    std::vector<std::uint64_t> sizes;
    const std::size_t n = gen::uniform_int(rng, 1, 10);
    std::uint64_t available = 0;
    for (std::size_t i = 0; i < n; ++i) {
      m.texts.push_back({fs::path("p"), "t" + std::to_string(i)});
      sizes.push_back(gen::uniform_int(rng, 0, 1000));
      available += sizes.back();
    }
    const std::uint64_t target = gen::uniform_int(rng, 0, available);
    auto whole = trim_to_size(m, sizes, target, TrimPolicy::kWholeTexts);
    ASSERT_LE(whole.total, target);
    ASSERT_EQ(whole.total + whole.shortfall, target);
    auto trunc = trim_to_size(m, sizes, target, TrimPolicy::kTruncateLast);
    ASSERT_EQ(trunc.total, target);
  }
}

TEST(LogRankGrid, Dedupes) {
  auto g = log_rank_grid(100, 20);
  EXPECT_EQ(g.front(), 1u);
  EXPECT_EQ(g.back(), 100u);
  for (std::size_t i = 1; i < g.size(); ++i) ASSERT_LT(g[i - 1], g[i]);
  EXPECT_EQ(log_rank_grid(1, 20), std::vector<std::uint64_t>{1});
  EXPECT_THROW(log_rank_grid(10, 0), ConfigError);
}

TEST(Compare, IdenticalDistributionsHaveZeroGap) {
  auto d = exact_zipf_table(1.0, 10000, 1e5);
  auto rep = compare(d, d);
  for (const auto& g : rep.gap) ASSERT_EQ(g.delta, 0.0);
  EXPECT_FALSE(rep.divergence_rank);
  ASSERT_EQ(rep.decades.size(), 4u);
  EXPECT_NEAR(rep.decades[3].alpha_a, 1.0, 1e-10);
}

TEST(Compare, ScalingDoesNotDiverge) {
  auto d = exact_zipf_table(1.2, 5000, 1e5);
  auto rep = compare(d, d.scaled(37.5));
  for (const auto& g : rep.gap) ASSERT_NEAR(g.delta, 0.0, 1e-12);
  EXPECT_FALSE(rep.divergence_rank);
}

TEST(Compare, ConstructedTailDivergence) {
  auto a = exact_zipf_table(1.0, 10000, 1e5);
  std::vector<RankEntry> e = a.entries();
  for (auto& x : e) {
    if (x.rank > 5000) x.frequency *= std::pow(static_cast<double>(x.rank), -0.1);
  }
  auto b = RankedDistribution::from_ranked(e, {}, true);
  auto rep = compare(a, b);
  ASSERT_TRUE(rep.divergence_rank);
  EXPECT_GE(*rep.divergence_rank, 5000u);
  EXPECT_LE(*rep.divergence_rank, 5100u);
  EXPECT_GT(rep.gap.back().delta, 0.0);
  for (const auto& g : rep.gap) {
    if (g.rank <= 5000) ASSERT_LT(std::abs(g.delta), 0.05) << g.rank;
  }
}

TEST(Compare, SteeperTailGivesPositiveGap) {
  TwoRegimeParams steep;
  steep.vocabulary = 20000;
  TwoRegimeParams flat = steep;
  flat.alpha_high = 1.0;
  auto rep = compare(two_regime_table(flat), two_regime_table(steep));
  ASSERT_TRUE(rep.divergence_rank);
  EXPECT_GT(rep.gap.back().delta, 0.0);
  EXPECT_LT(rep.decades.back().alpha_a, rep.decades.back().alpha_b);
}

TEST(Compare, Errors) {
  auto d = exact_zipf_table(1.0, 100, 100);
  EXPECT_THROW(compare(d, RankedDistribution{}), EmptyInputError);
  EXPECT_THROW(compare(d, d, {}, 0.0), ConfigError);
}

TEST(Compare, GapCsv) {
  auto d = exact_zipf_table(1.0, 10, 100);
  std::ostringstream out;
  write_gap_csv(out, compare(d, d));
  EXPECT_EQ(out.str().substr(0, 13), "rank,delta\n1,");
}

}  // namespace
}  // namespace zipfkit
