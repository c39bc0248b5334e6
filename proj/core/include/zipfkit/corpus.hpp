#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zipfkit/fitting.hpp"
#include "zipfkit/ranking.hpp"
#include "zipfkit/text_ingest.hpp"

namespace zipfkit {

enum class Origin { kNative, kTranslated };

std::string_view to_string(Origin origin);

struct TextDescriptor {
  std::filesystem::path path;  // resolved against the manifest's directory
  std::string id;
  std::string author;
  std::string language;
  Origin origin = Origin::kNative;
  std::optional<std::string> translator;
  // Required (possibly "unknown") for translated texts.
  std::optional<std::string> source_language;
  // Fetch metadata, used by tools/fetch_texts.py only.
  std::optional<std::string> url;
  std::optional<std::string> sha256;
  // Only the first token_limit tokens are used; set by trim_to_size.
  std::optional<std::uint64_t> token_limit;
};

struct CorpusManifest {
  std::string name;
  std::vector<TextDescriptor> texts;
  std::optional<std::uint64_t> target_size;
};

// YAML: name, optional target_size, texts: [ {id, path, author, language,
// origin, translator?, source_language?, url?, sha256?, token_limit?} ].
CorpusManifest load_manifest(const std::filesystem::path& path);
CorpusManifest parse_manifest(std::string_view yaml_text,
                              const std::filesystem::path& base_dir = {});
std::string manifest_to_yaml(const CorpusManifest& manifest);

// Preprocessing applied identically to every text of a corpus.
struct PipelineConfig {
  TokenizationRules rules;
  std::optional<Dictionary> dictionary;
  std::string dictionary_id;  // path or label, part of the fingerprint
  FilterPolicy policy = FilterPolicy::kKeepMisses;

  Fingerprint fingerprint() const;
};

// tokenize -> dictionary filter; the stream that gets counted.
TokenStream preprocess(const RawText& raw, const PipelineConfig& config,
                       std::vector<RejectRecord>* rejects = nullptr);

struct TextCount {
  std::string id;
  std::uint64_t tokens = 0;
};

struct CorpusBuild {
  FrequencyTable table;
  std::vector<TextCount> per_text;
};

// Throws InputError listing every unreadable or undecodable text.
CorpusBuild build_corpus(const CorpusManifest& manifest, const PipelineConfig& config);

// Token count of each text after preprocessing (ignores token_limit).
std::vector<std::uint64_t> measure_texts(const CorpusManifest& manifest,
                                         const PipelineConfig& config);

enum class TrimPolicy { kWholeTexts, kTruncateLast };

TrimPolicy parse_trim_policy(std::string_view name);

struct TrimResult {
  CorpusManifest manifest;
  std::uint64_t total = 0;
  std::uint64_t shortfall = 0;  // target - total
};

// Keeps texts in manifest order while the running total stays <= target;
// kTruncateLast then takes target - total tokens of the next text.
// Order-sensitive by construction. Throws ConfigError when target exceeds
// the available total.
TrimResult trim_to_size(const CorpusManifest& manifest, std::span<const std::uint64_t> text_sizes,
                        std::uint64_t target, TrimPolicy policy);

struct GridSpec {
  int points_per_decade = 20;
};

inline constexpr double kDefaultDivergenceThreshold = 0.05;

struct GapPoint {
  std::uint64_t rank = 0;
  double delta = 0.0;  // log10 p_A(r) - log10 p_B(r), p = f / total
};

struct DecadeAlphas {
  FitWindow window;
  double alpha_a = 0.0;
  double alpha_b = 0.0;
};

struct ComparisonReport {
  std::vector<DecadeAlphas> decades;
  std::vector<GapPoint> gap;
  std::optional<std::uint64_t> divergence_rank;
  double threshold = kDefaultDivergenceThreshold;
  double total_a = 0.0;
  double total_b = 0.0;
};

// Both distributions are normalized to relative frequencies before the gap
// is taken. divergence_rank is the smallest grid rank from which |delta|
// exceeds the threshold at every later grid point.
ComparisonReport compare(const RankedDistribution& a, const RankedDistribution& b,
                         const GridSpec& grid = {},
                         double threshold = kDefaultDivergenceThreshold);

// Log-spaced integer ranks in [1, max_rank], deduplicated.
std::vector<std::uint64_t> log_rank_grid(std::uint64_t max_rank, int points_per_decade);

std::string comparison_to_json(const ComparisonReport& report, int indent = -1);
// CSV with header rank,delta.
void write_gap_csv(std::ostream& out, const ComparisonReport& report);

}  // namespace zipfkit
