#include "zipfkit/corpus.hpp"

#include <cmath>
#include <future>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "tsv.hpp"
#include "zipfkit/error.hpp"

namespace zipfkit {
namespace {

std::optional<std::string> optional_string(const YAML::Node& node, const char* key) {
  if (!node[key] || node[key].IsNull()) return std::nullopt;
  return node[key].as<std::string>();
}

std::string required_string(const YAML::Node& node, const char* key, std::size_t index) {
  auto v = optional_string(node, key);
  if (!v || v->empty()) {
    throw ConfigError(fmt::format("manifest text #{}: missing required field '{}'", index + 1, key));
  }
  return *v;
}

Origin parse_origin(std::string_view s) {
  if (s == "native") return Origin::kNative;
  if (s == "translated") return Origin::kTranslated;
  throw ConfigError(fmt::format("origin must be native|translated, got '{}'", s));
}

}  // namespace

std::string_view to_string(Origin origin) {
  return origin == Origin::kNative ? "native" : "translated";
}

CorpusManifest parse_manifest(std::string_view yaml_text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("manifest: {}", e.what()));
  }
  if (!root.IsMap()) throw ConfigError("manifest must be a map with 'name' and 'texts'");

  CorpusManifest m;
  try {
    m.name = root["name"] ? root["name"].as<std::string>() : std::string();
    if (root["target_size"] && !root["target_size"].IsNull()) {
      m.target_size = root["target_size"].as<std::uint64_t>();
    }
    const YAML::Node texts = root["texts"];
    if (!texts || !texts.IsSequence() || texts.size() == 0) {
      throw ConfigError("manifest must list at least one text under 'texts'");
    }
    std::unordered_set<std::string> ids;
    for (std::size_t i = 0; i < texts.size(); ++i) {
      const YAML::Node t = texts[i];
      TextDescriptor d;
      d.id = required_string(t, "id", i);
      std::filesystem::path p = required_string(t, "path", i);
      d.path = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
      d.author = optional_string(t, "author").value_or("");
      d.language = optional_string(t, "language").value_or("");
      d.origin = parse_origin(optional_string(t, "origin").value_or("native"));
      d.translator = optional_string(t, "translator");
      d.source_language = optional_string(t, "source_language");
      d.url = optional_string(t, "url");
      d.sha256 = optional_string(t, "sha256");
      if (t["token_limit"] && !t["token_limit"].IsNull()) {
        d.token_limit = t["token_limit"].as<std::uint64_t>();
      }
      if (d.origin == Origin::kTranslated && !d.source_language) {
        throw ConfigError(fmt::format(
            "manifest text '{}': translated texts need a source_language (may be \"unknown\")", d.id));
      }
      if (!ids.insert(d.id).second) {
        throw ConfigError(fmt::format("manifest: duplicate text id '{}'", d.id));
      }
      m.texts.push_back(std::move(d));
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("manifest: {}", e.what()));
  }
  return m;
}

CorpusManifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(detail::read_file(path), path.parent_path());
}

std::string manifest_to_yaml(const CorpusManifest& m) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << m.name;
  if (m.target_size) out << YAML::Key << "target_size" << YAML::Value << *m.target_size;
  out << YAML::Key << "texts" << YAML::Value << YAML::BeginSeq;
  for (const auto& t : m.texts) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << t.id;
    out << YAML::Key << "path" << YAML::Value << t.path.string();
    out << YAML::Key << "author" << YAML::Value << t.author;
    out << YAML::Key << "language" << YAML::Value << t.language;
    out << YAML::Key << "origin" << YAML::Value << std::string(to_string(t.origin));
    if (t.translator) out << YAML::Key << "translator" << YAML::Value << *t.translator;
    if (t.source_language) out << YAML::Key << "source_language" << YAML::Value << *t.source_language;
    if (t.url) out << YAML::Key << "url" << YAML::Value << *t.url;
    if (t.sha256) out << YAML::Key << "sha256" << YAML::Value << *t.sha256;
    if (t.token_limit) out << YAML::Key << "token_limit" << YAML::Value << *t.token_limit;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

Fingerprint PipelineConfig::fingerprint() const {
  Fingerprint fp = rules.fingerprint();
  if (!dictionary) return fp.combine("dictionary=none");
  return fp.combine(fmt::format("dictionary={};entries={};policy={}", dictionary_id,
                                dictionary->size(), to_string(policy)));
}

TokenStream preprocess(const RawText& raw, const PipelineConfig& config,
                       std::vector<RejectRecord>* rejects) {
  TokenizeResult tok = tokenize(raw, config.rules);
  if (rejects) rejects->insert(rejects->end(), tok.rejects.begin(), tok.rejects.end());
  if (!config.dictionary) return std::move(tok.tokens);
  FilterResult filtered = apply_dictionary_filter(tok.tokens, *config.dictionary, config.policy);
  if (rejects) rejects->insert(rejects->end(), filtered.misses.begin(), filtered.misses.end());
  return std::move(filtered.tokens);
}

namespace {

struct TextOutcome {
  FrequencyTable table;
  std::uint64_t tokens = 0;
  std::string error;
};

TextOutcome ingest_one(const TextDescriptor& d, const PipelineConfig& config, Fingerprint fp,
                       bool honour_limit) {
  TextOutcome out;
  try {
    RawText raw = read_raw_text(d.path, d.id, d.language);
    TokenStream stream = preprocess(raw, config);
    if (honour_limit && d.token_limit && *d.token_limit < stream.size()) {
      stream.resize(*d.token_limit);
    }
    out.tokens = stream.size();
    out.table = count_frequencies(stream, fp);
  } catch (const InputError& e) {
    out.error = fmt::format("{} ({}): {}", d.id, d.path.string(), e.what());
  }
  return out;
}

std::vector<TextOutcome> ingest_all(const CorpusManifest& manifest, const PipelineConfig& config,
                                    bool honour_limit) {
  if (manifest.texts.empty()) throw ConfigError("corpus manifest lists no texts");
  const Fingerprint fp = config.fingerprint();
  std::vector<std::future<TextOutcome>> jobs;
  jobs.reserve(manifest.texts.size());
  for (const auto& d : manifest.texts) {
    jobs.push_back(std::async(std::launch::async, ingest_one, std::cref(d), std::cref(config), fp,
                              honour_limit));
  }
  std::vector<TextOutcome> outcomes;
  std::string failures;
  for (auto& j : jobs) {
    outcomes.push_back(j.get());
    if (!outcomes.back().error.empty()) failures += "\n  " + outcomes.back().error;
  }
  if (!failures.empty()) {
    throw InputError(fmt::format("corpus '{}': cannot ingest texts:{}", manifest.name, failures));
  }
  return outcomes;
}

}  // namespace

CorpusBuild build_corpus(const CorpusManifest& manifest, const PipelineConfig& config) {
  auto outcomes = ingest_all(manifest, config, /*honour_limit=*/true);
  CorpusBuild build;
  std::vector<FrequencyTable> tables;
  tables.reserve(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    build.per_text.push_back({manifest.texts[i].id, outcomes[i].tokens});
    tables.push_back(std::move(outcomes[i].table));
  }
  build.table = merge_tables(tables);
  return build;
}

std::vector<std::uint64_t> measure_texts(const CorpusManifest& manifest, const PipelineConfig& config) {
  auto outcomes = ingest_all(manifest, config, /*honour_limit=*/false);
  std::vector<std::uint64_t> sizes;
  sizes.reserve(outcomes.size());
  for (const auto& o : outcomes) sizes.push_back(o.tokens);
  return sizes;
}

TrimPolicy parse_trim_policy(std::string_view name) {
  if (name == "whole-texts") return TrimPolicy::kWholeTexts;
  if (name == "truncate-last") return TrimPolicy::kTruncateLast;
  throw ConfigError(fmt::format("unknown trim policy '{}' (expected whole-texts|truncate-last)", name));
}

TrimResult trim_to_size(const CorpusManifest& manifest, std::span<const std::uint64_t> text_sizes,
                        std::uint64_t target, TrimPolicy policy) {
  if (text_sizes.size() != manifest.texts.size()) {
    throw ConfigError(fmt::format("{} sizes given for {} texts", text_sizes.size(),
                                  manifest.texts.size()));
  }
  const std::uint64_t available =
      std::accumulate(text_sizes.begin(), text_sizes.end(), std::uint64_t{0});
  if (target > available) {
    throw ConfigError(fmt::format("target size {} exceeds the {} tokens available in corpus '{}'",
                                  target, available, manifest.name));
  }
  TrimResult result;
  result.manifest = manifest;
  result.manifest.texts.clear();
  result.manifest.target_size = target;
  std::size_t i = 0;
  for (; i < manifest.texts.size(); ++i) {
    if (result.total + text_sizes[i] > target) break;
    result.manifest.texts.push_back(manifest.texts[i]);
    result.manifest.texts.back().token_limit.reset();
    result.total += text_sizes[i];
  }
  if (policy == TrimPolicy::kTruncateLast && result.total < target && i < manifest.texts.size()) {
    TextDescriptor last = manifest.texts[i];
    last.token_limit = target - result.total;
    result.manifest.texts.push_back(std::move(last));
    result.total = target;
  }
  result.shortfall = target - result.total;
  return result;
}

std::vector<std::uint64_t> log_rank_grid(std::uint64_t max_rank, int points_per_decade) {
  if (points_per_decade < 1) throw ConfigError("grid needs at least one point per decade");
  std::vector<std::uint64_t> grid;
  for (int i = 0;; ++i) {
    const double r = std::round(std::pow(10.0, static_cast<double>(i) / points_per_decade));
    if (r > static_cast<double>(max_rank)) break;
    const auto ri = static_cast<std::uint64_t>(r);
    if (grid.empty() || grid.back() != ri) grid.push_back(ri);
  }
  return grid;
}

ComparisonReport compare(const RankedDistribution& a, const RankedDistribution& b,
                         const GridSpec& grid_spec, double threshold) {
  if (a.empty() || b.empty()) throw EmptyInputError("cannot compare an empty distribution");
  if (!(threshold > 0.0)) throw ConfigError("divergence threshold must be > 0 (log10 units)");

  ComparisonReport rep;
  rep.threshold = threshold;
  rep.total_a = a.total();
  rep.total_b = b.total();
  const std::uint64_t max_rank = std::min(a.vocabulary(), b.vocabulary());
  const auto grid = log_rank_grid(max_rank, grid_spec.points_per_decade);
  if (grid.empty()) throw NumericError("comparison grid is empty");

  const double log_ta = std::log10(a.total());
  const double log_tb = std::log10(b.total());
  for (std::uint64_t r : grid) {
    const double d = (std::log10(a.frequency(r)) - log_ta) - (std::log10(b.frequency(r)) - log_tb);
    rep.gap.push_back({r, d});
  }
  std::size_t first = rep.gap.size();
  while (first > 0 && std::abs(rep.gap[first - 1].delta) > threshold) --first;
  if (first < rep.gap.size()) rep.divergence_rank = rep.gap[first].rank;

  for (std::uint64_t lo = 1; lo * 10 <= max_rank; lo *= 10) {
    const FitWindow w{lo, lo * 10};
    rep.decades.push_back({w, fit_power_law(a, w).alpha, fit_power_law(b, w).alpha});
  }
  return rep;
}

std::string comparison_to_json(const ComparisonReport& rep, int indent) {
  nlohmann::ordered_json j;
  j["normalization"] = "relative frequencies (each distribution divided by its total)";
  j["delta_definition"] = "log10(f_A(r)/total_A) - log10(f_B(r)/total_B)";
  j["threshold"] = rep.threshold;
  j["total_a"] = rep.total_a;
  j["total_b"] = rep.total_b;
  j["divergence_rank"] = rep.divergence_rank ? nlohmann::ordered_json(*rep.divergence_rank)
                                             : nlohmann::ordered_json(nullptr);
  auto& dec = j["decades"] = nlohmann::ordered_json::array();
  for (const auto& d : rep.decades) {
    dec.push_back({{"window", {{"lo", d.window.lo}, {"hi", d.window.hi}}},
                   {"alpha_a", d.alpha_a},
                   {"alpha_b", d.alpha_b}});
  }
  auto& gap = j["gap"] = nlohmann::ordered_json::array();
  for (const auto& g : rep.gap) gap.push_back({{"rank", g.rank}, {"delta", g.delta}});
  return j.dump(indent);
}

void write_gap_csv(std::ostream& out, const ComparisonReport& rep) {
  out << "rank,delta\n";
  for (const auto& g : rep.gap) out << g.rank << ',' << fmt::format("{}", g.delta) << '\n';
}

}  // namespace zipfkit
