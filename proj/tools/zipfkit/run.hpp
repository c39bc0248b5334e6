#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "zipfkit/corpus.hpp"
#include "zipfkit/ranking.hpp"

namespace zipfkit::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const fs::path& path);

// One invocation: its configuration and the artifacts it wrote. Every JSON
// artifact embeds the run config; run.json lists all artifacts with their
// digests so `zipfkit replay` can check a re-run byte for byte.
class Run {
 public:
  Run(std::string subcommand, std::vector<std::string> argv, fs::path out_dir);

  void set_options(Json options) { options_ = std::move(options); }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void add_input(const fs::path& path);

  Json config() const;

  void write_text(const std::string& name, const std::string& content);
  // Adds "run_config" and "version" to the object before writing.
  void write_json(const std::string& name, Json body);
  // Writes run.json. Call last.
  void finish();

  const fs::path& out_dir() const { return out_dir_; }

 private:
  std::string subcommand_;
  std::vector<std::string> argv_;
  fs::path out_dir_;
  Json options_ = Json::object();
  std::optional<std::uint64_t> seed_;
  std::vector<std::pair<std::string, std::string>> inputs_;     // path, sha256
  std::vector<std::pair<std::string, std::string>> artifacts_;  // name, sha256
};

struct PipelineOptions {
  std::string rules;
  std::string dictionary;
  std::string dict_policy = "keep-misses";
};

PipelineConfig make_pipeline(const PipelineOptions& options, Run* run);

// Tokens of a text after the pipeline. Throws EmptyInputError when nothing
// survives.
TokenStream load_tokens(const fs::path& path, const PipelineConfig& config, Run* run,
                        std::vector<RejectRecord>* rejects = nullptr);

// A .csv path is read as a ranked distribution, a .yaml/.yml path as a
// corpus manifest, anything else as a plain text.
RankedDistribution load_distribution(const fs::path& path, const PipelineConfig& config, Run* run);

std::string distribution_csv(const RankedDistribution& dist);

std::string label_of(const fs::path& path);

}  // namespace zipfkit::cli
