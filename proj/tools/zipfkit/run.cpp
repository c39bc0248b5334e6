#include "run.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "zipfkit/error.hpp"
#include "zipfkit/version.hpp"

namespace zipfkit::cli {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("{}: cannot open", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

Run::Run(std::string subcommand, std::vector<std::string> argv, fs::path out_dir)
    : subcommand_(std::move(subcommand)), argv_(std::move(argv)), out_dir_(std::move(out_dir)) {}

void Run::add_input(const fs::path& path) {
  for (const auto& [p, _] : inputs_) {
    if (p == path.string()) return;
  }
  inputs_.emplace_back(path.string(), sha256_file(path));
}

Json Run::config() const {
  Json j;
  j["tool"] = "zipfkit";
  j["subcommand"] = subcommand_;
  j["argv"] = argv_;
  j["options"] = options_;
  j["seed"] = seed_ ? Json(*seed_) : Json(nullptr);
  Json inputs = Json::array();
  for (const auto& [p, h] : inputs_) inputs.push_back({{"path", p}, {"sha256", h}});
  j["inputs"] = inputs;
  return j;
}

void Run::write_text(const std::string& name, const std::string& content) {
  fs::create_directories(out_dir_);
  const fs::path path = out_dir_ / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("{}: cannot write", path.string()));
  out << content;
  out.close();
  if (!out) throw InputError(fmt::format("{}: write failed", path.string()));
  artifacts_.emplace_back(name, sha256_hex(content));
}

void Run::write_json(const std::string& name, Json body) {
  body["version"] = kVersion;
  body["run_config"] = config();
  write_text(name, body.dump(2) + "\n");
}

void Run::finish() {
  Json j;
  j["version"] = kVersion;
  j["run_config"] = config();
  Json arts = Json::array();
  for (const auto& [n, h] : artifacts_) arts.push_back({{"name", n}, {"sha256", h}});
  j["artifacts"] = arts;
  j["cwd"] = fs::current_path().string();
  fs::create_directories(out_dir_);
  std::ofstream(out_dir_ / "run.json", std::ios::binary) << j.dump(2) << "\n";
}

PipelineConfig make_pipeline(const PipelineOptions& options, Run* run) {
  PipelineConfig c;
  if (!options.rules.empty()) {
    c.rules = load_tokenization_rules(options.rules);
    if (run) run->add_input(options.rules);
  }
  c.policy = parse_filter_policy(options.dict_policy);
  if (!options.dictionary.empty()) {
    c.dictionary = load_dictionary(options.dictionary, c.rules);
    c.dictionary_id = fs::path(options.dictionary).filename().string();
    if (run) run->add_input(options.dictionary);
  } else if (c.policy == FilterPolicy::kDropMisses) {
    throw ConfigError("--dict-policy drop-misses needs a dictionary (--dict)");
  }
  return c;
}

TokenStream load_tokens(const fs::path& path, const PipelineConfig& config, Run* run,
                        std::vector<RejectRecord>* rejects) {
  auto raw = read_raw_text(path, label_of(path));
  if (run) run->add_input(path);
  auto tokens = preprocess(raw, config, rejects);
  if (tokens.empty()) throw EmptyInputError(fmt::format("{}: no word tokens", path.string()));
  return tokens;
}

RankedDistribution load_distribution(const fs::path& path, const PipelineConfig& config, Run* run) {
  const std::string ext = path.extension().string();
  if (ext == ".csv") {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(fmt::format("{}: cannot open", path.string()));
    if (run) run->add_input(path);
    auto d = read_distribution_csv(in, path.string());
    if (d.empty()) throw EmptyInputError(fmt::format("{}: empty distribution", path.string()));
    return d;
  }
  if (ext == ".yaml" || ext == ".yml") {
    auto manifest = load_manifest(path);
    if (run) run->add_input(path);
    for (const auto& t : manifest.texts) {
      if (run) run->add_input(t.path);
    }
    auto d = rank(build_corpus(manifest, config).table);
    if (d.empty()) throw EmptyInputError(fmt::format("{}: corpus has no word tokens", path.string()));
    return d;
  }
  return rank(count_frequencies(load_tokens(path, config, run), config.fingerprint()));
}

std::string distribution_csv(const RankedDistribution& dist) {
  std::ostringstream out;
  write_distribution_csv(out, dist);
  return out.str();
}

std::string label_of(const fs::path& path) { return path.stem().string(); }

}  // namespace zipfkit::cli
