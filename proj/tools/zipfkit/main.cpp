// zipfkit: rank-frequency analysis from the command line.
//
// Exit codes: 0 ok, 1 internal error, 2 usage, 3 input, 4 empty input,
// 5 configuration, 6 numeric, 7 replay mismatch.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commands.hpp"
#include "zipfkit/error.hpp"
#include "zipfkit/version.hpp"

namespace fs = std::filesystem;
using namespace zipfkit;
using namespace zipfkit::cli;

namespace {

enum Exit {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kInputExit = 3,
  kEmptyExit = 4,
  kConfigExit = 5,
  kNumericExit = 6,
  kReplayMismatch = 7,
};

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kInput: return kInputExit;
    case ErrorKind::kEmptyInput: return kEmptyExit;
    case ErrorKind::kConfig: return kConfigExit;
    case ErrorKind::kNumeric: return kNumericExit;
  }
  return kInternal;
}

constexpr const char* kDefaultOutDir = "zipfkit-out";

// Arguments minus --out-dir, which is not part of the recorded config so a
// replay into another directory produces identical bytes.
std::vector<std::string> recorded_argv(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out-dir" || args[i] == "-o") {
      ++i;
      continue;
    }
    if (args[i].rfind("--out-dir=", 0) == 0) continue;
    out.push_back(args[i]);
  }
  return out;
}

Json options_json(const CLI::App* sub) {
  Json j = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string key = opt->get_single_name();
    if (key.empty() || key == "help" || key == "out-dir") continue;
    if (opt->count() > 0) {
      const auto& r = opt->results();
      j[key] = r.size() == 1 && opt->get_items_expected_max() <= 1 ? Json(r[0]) : Json(r);
    } else {
      j[key] = opt->get_default_str();
    }
  }
  return j;
}

void add_pipeline(CLI::App* sub, PipelineOptions& p) {
  sub->add_option("--rules", p.rules, "Tokenization rules (YAML)")->check(CLI::ExistingFile);
  sub->add_option("--dict", p.dictionary, "Dictionary, one word per line")->check(CLI::ExistingFile);
  sub->add_option("--dict-policy", p.dict_policy, "drop-misses | keep-misses | review-only");
}

void add_fit_flags(CLI::App* sub, FitFlags& f) {
  sub->add_option("--window", f.window, "Fit window lo:hi (ranks, inclusive)");
  sub->add_option("--crossover", f.crossover, "Outer window lo:hi for two-segment breakpoint scan");
  sub->add_flag("--log-binning", f.log_binning, "Fit per-bin means (plot smoothing only)");
  sub->add_option("--candidates-per-decade", f.candidates_per_decade, "Breakpoint grid density");
}

struct Invocation {
  RankOptions rank;
  FitOptionsCli fit;
  SynthOptions synth;
  TagOptions tag;
  CorpusOptions corpus;
  CompareOptions compare;
  FigOptions fig;
  std::string replay_path;
  std::uint64_t corpus_target = 0;
  std::uint64_t fig_target = 0;
};

int replay(const std::string& run_json, const std::string& out_dir_flag, bool out_dir_given);

int run_cli(std::vector<std::string> args) {
  CLI::App app{"zipfkit: word rank-frequency distributions, power-law fits and corpus comparison"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));
  app.option_defaults()->always_capture_default();

  std::string out_dir;
  auto* out_opt = app.add_option("-o,--out-dir", out_dir, "Output directory")->envname("ZIPFKIT_OUT_DIR");

  Invocation in;

  auto* rank = app.add_subcommand("rank", "Rank the words of a text");
  rank->option_defaults()->always_capture_default();
  rank->add_option("text", in.rank.input, "UTF-8 plain text")->required()->check(CLI::ExistingFile);
  add_pipeline(rank, in.rank.pipeline);
  add_fit_flags(rank, in.rank.fit);
  rank->add_option("--lexicon", in.rank.lexicon, "Lexicon TSV (surface, lemma, pos)")->check(CLI::ExistingFile);
  rank->add_option("--form", in.rank.form, "surface | lemma");
  rank->add_option("--pos", in.rank.pos, "Rank one class only: noun|verb|adj|adv|pron|other");

  auto* fit = app.add_subcommand("fit", "Fit a power law to a distribution CSV, text or manifest");
  fit->option_defaults()->always_capture_default();
  fit->add_option("input", in.fit.input, "Distribution CSV, manifest YAML or text")->required()->check(CLI::ExistingFile);
  add_pipeline(fit, in.fit.pipeline);
  add_fit_flags(fit, in.fit.fit);

  auto* synth = app.add_subcommand("synth", "Generate synthetic text or tables");
  synth->option_defaults()->always_capture_default();
  synth->add_option("model", in.synth.model, "monkey | zipf | exact | two-regime")->required();
  synth->add_option("--letters", in.synth.letters, "Monkey alphabet size M (2..26)");
  synth->add_option("--space-prob", in.synth.space_probability, "Monkey space probability q");
  synth->add_option("--length", in.synth.length, "Monkey characters");
  synth->add_option("--alpha", in.synth.alpha, "Exponent (zipf, exact) or low-rank exponent (two-regime)");
  synth->add_option("--alpha-high", in.synth.alpha_high, "High-rank exponent (two-regime)");
  synth->add_option("--breakpoint", in.synth.breakpoint, "Breakpoint rank (two-regime)");
  synth->add_option("--vocabulary", in.synth.vocabulary, "Vocabulary size V");
  synth->add_option("--tokens", in.synth.tokens, "Tokens to draw (zipf)");
  synth->add_option("--scale", in.synth.scale, "Frequency at rank 1 (exact, two-regime)");
  synth->add_option("--noise", in.synth.noise, "Std dev of log10 noise (two-regime)");
  synth->add_option("--seed", in.synth.seed, "RNG seed");

  auto* tag = app.add_subcommand("tag", "Tag and lemmatize a text with a lexicon");
  tag->option_defaults()->always_capture_default();
  tag->add_option("text", in.tag.input, "UTF-8 plain text")->required()->check(CLI::ExistingFile);
  add_pipeline(tag, in.tag.pipeline);
  tag->add_option("--lexicon", in.tag.lexicon, "Lexicon TSV")->required()->check(CLI::ExistingFile);
  tag->add_option("--mode", in.tag.mode, "priority | queue-only");
  tag->add_option("--review", in.tag.review, "Review TSV (position, lemma, pos)")->check(CLI::ExistingFile);

  auto* corpus = app.add_subcommand("corpus", "Build a corpus ranking from a manifest");
  corpus->option_defaults()->always_capture_default();
  corpus->add_option("manifest", in.corpus.manifest, "Corpus manifest (YAML)")->required()->check(CLI::ExistingFile);
  add_pipeline(corpus, in.corpus.pipeline);
  auto* corpus_target = corpus->add_option("--target", in.corpus_target, "Trim to this many tokens");
  corpus->add_option("--trim-policy", in.corpus.trim_policy, "whole-texts | truncate-last");

  auto* cmp = app.add_subcommand("compare", "Compare two distributions after normalization");
  cmp->option_defaults()->always_capture_default();
  cmp->add_option("a", in.compare.a, "First input (CSV, manifest or text)")->required()->check(CLI::ExistingFile);
  cmp->add_option("b", in.compare.b, "Second input")->required()->check(CLI::ExistingFile);
  add_pipeline(cmp, in.compare.pipeline);
  cmp->add_option("--threshold", in.compare.threshold, "Divergence threshold on |delta| (log10)");
  cmp->add_option("--points-per-decade", in.compare.points_per_decade, "Comparison grid density");

  auto* fig = app.add_subcommand("fig", "Figure data: fig1 | fig2 | fig3 | fig4a | fig4b");
  fig->option_defaults()->always_capture_default();
  fig->add_option("figure", in.fig.figure, "fig1 | fig2 | fig3 | fig4a | fig4b")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4a", "fig4b"}));
  fig->add_option("inputs", in.fig.inputs, "Texts, distribution CSVs or manifests")->required()->check(CLI::ExistingFile);
  add_pipeline(fig, in.fig.pipeline);
  add_fit_flags(fig, in.fig.fit);
  fig->add_option("--lexicon", in.fig.lexicon, "Lexicon TSV (fig2, fig3)")->check(CLI::ExistingFile);
  fig->add_option("--form", in.fig.form, "surface | lemma (fig2)");
  fig->add_flag("--approximate", in.fig.approximate, "fig2: extract class words from the global ranking");
  auto* fig_target = fig->add_option("--target", in.fig_target, "fig4: trim manifests to this many tokens");
  fig->add_option("--trim-policy", in.fig.trim_policy, "whole-texts | truncate-last");
  fig->add_option("--threshold", in.fig.threshold, "fig4: divergence threshold (log10)");
  fig->add_option("--points-per-decade", in.fig.points_per_decade, "fig4: comparison grid density");

  auto* rep = app.add_subcommand("replay", "Re-run a recorded invocation and check its outputs");
  rep->add_option("run_json", in.replay_path, "run.json written by an earlier invocation")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  if (rep->parsed()) return replay(in.replay_path, out_dir, out_opt->count() > 0 || std::getenv("ZIPFKIT_OUT_DIR"));

  CLI::App* sub = app.get_subcommands().front();
  const fs::path dir = out_dir.empty() ? fs::path(kDefaultOutDir) : fs::path(out_dir);
  Run run(sub->get_name(), recorded_argv(args), dir);
  run.set_options(options_json(sub));

  if (rank->parsed()) cmd_rank(in.rank, run);
  if (fit->parsed()) cmd_fit(in.fit, run);
  if (synth->parsed()) cmd_synth(in.synth, run);
  if (tag->parsed()) cmd_tag(in.tag, run);
  if (corpus->parsed()) {
    if (corpus_target->count()) in.corpus.target = in.corpus_target;
    cmd_corpus(in.corpus, run);
  }
  if (cmp->parsed()) cmd_compare(in.compare, run);
  if (fig->parsed()) {
    if (fig_target->count()) in.fig.target = in.fig_target;
    cmd_fig(in.fig, run);
  }
  run.finish();
  std::cout << fmt::format("{}: wrote {}\n", sub->get_name(), (dir / "run.json").string());
  return kOk;
}

int guarded(const std::vector<std::string>& args) {
  try {
    return run_cli(args);
  } catch (const Error& e) {
    std::cerr << "zipfkit: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "zipfkit: internal error: " << e.what() << "\n";
    return kInternal;
  }
}

int replay(const std::string& run_json, const std::string& out_dir_flag, bool out_dir_given) {
  std::ifstream in(run_json, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  Json recorded;
  try {
    recorded = Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw InputError(fmt::format("{}: not a run record: {}", run_json, e.what()));
  }
  if (!recorded.contains("run_config") || !recorded.contains("artifacts") || !recorded.contains("cwd")) {
    throw InputError(fmt::format("{}: not a run record", run_json));
  }
  const fs::path cwd = recorded["cwd"].get<std::string>();
  const fs::path target = out_dir_given ? fs::absolute(out_dir_flag)
                                        : fs::absolute(fs::path(run_json).parent_path() / "replay");
  std::vector<std::string> args = recorded["run_config"]["argv"].get<std::vector<std::string>>();
  args.push_back("--out-dir");
  args.push_back(target.string());

  for (const auto& input : recorded["run_config"]["inputs"]) {
    const fs::path p = cwd / input["path"].get<std::string>();
    if (!fs::exists(p) || sha256_file(p) != input["sha256"].get<std::string>()) {
      std::cerr << "zipfkit: replay: input changed or missing: " << p.string() << "\n";
    }
  }

  const fs::path here = fs::current_path();
  fs::current_path(cwd);
  const int code = guarded(args);
  fs::current_path(here);
  if (code != kOk) return code;

  int mismatches = 0;
  for (const auto& a : recorded["artifacts"]) {
    const std::string name = a["name"].get<std::string>();
    const std::string want = a["sha256"].get<std::string>();
    const fs::path p = target / name;
    const std::string got = fs::exists(p) ? sha256_file(p) : "missing";
    const bool same = got == want;
    mismatches += !same;
    std::cout << fmt::format("{} {}\n", same ? "identical" : "DIFFERS  ", name);
  }
  return mismatches ? kReplayMismatch : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return guarded(args);
}
