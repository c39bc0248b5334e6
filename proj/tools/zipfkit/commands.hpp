#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "run.hpp"
#include "zipfkit/fitting.hpp"

namespace zipfkit::cli {

struct FitFlags {
  std::string window;     // "lo:hi", empty for none
  std::string crossover;  // outer window for the two-segment scan
  bool log_binning = false;
  int candidates_per_decade = kDefaultCandidatesPerDecade;
};

struct RankOptions {
  std::string input;
  PipelineOptions pipeline;
  FitFlags fit;
  std::string lexicon;
  std::string form = "surface";
  std::string pos;  // class sub-ranking when set
};

struct FitOptionsCli {
  std::string input;
  PipelineOptions pipeline;
  FitFlags fit;
};

struct SynthOptions {
  std::string model;  // monkey | zipf | exact | two-regime
  int letters = 26;
  double space_probability = 0.2;
  std::uint64_t length = 1000000;
  double alpha = 1.0;
  std::uint64_t vocabulary = 10000;
  std::uint64_t tokens = 1000000;
  double scale = 1e6;
  double alpha_high = 1.6;
  std::uint64_t breakpoint = 1000;
  double noise = 0.0;
  std::uint64_t seed = 1;
};

struct TagOptions {
  std::string input;
  PipelineOptions pipeline;
  std::string lexicon;
  std::string mode = "priority";
  std::string review;
};

struct CorpusOptions {
  std::string manifest;
  PipelineOptions pipeline;
  std::optional<std::uint64_t> target;
  std::string trim_policy = "whole-texts";
};

struct CompareOptions {
  std::string a;
  std::string b;
  PipelineOptions pipeline;
  double threshold = kDefaultDivergenceThreshold;
  int points_per_decade = 20;
};

struct FigOptions {
  std::string figure;
  std::vector<std::string> inputs;
  PipelineOptions pipeline;
  FitFlags fit;
  std::string lexicon;
  std::string form = "surface";
  bool approximate = false;
  std::optional<std::uint64_t> target;
  std::string trim_policy = "whole-texts";
  double threshold = kDefaultDivergenceThreshold;
  int points_per_decade = 20;
};

void cmd_rank(const RankOptions& o, Run& run);
void cmd_fit(const FitOptionsCli& o, Run& run);
void cmd_synth(const SynthOptions& o, Run& run);
void cmd_tag(const TagOptions& o, Run& run);
void cmd_corpus(const CorpusOptions& o, Run& run);
void cmd_compare(const CompareOptions& o, Run& run);
void cmd_fig(const FigOptions& o, Run& run);

// Shared helpers.
Json fit_json(const PowerLawFit& fit);
Json segmented_json(const SegmentedFit& fit);
// Fit and crossover requested by the flags; null members when not asked.
Json fits_for(const RankedDistribution& dist, const FitFlags& flags);

}  // namespace zipfkit::cli
