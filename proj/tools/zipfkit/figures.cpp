// Figure-style outputs: long-format CSV (series,rank,frequency) plus a JSON
// file with the fits drawn over the data.

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "commands.hpp"
#include "zipfkit/error.hpp"
#include "zipfkit/fitting.hpp"
#include "zipfkit/lexicon.hpp"

namespace zipfkit::cli {
namespace {

constexpr const char* kFig1Window = "10:10000";
constexpr const char* kFig2Window = "1:1000";
constexpr const char* kFig4Window = "10:2000";

class SeriesWriter {
 public:
  SeriesWriter() { out_ << "series,rank,frequency\n"; }

  void add(const std::string& label, const RankedDistribution& dist) {
    for (const auto& e : dist.entries()) row(label, e.rank, e.frequency);
  }
  void row(const std::string& label, std::uint64_t rank, double frequency) {
    if (label.find_first_of(",\"\n") == std::string::npos) {
      out_ << label;
    } else {
      std::string q = label;
      for (std::size_t i = 0; (i = q.find('"', i)) != std::string::npos; i += 2) q.insert(i, 1, '"');
      out_ << '"' << q << '"';
    }
    out_ << ',' << rank << ',' << format_frequency(frequency) << '\n';
  }
  // Fitted line sampled on a log grid inside its window.
  void overlay(const std::string& label, const PowerLawFit& fit) {
    for (std::uint64_t r : log_rank_grid(fit.window.hi, 20)) {
      if (r < fit.window.lo) continue;
      row(label, r, std::pow(10.0, fit.predict_log10(static_cast<double>(r))));
    }
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

// Window clamped to the distribution; null with a reason when unusable.
Json try_fit(const RankedDistribution& dist, const std::string& window, SeriesWriter* w,
             const std::string& label) {
  if (dist.empty()) return Json{{"error", "empty distribution"}};
  try {
    const auto fit = fit_power_law(dist, parse_window(window));
    if (w) w->overlay(label, fit);
    return fit_json(fit);
  } catch (const NumericError& e) {
    return Json{{"error", e.what()}};
  }
}

Json try_crossover(const RankedDistribution& dist, const std::string& window, SeriesWriter* w,
                   const std::string& label, int candidates) {
  if (dist.empty()) return Json{{"error", "empty distribution"}};
  try {
    CrossoverOptions opt;
    opt.candidates_per_decade = candidates;
    const auto s = detect_crossover(dist, parse_window(window), opt);
    if (w) {
      w->overlay(label + "/low", s.low_fit);
      w->overlay(label + "/high", s.high_fit);
      w->row(label + "/breakpoint", s.breakpoint, dist.frequency(s.breakpoint));
    }
    return segmented_json(s);
  } catch (const NumericError& e) {
    return Json{{"error", e.what()}};
  }
}

std::string window_or(const std::string& given, const std::string& fallback) {
  return given.empty() ? fallback : given;
}

std::string outer_window(const std::string& given, const RankedDistribution& dist) {
  if (!given.empty()) return given;
  return fmt::format("10:{}", std::max<std::uint64_t>(dist.vocabulary(), 11));
}

std::vector<TaggedToken> tagged_input(const FigOptions& o, const PipelineConfig& pipe, Run& run) {
  if (o.lexicon.empty()) throw ConfigError(fmt::format("{} needs a lexicon (--lexicon)", o.figure));
  if (o.inputs.size() != 1) throw ConfigError(fmt::format("{} takes exactly one text", o.figure));
  const auto tokens = load_tokens(o.inputs[0], pipe, &run);
  const auto lex = load_lexicon(o.lexicon, pipe.rules);
  run.add_input(o.lexicon);
  return tag_tokens(tokens, lex).tokens;
}

void fig1(const FigOptions& o, const PipelineConfig& pipe, Run& run, SeriesWriter& w, Json& j) {
  if (o.inputs.empty()) throw ConfigError("fig1 needs at least one input");
  Json series = Json::array();
  for (const auto& in : o.inputs) {
    const auto dist = load_distribution(in, pipe, &run);
    const std::string label = label_of(in);
    w.add(label, dist);
    Json s;
    s["label"] = label;
    s["input"] = in;
    s["total"] = dist.total();
    s["vocabulary"] = dist.vocabulary();
    s["fit"] = try_fit(dist, window_or(o.fit.window, kFig1Window), &w, label + "/fit");
    s["crossover"] = o.fit.crossover.empty()
                         ? Json(nullptr)
                         : try_crossover(dist, o.fit.crossover, &w, label, o.fit.candidates_per_decade);
    series.push_back(s);
  }
  j["series"] = series;
}

void fig2(const FigOptions& o, const PipelineConfig& pipe, Run& run, SeriesWriter& w, Json& j) {
  const auto tagged = tagged_input(o, pipe, run);
  const WordForm form = parse_word_form(o.form);
  const std::string window = window_or(o.fit.window, kFig2Window);

  TokenStream all_stream;
  if (form == WordForm::kLemma) {
    all_stream = lemmatize(tagged);
  } else {
    for (const auto& t : tagged) all_stream.push_back({t.surface, t.position});
  }
  const auto all = rank(count_frequencies(all_stream));
  w.add("all", all);

  Json classes = Json::array();
  for (PosTag pos : kAllPosTags) {
    RankedDistribution d;
    if (o.approximate) {
      WordSet words;
      for (const auto& t : tagged) {
        if (t.pos == pos) words.insert(form == WordForm::kLemma ? t.lemma : t.surface);
      }
      d = extract_sub_ranking(all, words);
    } else {
      d = class_sub_ranking(tagged, pos, form);
    }
    const std::string label(to_string(pos));
    w.add(label, d);
    classes.push_back({{"class", label},
                       {"total", d.total()},
                       {"vocabulary", d.vocabulary()},
                       {"fit", try_fit(d, window, nullptr, label)}});
  }
  // Slope -1 through the top of the full ranking, for reference.
  for (std::uint64_t r : log_rank_grid(all.vocabulary(), 20)) {
    w.row("reference", r, all.frequency(1) / static_cast<double>(r));
  }
  j["form"] = o.form;
  j["sub_ranking"] = o.approximate ? "extracted from the global ranking" : "token-level class counts";
  j["all"] = {{"total", all.total()}, {"vocabulary", all.vocabulary()}, {"fit", try_fit(all, window, nullptr, "all")}};
  j["classes"] = classes;
  j["reference_alpha"] = 1.0;
}

void fig3(const FigOptions& o, const PipelineConfig& pipe, Run& run, SeriesWriter& w, Json& j) {
  const auto tagged = tagged_input(o, pipe, run);
  TokenStream surfaces_stream;
  for (const auto& t : tagged) surfaces_stream.push_back({t.surface, t.position});
  const auto inflected = rank(count_frequencies(surfaces_stream));
  const auto lemmas = rank(count_frequencies(lemmatize(tagged)));
  w.add("inflected", inflected);
  w.add("lemma", lemmas);
  j["inflected"] = {{"vocabulary", inflected.vocabulary()},
                    {"total", inflected.total()},
                    {"crossover", try_crossover(inflected, outer_window(o.fit.crossover, inflected), nullptr,
                                                "inflected", o.fit.candidates_per_decade)}};
  j["lemma"] = {{"vocabulary", lemmas.vocabulary()},
                {"total", lemmas.total()},
                {"crossover", try_crossover(lemmas, outer_window(o.fit.crossover, lemmas), &w, "lemma",
                                            o.fit.candidates_per_decade)}};
}

RankedDistribution corpus_input(const std::string& path, const FigOptions& o, const PipelineConfig& pipe,
                                Run& run, Json& info) {
  const fs::path p(path);
  const std::string ext = p.extension().string();
  if (o.target && (ext == ".yaml" || ext == ".yml")) {
    auto manifest = load_manifest(p);
    run.add_input(p);
    for (const auto& t : manifest.texts) run.add_input(t.path);
    const auto sizes = measure_texts(manifest, pipe);
    auto trimmed = trim_to_size(manifest, sizes, *o.target, parse_trim_policy(o.trim_policy));
    info["trim"] = {{"target", *o.target}, {"policy", o.trim_policy}, {"total", trimmed.total},
                    {"shortfall", trimmed.shortfall}, {"texts_kept", trimmed.manifest.texts.size()}};
    return rank(build_corpus(trimmed.manifest, pipe).table);
  }
  return load_distribution(p, pipe, &run);
}

void fig4(const FigOptions& o, const PipelineConfig& pipe, Run& run, SeriesWriter& w, Json& j) {
  if (o.inputs.size() != 2) throw ConfigError(fmt::format("{} takes two inputs: first second", o.figure));
  const bool b = o.figure == "fig4b";
  const std::string first_label = b ? "native" : "single-author";
  const std::string second_label = b ? "translated" : "multi-author";
  Json first_info, second_info;
  const auto first = corpus_input(o.inputs[0], o, pipe, run, first_info);
  const auto second = corpus_input(o.inputs[1], o, pipe, run, second_info);
  w.add(first_label, first);
  w.add(second_label, second);

  // Gap is second minus first: negative where the second corpus decays faster.
  const auto rep = compare(second, first, GridSpec{o.points_per_decade}, o.threshold);
  for (const auto& g : rep.gap) {
    w.row("delta", g.rank, g.delta);
  }
  const std::string window = window_or(o.fit.window, kFig4Window);
  first_info["label"] = first_label;
  first_info["input"] = o.inputs[0];
  first_info["total"] = first.total();
  first_info["vocabulary"] = first.vocabulary();
  first_info["fit"] = try_fit(first, window, &w, first_label + "/fit");
  second_info["label"] = second_label;
  second_info["input"] = o.inputs[1];
  second_info["total"] = second.total();
  second_info["vocabulary"] = second.vocabulary();
  second_info["fit"] = try_fit(second, window, &w, second_label + "/fit");
  j["first"] = first_info;
  j["second"] = second_info;
  j["comparison"] = Json::parse(comparison_to_json(rep));
  j["comparison"]["a"] = second_label;
  j["comparison"]["b"] = first_label;
}

}  // namespace

void cmd_fig(const FigOptions& o, Run& run) {
  const auto pipe = make_pipeline(o.pipeline, &run);
  SeriesWriter w;
  Json j;
  j["figure"] = o.figure;
  if (o.figure == "fig1") {
    fig1(o, pipe, run, w, j);
  } else if (o.figure == "fig2") {
    fig2(o, pipe, run, w, j);
  } else if (o.figure == "fig3") {
    fig3(o, pipe, run, w, j);
  } else if (o.figure == "fig4a" || o.figure == "fig4b") {
    fig4(o, pipe, run, w, j);
  } else {
    throw ConfigError(fmt::format("unknown figure '{}' (fig1|fig2|fig3|fig4a|fig4b)", o.figure));
  }
  run.write_text(o.figure + ".csv", w.str());
  run.write_json(o.figure + ".json", j);
}

}  // namespace zipfkit::cli
