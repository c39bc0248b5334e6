#include "commands.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "zipfkit/error.hpp"
#include "zipfkit/fitting.hpp"
#include "zipfkit/lexicon.hpp"
#include "zipfkit/synth.hpp"

namespace zipfkit::cli {

Json fit_json(const PowerLawFit& fit) { return Json::parse(fit_to_json(fit)); }

Json segmented_json(const SegmentedFit& fit) { return Json::parse(segmented_to_json(fit)); }

Json fits_for(const RankedDistribution& dist, const FitFlags& flags) {
  Json j;
  j["fit"] = nullptr;
  j["crossover"] = nullptr;
  if (!flags.window.empty()) {
    FitOptions opt;
    opt.log_binning = flags.log_binning;
    const auto fit = fit_power_law(dist, parse_window(flags.window), opt);
    j["fit"] = fit_json(fit);
    if (!flags.log_binning) {
      const auto rep = goodness_report(dist, fit);
      j["fit"]["residuals"] = {{"max_abs", rep.max_abs},
                               {"sign_runs", rep.run_count},
                               {"longest_run", {{"first_rank", rep.longest_run.first_rank},
                                                {"last_rank", rep.longest_run.last_rank},
                                                {"sign", rep.longest_run.sign}}},
                               {"runs_z", rep.runs_z}};
    }
  }
  if (!flags.crossover.empty()) {
    CrossoverOptions opt;
    opt.candidates_per_decade = flags.candidates_per_decade;
    j["crossover"] = segmented_json(detect_crossover(dist, parse_window(flags.crossover), opt));
  }
  return j;
}

namespace {

WordForm form_of(const std::string& name) { return parse_word_form(name); }

PosTag pos_of(const std::string& label) {
  auto p = parse_pos_tag(label);
  if (!p) throw ConfigError(fmt::format("unknown POS class '{}' (noun|verb|adj|adv|pron|other)", label));
  return *p;
}

Lexicon load_lexicon_input(const std::string& path, const PipelineConfig& pipe, Run& run) {
  auto lex = load_lexicon(path, pipe.rules);
  run.add_input(path);
  return lex;
}

}  // namespace

void cmd_rank(const RankOptions& o, Run& run) {
  const auto pipe = make_pipeline(o.pipeline, &run);
  std::vector<RejectRecord> rejects;
  const auto tokens = load_tokens(o.input, pipe, &run, &rejects);
  const WordForm form = form_of(o.form);

  RankedDistribution dist;
  Fingerprint fp = pipe.fingerprint();
  if (!o.lexicon.empty()) {
    const auto lex = load_lexicon_input(o.lexicon, pipe, run);
    fp = fp.combine("lexicon=" + fs::path(o.lexicon).filename().string());
    const auto tagged = tag_tokens(tokens, lex).tokens;
    if (!o.pos.empty()) {
      dist = class_sub_ranking(tagged, pos_of(o.pos), form, fp);
    } else if (form == WordForm::kLemma) {
      dist = rank(count_frequencies(lemmatize(tagged), fp));
    } else {
      dist = rank(count_frequencies(tokens, fp));
    }
  } else {
    if (form == WordForm::kLemma || !o.pos.empty()) {
      throw ConfigError("--form lemma and --pos need a lexicon (--lexicon)");
    }
    dist = rank(count_frequencies(tokens, fp));
  }

  run.write_text("rank.csv", distribution_csv(dist));
  std::ostringstream rej;
  write_rejects_tsv(rej, rejects);
  run.write_text("rejects.tsv", rej.str());

  Json summary;
  summary["input"] = o.input;
  summary["tokens"] = tokens.size();
  summary["ranked_tokens"] = static_cast<std::uint64_t>(dist.total());
  summary["vocabulary"] = dist.vocabulary();
  summary["rejects"] = rejects.size();
  summary["fingerprint"] = dist.fingerprint().hex();
  const Json fits = dist.empty() ? Json{{"fit", nullptr}, {"crossover", nullptr}} : fits_for(dist, o.fit);
  summary["fit"] = fits["fit"];
  summary["crossover"] = fits["crossover"];
  run.write_json("summary.json", summary);
}

void cmd_fit(const FitOptionsCli& o, Run& run) {
  if (o.fit.window.empty() && o.fit.crossover.empty()) {
    throw ConfigError("fit needs --window and/or --crossover");
  }
  const auto pipe = make_pipeline(o.pipeline, &run);
  const auto dist = load_distribution(o.input, pipe, &run);
  Json j = fits_for(dist, o.fit);
  j["input"] = o.input;
  j["vocabulary"] = dist.vocabulary();
  j["total"] = dist.total();
  if (!o.fit.window.empty() && !o.fit.log_binning) {
    const auto fit = fit_power_law(dist, parse_window(o.fit.window));
    std::string csv = "rank,residual\n";
    for (const auto& r : goodness_report(dist, fit).residuals) {
      csv += fmt::format("{},{}\n", r.rank, r.value);
    }
    run.write_text("residuals.csv", csv);
  }
  run.write_json("fit.json", j);
}

void cmd_synth(const SynthOptions& o, Run& run) {
  run.set_seed(o.seed);
  Json j;
  j["model"] = o.model;
  if (o.model == "monkey") {
    const MonkeyParams p{o.letters, o.space_probability, o.length, o.seed};
    j["analytic_alpha"] = analytic_monkey_alpha(o.letters, o.space_probability);
    run.write_text("monkey.txt", monkey_characters(p) + "\n");
    j["params"] = {{"letters", o.letters}, {"space_probability", o.space_probability},
                   {"length", o.length}, {"seed", o.seed}};
  } else if (o.model == "zipf") {
    const ZipfParams p{o.alpha, o.vocabulary, o.tokens, o.seed};
    run.write_text("zipf.txt", join_surfaces(zipf_sample(p)));
    j["params"] = {{"alpha", o.alpha}, {"vocabulary", o.vocabulary}, {"tokens", o.tokens}, {"seed", o.seed}};
  } else if (o.model == "exact") {
    run.write_text("exact.csv", distribution_csv(exact_zipf_table(o.alpha, o.vocabulary, o.scale)));
    j["params"] = {{"alpha", o.alpha}, {"vocabulary", o.vocabulary}, {"scale", o.scale}};
  } else if (o.model == "two-regime") {
    TwoRegimeParams p;
    p.alpha_low = o.alpha;
    p.alpha_high = o.alpha_high;
    p.breakpoint = o.breakpoint;
    p.vocabulary = o.vocabulary;
    p.scale = o.scale;
    p.noise_sigma = o.noise;
    p.seed = o.seed;
    run.write_text("two_regime.csv", distribution_csv(two_regime_table(p)));
    j["params"] = {{"alpha_low", p.alpha_low}, {"alpha_high", p.alpha_high}, {"breakpoint", p.breakpoint},
                   {"vocabulary", p.vocabulary}, {"scale", p.scale},       {"noise_sigma", p.noise_sigma},
                   {"seed", p.seed}};
  } else {
    throw ConfigError(fmt::format("unknown model '{}' (monkey|zipf|exact|two-regime)", o.model));
  }
  run.write_json("synth.json", j);
}

void cmd_tag(const TagOptions& o, Run& run) {
  const auto pipe = make_pipeline(o.pipeline, &run);
  const auto tokens = load_tokens(o.input, pipe, &run);
  const auto lex = load_lexicon_input(o.lexicon, pipe, run);
  auto result = tag_tokens(tokens, lex, parse_disambiguation_mode(o.mode));

  Json j;
  j["input"] = o.input;
  j["mode"] = o.mode;
  j["tokens"] = result.tokens.size();
  j["ambiguous"] = result.queue.size();
  std::vector<std::string> warnings;
  if (!o.review.empty()) {
    const auto review = load_review_file(o.review, pipe.rules);
    run.add_input(o.review);
    auto applied = apply_review_file(result.tokens, review);
    result.tokens = std::move(applied.tokens);
    warnings = std::move(applied.warnings);
    j["review_rows"] = review.size();
  }
  j["pending"] = count_pending(result.tokens);
  j["review_warnings"] = warnings;
  std::size_t fallback = 0;
  for (const auto& t : result.tokens) fallback += t.resolution == Resolution::kFallback;
  j["fallback"] = fallback;

  std::ostringstream tagged, queue;
  write_tagged_tsv(tagged, result.tokens);
  write_ambiguity_queue_tsv(queue, result.queue);
  run.write_text("tagged.tsv", tagged.str());
  run.write_text("ambiguity_queue.tsv", queue.str());
  run.write_json("tag.json", j);
}

void cmd_corpus(const CorpusOptions& o, Run& run) {
  const auto pipe = make_pipeline(o.pipeline, &run);
  auto manifest = load_manifest(o.manifest);
  run.add_input(o.manifest);
  for (const auto& t : manifest.texts) run.add_input(t.path);

  Json j;
  j["manifest"] = o.manifest;
  j["name"] = manifest.name;
  const auto target = o.target ? o.target : manifest.target_size;
  if (target) {
    const auto sizes = measure_texts(manifest, pipe);
    auto trimmed = trim_to_size(manifest, sizes, *target, parse_trim_policy(o.trim_policy));
    manifest = trimmed.manifest;
    j["trim"] = {{"target", *target},
                 {"policy", o.trim_policy},
                 {"total", trimmed.total},
                 {"shortfall", trimmed.shortfall},
                 {"texts_kept", manifest.texts.size()}};
    run.write_text("trimmed_manifest.yaml", manifest_to_yaml(manifest));
  } else {
    j["trim"] = nullptr;
  }
  const auto build = build_corpus(manifest, pipe);
  const auto dist = rank(build.table);
  if (dist.empty()) throw EmptyInputError(fmt::format("{}: corpus has no word tokens", o.manifest));
  Json per = Json::array();
  for (const auto& t : build.per_text) per.push_back({{"id", t.id}, {"tokens", t.tokens}});
  j["per_text"] = per;
  j["tokens"] = build.table.total();
  j["vocabulary"] = dist.vocabulary();
  j["fingerprint"] = dist.fingerprint().hex();
  run.write_text("corpus.csv", distribution_csv(dist));
  run.write_json("corpus.json", j);
}

void cmd_compare(const CompareOptions& o, Run& run) {
  const auto pipe = make_pipeline(o.pipeline, &run);
  const auto a = load_distribution(o.a, pipe, &run);
  const auto b = load_distribution(o.b, pipe, &run);
  const auto rep = compare(a, b, GridSpec{o.points_per_decade}, o.threshold);
  Json j = Json::parse(comparison_to_json(rep));
  j["a"] = o.a;
  j["b"] = o.b;
  std::ostringstream gap;
  write_gap_csv(gap, rep);
  run.write_text("gap.csv", gap.str());
  run.write_json("comparison.json", j);
}

}  // namespace zipfkit::cli
