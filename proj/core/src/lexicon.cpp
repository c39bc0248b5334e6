#include "zipfkit/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "tsv.hpp"
#include "zipfkit/error.hpp"

namespace zipfkit {

std::string_view to_string(PosTag tag) {
  switch (tag) {
    case PosTag::kNoun:
      return "NOUN";
    case PosTag::kVerb:
      return "VERB";
    case PosTag::kAdj:
      return "ADJ";
    case PosTag::kAdv:
      return "ADV";
    case PosTag::kPron:
      return "PRON";
    case PosTag::kOther:
      return "OTHER";
  }
  return "?";
}

std::optional<PosTag> parse_pos_tag(std::string_view label) {
  std::string upper(label);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (PosTag t : kAllPosTags) {
    if (to_string(t) == upper) return t;
  }
  return std::nullopt;
}

std::string_view to_string(Resolution resolution) {
  switch (resolution) {
    case Resolution::kAuto:
      return "auto";
    case Resolution::kReview:
      return "review";
    case Resolution::kFallback:
      return "fallback";
  }
  return "?";
}

void Lexicon::add(std::string surface, Analysis analysis) {
  ++rows_;
  auto [it, inserted] = entries_.try_emplace(surface);
  LexiconEntry& e = it->second;
  if (inserted) e.surface = std::move(surface);
  if (std::find(e.analyses.begin(), e.analyses.end(), analysis) == e.analyses.end()) {
    e.analyses.push_back(std::move(analysis));
  }
}

const LexiconEntry* Lexicon::find(std::string_view surface) const {
  auto it = entries_.find(std::string(surface));
  return it == entries_.end() ? nullptr : &it->second;
}

Lexicon parse_lexicon(std::istream& in, const TokenizationRules& rules, std::string_view source) {
  Lexicon lex;
  std::size_t line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = detail::chomp(raw);
    if (detail::is_blank_or_comment(line)) continue;
    auto cols = detail::split(line, '\t');
    if (cols.size() != 3) {
      throw InputError(fmt::format("{}:{}: expected 3 tab-separated columns (surface, lemma, pos), got {}",
                                   source, line_no, cols.size()));
    }
    std::string_view surface = detail::trim(cols[0]);
    std::string_view lemma = detail::trim(cols[1]);
    std::string_view pos_label = detail::trim(cols[2]);
    if (surface.empty()) throw InputError(fmt::format("{}:{}: empty surface", source, line_no));
    if (lemma.empty()) throw InputError(fmt::format("{}:{}: empty lemma", source, line_no));
    auto pos = parse_pos_tag(pos_label);
    if (!pos) {
      throw InputError(fmt::format("{}:{}: unknown part-of-speech label '{}'", source, line_no,
                                   pos_label));
    }
    lex.add(normalize_word(surface, rules), Analysis{normalize_word(lemma, rules), *pos});
  }
  return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path, const TokenizationRules& rules) {
  const std::string content = detail::read_file(path);
  if (std::size_t bad = find_invalid_utf8(content); bad != std::string_view::npos) {
    throw EncodingError(bad, path.string());
  }
  std::istringstream in(content);
  return parse_lexicon(in, rules, path.string());
}

DisambiguationMode parse_disambiguation_mode(std::string_view name) {
  if (name == "priority") return DisambiguationMode::kPriority;
  if (name == "queue-only") return DisambiguationMode::kQueueOnly;
  throw ConfigError(fmt::format("unknown disambiguation mode '{}'", name));
}

TaggingResult tag_tokens(const TokenStream& stream, const Lexicon& lex, DisambiguationMode mode) {
  TaggingResult result;
  result.tokens.reserve(stream.size());
  for (const Token& t : stream) {
    TaggedToken tagged;
    tagged.surface = t.surface;
    tagged.position = t.position;
    const LexiconEntry* entry = lex.find(t.surface);
    if (entry == nullptr) {
      tagged.lemma = t.surface;
      tagged.pos = PosTag::kOther;
      tagged.resolution = Resolution::kFallback;
    } else {
      const Analysis& first = entry->analyses.front();
      tagged.lemma = first.lemma;
      tagged.pos = first.pos;
      tagged.resolution = Resolution::kAuto;
      if (entry->analyses.size() > 1) {
        tagged.ambiguous = true;
        result.queue.push_back({t.surface, t.position, entry->analyses});
        if (mode == DisambiguationMode::kQueueOnly) {
          tagged.resolution = Resolution::kReview;
          tagged.pending = true;
        }
      }
    }
    result.tokens.push_back(std::move(tagged));
  }
  return result;
}

ReviewFile parse_review_file(std::istream& in, const TokenizationRules& rules,
                             std::string_view source) {
  ReviewFile rows;
  std::size_t line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = detail::chomp(raw);
    if (detail::is_blank_or_comment(line)) continue;
    auto cols = detail::split(line, '\t');
    if (line_no == 1 && !cols.empty() && detail::trim(cols[0]) == "position") continue;
    if (cols.size() != 3) {
      throw InputError(fmt::format("{}:{}: expected 3 tab-separated columns (position, lemma, pos)",
                                   source, line_no));
    }
    ReviewRow row;
    row.line = line_no;
    if (!detail::parse_size(detail::trim(cols[0]), row.position)) {
      throw InputError(fmt::format("{}:{}: position '{}' is not a non-negative integer", source,
                                   line_no, cols[0]));
    }
    std::string_view lemma = detail::trim(cols[1]);
    if (lemma.empty()) throw InputError(fmt::format("{}:{}: empty lemma", source, line_no));
    row.lemma = normalize_word(lemma, rules);
    auto pos = parse_pos_tag(detail::trim(cols[2]));
    if (!pos) {
      throw InputError(fmt::format("{}:{}: unknown part-of-speech label '{}'", source, line_no,
                                   detail::trim(cols[2])));
    }
    row.pos = *pos;
    rows.push_back(std::move(row));
  }
  return rows;
}

ReviewFile load_review_file(const std::filesystem::path& path, const TokenizationRules& rules) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open {}", path.string()));
  return parse_review_file(in, rules, path.string());
}

ReviewResult apply_review_file(const std::vector<TaggedToken>& tagged, const ReviewFile& review) {
  std::unordered_map<std::size_t, std::size_t> index;
  index.reserve(tagged.size());
  for (std::size_t i = 0; i < tagged.size(); ++i) index.emplace(tagged[i].position, i);

  std::vector<std::string> bad;
  for (const auto& row : review) {
    if (!index.contains(row.position)) {
      bad.push_back(fmt::format("line {} (position {})", row.line, row.position));
    }
  }
  if (!bad.empty()) {
    std::string msg = "review rows reference positions outside the token stream:";
    for (const auto& b : bad) msg += "\n  " + b;
    throw InputError(msg);
  }

  ReviewResult result{tagged, {}};
  for (const auto& row : review) {
    TaggedToken& t = result.tokens[index.at(row.position)];
    if (!t.ambiguous) {
      result.warnings.push_back(fmt::format(
          "review line {}: position {} ('{}') is not in the ambiguity queue; ignored", row.line,
          row.position, t.surface));
      continue;
    }
    t.lemma = row.lemma;
    t.pos = row.pos;
    t.resolution = Resolution::kReview;
    t.pending = false;
  }
  return result;
}

std::size_t count_pending(const std::vector<TaggedToken>& tagged) {
  return static_cast<std::size_t>(
      std::count_if(tagged.begin(), tagged.end(), [](const TaggedToken& t) { return t.pending; }));
}

TokenStream lemmatize(const std::vector<TaggedToken>& tagged) {
  TokenStream out;
  out.reserve(tagged.size());
  for (const auto& t : tagged) out.push_back({t.lemma, t.position});
  return out;
}

void write_ambiguity_queue_tsv(std::ostream& out, const AmbiguityQueue& queue) {
  out << "position\tsurface\tcandidates\n";
  for (const auto& rec : queue) {
    out << rec.position << '\t' << rec.surface << '\t';
    for (std::size_t i = 0; i < rec.candidates.size(); ++i) {
      if (i) out << ';';
      out << rec.candidates[i].lemma << '/' << to_string(rec.candidates[i].pos);
    }
    out << '\n';
  }
}

void write_tagged_tsv(std::ostream& out, const std::vector<TaggedToken>& tagged) {
  out << "position\tsurface\tlemma\tpos\tresolution\n";
  for (const auto& t : tagged) {
    out << t.position << '\t' << t.surface << '\t' << t.lemma << '\t' << to_string(t.pos) << '\t'
        << (t.pending ? std::string_view("pending") : to_string(t.resolution)) << '\n';
  }
}

}  // namespace zipfkit
