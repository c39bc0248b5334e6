#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "zipfkit/text_ingest.hpp"

namespace zipfkit {

// OTHER is the catch-all class for everything not tagged as one of the
// inflectable/major classes.
enum class PosTag { kNoun, kVerb, kAdj, kAdv, kPron, kOther };

inline constexpr PosTag kAllPosTags[] = {PosTag::kNoun, PosTag::kVerb, PosTag::kAdj,
                                         PosTag::kAdv,  PosTag::kPron, PosTag::kOther};

std::string_view to_string(PosTag tag);
// Case-insensitive; nullopt for unknown labels.
std::optional<PosTag> parse_pos_tag(std::string_view label);

struct Analysis {
  std::string lemma;
  PosTag pos = PosTag::kOther;

  friend bool operator==(const Analysis&, const Analysis&) = default;
};

struct LexiconEntry {
  std::string surface;
  // Deduplicated; file order is disambiguation priority.
  std::vector<Analysis> analyses;
};

class Lexicon {
 public:
  // Appends an analysis to the surface's group unless already present.
  void add(std::string surface, Analysis analysis);

  const LexiconEntry* find(std::string_view surface) const;
  std::size_t surface_count() const { return entries_.size(); }
  std::size_t row_count() const { return rows_; }

 private:
  std::unordered_map<std::string, LexiconEntry> entries_;
  std::size_t rows_ = 0;
};

// TSV (surface, lemma, pos); blank lines and '#' comments are skipped.
// Surfaces and lemmas are normalized with the given rules.
Lexicon load_lexicon(const std::filesystem::path& path, const TokenizationRules& rules = {});
Lexicon parse_lexicon(std::istream& in, const TokenizationRules& rules = {},
                      std::string_view source = "<lexicon>");

enum class Resolution { kAuto, kReview, kFallback };

std::string_view to_string(Resolution resolution);

struct TaggedToken {
  std::string surface;
  std::string lemma;
  PosTag pos = PosTag::kOther;
  Resolution resolution = Resolution::kAuto;
  std::size_t position = 0;
  // The surface had more than one analysis in the lexicon.
  bool ambiguous = false;
  // Awaiting a manual decision (queue-only mode, not yet reviewed). The
  // provisional analysis is the lexicon's first candidate.
  bool pending = false;

  friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

struct AmbiguityRecord {
  std::string surface;
  std::size_t position = 0;
  std::vector<Analysis> candidates;
};

using AmbiguityQueue = std::vector<AmbiguityRecord>;

enum class DisambiguationMode { kPriority, kQueueOnly };

DisambiguationMode parse_disambiguation_mode(std::string_view name);

struct TaggingResult {
  std::vector<TaggedToken> tokens;
  // Emitted in both modes: one record per ambiguous token occurrence.
  AmbiguityQueue queue;
};

TaggingResult tag_tokens(const TokenStream& stream, const Lexicon& lex,
                         DisambiguationMode mode = DisambiguationMode::kPriority);

struct ReviewRow {
  std::size_t position = 0;
  std::string lemma;
  PosTag pos = PosTag::kOther;
  std::size_t line = 0;  // 1-based source line, for diagnostics
};

using ReviewFile = std::vector<ReviewRow>;

ReviewFile load_review_file(const std::filesystem::path& path, const TokenizationRules& rules = {});
ReviewFile parse_review_file(std::istream& in, const TokenizationRules& rules = {},
                             std::string_view source = "<review>");

struct ReviewResult {
  std::vector<TaggedToken> tokens;
  // Rows that point at tokens outside the ambiguity queue; not applied.
  std::vector<std::string> warnings;
};

// Throws InputError listing every row whose position matches no token.
ReviewResult apply_review_file(const std::vector<TaggedToken>& tagged, const ReviewFile& review);

std::size_t count_pending(const std::vector<TaggedToken>& tagged);

TokenStream lemmatize(const std::vector<TaggedToken>& tagged);

// TSV (position, surface, candidates); candidates "lemma/POS" joined by ';'.
void write_ambiguity_queue_tsv(std::ostream& out, const AmbiguityQueue& queue);
// TSV (position, surface, lemma, pos, resolution).
void write_tagged_tsv(std::ostream& out, const std::vector<TaggedToken>& tagged);

}  // namespace zipfkit
