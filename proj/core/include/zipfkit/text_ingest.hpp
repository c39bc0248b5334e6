#pragma once

// Raw text -> clean token streams.
//
// A text is split on whitespace into chunks. Inside a chunk, maximal runs of
// word characters (Unicode letters, combining marks, decimal digits, plus
// apostrophes and hyphens flanked on both sides by such characters) are the
// candidate words. Runs containing a digit are rejected as non-words; a chunk
// with no run at all ("--", "***") is rejected whole. Everything else in a
// chunk (leading/trailing punctuation) is stripped without a record.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "zipfkit/fingerprint.hpp"

namespace zipfkit {

struct RawText {
  std::string id;
  std::string language;
  std::string body;
};

struct Token {
  std::string surface;
  // Index in the stream produced by tokenize(); filtering keeps the
  // original index, so positions stay strictly increasing but may gap.
  std::size_t position = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

using TokenStream = std::vector<Token>;

enum class RejectReason { kNonWord, kDictionaryMiss };

std::string_view to_string(RejectReason reason);

struct RejectRecord {
  std::string original;
  // Number of accepted tokens preceding the rejected string.
  std::size_t position = 0;
  RejectReason reason = RejectReason::kNonWord;

  friend bool operator==(const RejectRecord&, const RejectRecord&) = default;
};

struct TokenizationRules {
  bool normalize_nfc = true;
  bool case_fold = true;
  bool keep_apostrophes = true;
  bool keep_hyphens = true;
  // Drops everything outside the "*** START OF" / "*** END OF" markers of
  // Project Gutenberg plain-text files. No-op when the markers are absent.
  bool strip_gutenberg_boilerplate = true;

  Fingerprint fingerprint() const;
  std::string canonical() const;

  friend bool operator==(const TokenizationRules&, const TokenizationRules&) = default;
};

// Reads a YAML key-value file. Unknown keys are a ConfigError.
TokenizationRules load_tokenization_rules(const std::filesystem::path& path);
TokenizationRules parse_tokenization_rules(std::string_view yaml_text);

struct TokenizeResult {
  TokenStream tokens;
  std::vector<RejectRecord> rejects;
};

// Throws EncodingError naming the byte offset when the body is not UTF-8.
TokenizeResult tokenize(const RawText& raw, const TokenizationRules& rules = {});

// Case folding and canonical composition as applied to every token.
std::string normalize_word(std::string_view word, const TokenizationRules& rules = {});

// Returns the offset of the first ill-formed byte, or npos when valid.
std::size_t find_invalid_utf8(std::string_view bytes);

class Dictionary {
 public:
  Dictionary() = default;

  // Entries are normalized with the given rules; duplicates after
  // normalization are merged and counted.
  static Dictionary from_words(const std::vector<std::string>& words,
                               const TokenizationRules& rules = {});

  bool contains(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t duplicates_merged() const { return duplicates_; }

 private:
  std::unordered_set<std::string> entries_;
  std::size_t duplicates_ = 0;
};

Dictionary load_dictionary(const std::filesystem::path& path, const TokenizationRules& rules = {});

enum class FilterPolicy { kDropMisses, kKeepMisses, kReviewOnly };

FilterPolicy parse_filter_policy(std::string_view name);
std::string_view to_string(FilterPolicy policy);

struct FilterResult {
  TokenStream tokens;
  // Under kDropMisses these are the removed tokens; otherwise a miss report.
  std::vector<RejectRecord> misses;
};

FilterResult apply_dictionary_filter(const TokenStream& stream, const Dictionary& dict,
                                     FilterPolicy policy);

// TSV with header "original\tposition\treason".
void write_rejects_tsv(std::ostream& out, const std::vector<RejectRecord>& rejects);

RawText read_raw_text(const std::filesystem::path& path, std::string id = {},
                      std::string language = {});

std::vector<std::string> surfaces(const TokenStream& stream);

// Space-joined surfaces, newline-terminated; round-trips through tokenize.
std::string join_surfaces(const TokenStream& stream);

}  // namespace zipfkit
