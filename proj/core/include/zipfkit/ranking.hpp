#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "zipfkit/fingerprint.hpp"
#include "zipfkit/lexicon.hpp"
#include "zipfkit/text_ingest.hpp"

namespace zipfkit {

// word -> occurrence count. Counts are always positive.
class FrequencyTable {
 public:
  FrequencyTable() = default;
  explicit FrequencyTable(Fingerprint fingerprint) : fingerprint_(fingerprint) {}

  void add(std::string_view word, std::uint64_t count = 1);
  std::uint64_t count(std::string_view word) const;

  std::uint64_t total() const { return total_; }
  std::size_t vocabulary() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }

  Fingerprint fingerprint() const { return fingerprint_; }
  void set_fingerprint(Fingerprint fp) { fingerprint_ = fp; }

  const std::unordered_map<std::string, std::uint64_t>& counts() const { return counts_; }

  // Same counts and fingerprint.
  friend bool operator==(const FrequencyTable&, const FrequencyTable&) = default;

 private:
  std::unordered_map<std::string, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
  Fingerprint fingerprint_;
};

struct RankEntry {
  std::uint64_t rank = 0;
  std::string word;
  // Integer-valued for counted data; real-valued only for synthetic tables.
  double frequency = 0.0;

  friend bool operator==(const RankEntry&, const RankEntry&) = default;
};

// Ranks 1..V, frequencies non-increasing, ties ordered by ascending word
// (byte-wise on the UTF-8 encoding).
class RankedDistribution {
 public:
  RankedDistribution() = default;

  // Sorts by (frequency desc, word asc) and assigns ranks. Frequencies must
  // be positive and finite, words unique.
  static RankedDistribution from_frequencies(std::vector<std::pair<std::string, double>> items,
                                             Fingerprint fingerprint = {},
                                             bool real_valued = false);

  // Accepts entries already in rank order; validates every invariant.
  static RankedDistribution from_ranked(std::vector<RankEntry> entries,
                                        Fingerprint fingerprint = {},
                                        bool real_valued = false);

  const std::vector<RankEntry>& entries() const { return entries_; }
  std::size_t vocabulary() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double total() const { return total_; }
  // 1-based.
  double frequency(std::uint64_t rank) const { return entries_.at(rank - 1).frequency; }

  Fingerprint fingerprint() const { return fingerprint_; }
  bool real_valued() const { return real_valued_; }

  // Every frequency multiplied by factor (> 0). Result is real-valued unless
  // the factor keeps integer counts integral.
  RankedDistribution scaled(double factor) const;

  friend bool operator==(const RankedDistribution&, const RankedDistribution&) = default;

 private:
  std::vector<RankEntry> entries_;
  double total_ = 0.0;
  Fingerprint fingerprint_;
  bool real_valued_ = false;
};

FrequencyTable count_frequencies(const TokenStream& stream, Fingerprint fingerprint = {});

// Counts contiguous shards concurrently and merges; equal to the sequential
// count for every shard count.
FrequencyTable count_frequencies_sharded(const TokenStream& stream, std::size_t shards,
                                         Fingerprint fingerprint = {});

RankedDistribution rank(const FrequencyTable& table);

enum class WordForm { kSurface, kLemma };

WordForm parse_word_form(std::string_view name);

RankedDistribution class_sub_ranking(const std::vector<TaggedToken>& tagged, PosTag pos,
                                     WordForm form, Fingerprint fingerprint = {});

using WordSet = std::unordered_set<std::string>;

// Type-level approximation: entries of the global ranking whose word is in
// the set, re-ranked 1..k with their original frequencies.
RankedDistribution extract_sub_ranking(const RankedDistribution& global, const WordSet& words);

// Pointwise sum. Throws ConfigError when fingerprints differ.
FrequencyTable merge_tables(std::span<const FrequencyTable> tables);

// CSV with header rank,word,frequency. Words are quoted when they contain
// a comma, quote or line break.
void write_distribution_csv(std::ostream& out, const RankedDistribution& dist);
RankedDistribution read_distribution_csv(std::istream& in, std::string_view source = "<csv>");

// JSON with totals, fingerprint and entries.
std::string distribution_to_json(const RankedDistribution& dist, int indent = -1);
RankedDistribution distribution_from_json(std::string_view json);

// Frequencies formatted as integers when integral, otherwise shortest
// round-trip decimal.
std::string format_frequency(double f);

}  // namespace zipfkit
