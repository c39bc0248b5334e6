#include "zipfkit/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "tsv.hpp"
#include "zipfkit/error.hpp"

namespace zipfkit {
namespace {

constexpr double kMaxExactInteger = 9007199254740992.0;  // 2^53

bool is_integral(double f) { return f == std::floor(f) && f < kMaxExactInteger; }

bool rank_order(const std::pair<std::string, double>& a, const std::pair<std::string, double>& b) {
  if (a.second != b.second) return a.second > b.second;
  return a.first < b.first;
}

std::string csv_quote(std::string_view word) {
  if (word.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(word);
  std::string out = "\"";
  for (char c : word) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

// Splits one CSV record; quoted fields may contain separators but not
// line breaks (words never contain whitespace).
std::vector<std::string> csv_fields(std::string_view line, std::string_view source,
                                    std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty() && !quoted) {
      in_quotes = quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
      quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (in_quotes) throw InputError(fmt::format("{}:{}: unterminated quoted field", source, line_no));
  fields.push_back(std::move(cur));
  return fields;
}

double parse_frequency(std::string_view s, std::string_view source, std::size_t line_no) {
  std::string tmp(detail::trim(s));
  char* end = nullptr;
  double f = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size() || !std::isfinite(f) || f <= 0.0) {
    throw InputError(fmt::format("{}:{}: invalid frequency '{}'", source, line_no, s));
  }
  return f;
}

}  // namespace

void FrequencyTable::add(std::string_view word, std::uint64_t count) {
  if (count == 0) return;
  counts_[std::string(word)] += count;
  total_ += count;
}

std::uint64_t FrequencyTable::count(std::string_view word) const {
  auto it = counts_.find(std::string(word));
  return it == counts_.end() ? 0 : it->second;
}

RankedDistribution RankedDistribution::from_frequencies(
    std::vector<std::pair<std::string, double>> items, Fingerprint fingerprint, bool real_valued) {
  for (const auto& [word, f] : items) {
    if (!std::isfinite(f) || f <= 0.0) {
      throw NumericError(fmt::format("frequency of '{}' must be positive and finite, got {}", word, f));
    }
  }
  std::sort(items.begin(), items.end(), rank_order);
  std::vector<RankEntry> entries;
  entries.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0 && items[i].first == items[i - 1].first) {
      throw InputError(fmt::format("duplicate word '{}' in distribution", items[i].first));
    }
    entries.push_back({i + 1, std::move(items[i].first), items[i].second});
  }
  // Duplicates with different frequencies are not adjacent after sorting.
  return from_ranked(std::move(entries), fingerprint, real_valued);
}

RankedDistribution RankedDistribution::from_ranked(std::vector<RankEntry> entries,
                                                   Fingerprint fingerprint, bool real_valued) {
  RankedDistribution d;
  std::unordered_set<std::string_view> seen;
  seen.reserve(entries.size());
  double total = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const RankEntry& e = entries[i];
    if (e.rank != i + 1) {
      throw InputError(fmt::format("rank {} found where rank {} was expected", e.rank, i + 1));
    }
    if (!std::isfinite(e.frequency) || e.frequency <= 0.0) {
      throw NumericError(fmt::format("rank {}: frequency must be positive and finite", e.rank));
    }
    if (i > 0) {
      const RankEntry& prev = entries[i - 1];
      if (e.frequency > prev.frequency) {
        throw InputError(fmt::format("frequency increases at rank {}", e.rank));
      }
      if (e.frequency == prev.frequency && !(prev.word < e.word)) {
        throw InputError(fmt::format("tie at rank {} is not in ascending word order", e.rank));
      }
    }
    if (!seen.insert(e.word).second) {
      throw InputError(fmt::format("duplicate word '{}' in distribution", e.word));
    }
    if (!real_valued && !is_integral(e.frequency)) real_valued = true;
    total += e.frequency;
  }
  d.entries_ = std::move(entries);
  d.total_ = total;
  d.fingerprint_ = fingerprint;
  d.real_valued_ = real_valued;
  return d;
}

RankedDistribution RankedDistribution::scaled(double factor) const {
  if (!std::isfinite(factor) || factor <= 0.0) {
    throw NumericError(fmt::format("scale factor must be positive, got {}", factor));
  }
  std::vector<RankEntry> entries = entries_;
  for (auto& e : entries) e.frequency *= factor;
  return from_ranked(std::move(entries), fingerprint_, real_valued_ || !is_integral(factor));
}

FrequencyTable count_frequencies(const TokenStream& stream, Fingerprint fingerprint) {
  FrequencyTable table(fingerprint);
  for (const Token& t : stream) table.add(t.surface);
  return table;
}

FrequencyTable count_frequencies_sharded(const TokenStream& stream, std::size_t shards,
                                         Fingerprint fingerprint) {
  if (shards <= 1 || stream.size() < 2) return count_frequencies(stream, fingerprint);
  shards = std::min(shards, stream.size());
  const std::size_t step = (stream.size() + shards - 1) / shards;
  std::vector<std::future<FrequencyTable>> parts;
  for (std::size_t begin = 0; begin < stream.size(); begin += step) {
    const std::size_t end = std::min(stream.size(), begin + step);
    parts.push_back(std::async(std::launch::async, [&stream, begin, end, fingerprint] {
      FrequencyTable t(fingerprint);
      for (std::size_t i = begin; i < end; ++i) t.add(stream[i].surface);
      return t;
    }));
  }
  std::vector<FrequencyTable> tables;
  tables.reserve(parts.size());
  for (auto& p : parts) tables.push_back(p.get());
  return merge_tables(tables);
}

RankedDistribution rank(const FrequencyTable& table) {
  std::vector<std::pair<std::string, double>> items;
  items.reserve(table.vocabulary());
  for (const auto& [word, count] : table.counts()) {
    items.emplace_back(word, static_cast<double>(count));
  }
  return RankedDistribution::from_frequencies(std::move(items), table.fingerprint());
}

WordForm parse_word_form(std::string_view name) {
  if (name == "surface") return WordForm::kSurface;
  if (name == "lemma") return WordForm::kLemma;
  throw ConfigError(fmt::format("unknown word form '{}' (expected surface|lemma)", name));
}

RankedDistribution class_sub_ranking(const std::vector<TaggedToken>& tagged, PosTag pos,
                                     WordForm form, Fingerprint fingerprint) {
  FrequencyTable table(fingerprint);
  for (const auto& t : tagged) {
    if (t.pos != pos) continue;
    table.add(form == WordForm::kLemma ? t.lemma : t.surface);
  }
  return rank(table);
}

RankedDistribution extract_sub_ranking(const RankedDistribution& global, const WordSet& words) {
  std::vector<RankEntry> entries;
  for (const auto& e : global.entries()) {
    if (words.contains(e.word)) entries.push_back({entries.size() + 1, e.word, e.frequency});
  }
  return RankedDistribution::from_ranked(std::move(entries), global.fingerprint(),
                                         global.real_valued());
}

FrequencyTable merge_tables(std::span<const FrequencyTable> tables) {
  if (tables.empty()) return {};
  FrequencyTable out(tables.front().fingerprint());
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (tables[i].fingerprint() != out.fingerprint()) {
      throw ConfigError(fmt::format(
          "cannot merge tables built with different preprocessing (fingerprint {} vs {} at index {})",
          out.fingerprint().hex(), tables[i].fingerprint().hex(), i));
    }
    for (const auto& [word, count] : tables[i].counts()) out.add(word, count);
  }
  return out;
}

std::string format_frequency(double f) {
  if (is_integral(f)) return fmt::format("{}", static_cast<std::uint64_t>(f));
  return fmt::format("{}", f);
}

void write_distribution_csv(std::ostream& out, const RankedDistribution& dist) {
  out << "rank,word,frequency\n";
  for (const auto& e : dist.entries()) {
    out << e.rank << ',' << csv_quote(e.word) << ',' << format_frequency(e.frequency) << '\n';
  }
}

RankedDistribution read_distribution_csv(std::istream& in, std::string_view source) {
  std::vector<RankEntry> entries;
  bool header_seen = false;
  std::size_t line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = detail::chomp(raw);
    if (detail::is_blank_or_comment(line)) continue;
    if (!header_seen) {
      if (detail::trim(line) != "rank,word,frequency") {
        throw InputError(fmt::format("{}:{}: expected header 'rank,word,frequency'", source, line_no));
      }
      header_seen = true;
      continue;
    }
    auto fields = csv_fields(line, source, line_no);
    if (fields.size() != 3) {
      throw InputError(fmt::format("{}:{}: expected 3 fields, got {}", source, line_no, fields.size()));
    }
    std::size_t r = 0;
    if (!detail::parse_size(detail::trim(fields[0]), r)) {
      throw InputError(fmt::format("{}:{}: invalid rank '{}'", source, line_no, fields[0]));
    }
    entries.push_back({r, std::move(fields[1]), parse_frequency(fields[2], source, line_no)});
  }
  if (!header_seen) throw EmptyInputError(fmt::format("{}: no distribution data", source));
  return RankedDistribution::from_ranked(std::move(entries));
}

std::string distribution_to_json(const RankedDistribution& dist, int indent) {
  nlohmann::ordered_json j;
  j["format"] = "zipfkit.distribution/1";
  j["total"] = is_integral(dist.total()) ? nlohmann::ordered_json(static_cast<std::uint64_t>(dist.total()))
                                         : nlohmann::ordered_json(dist.total());
  j["vocabulary"] = dist.vocabulary();
  j["fingerprint"] = dist.fingerprint().hex();
  j["real_valued"] = dist.real_valued();
  auto& arr = j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : dist.entries()) {
    nlohmann::ordered_json f = is_integral(e.frequency)
                                   ? nlohmann::ordered_json(static_cast<std::uint64_t>(e.frequency))
                                   : nlohmann::ordered_json(e.frequency);
    arr.push_back({e.rank, e.word, f});
  }
  return j.dump(indent);
}

RankedDistribution distribution_from_json(std::string_view json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
    std::vector<RankEntry> entries;
    for (const auto& e : j.at("entries")) {
      entries.push_back({e.at(0).get<std::uint64_t>(), e.at(1).get<std::string>(),
                         e.at(2).get<double>()});
    }
    return RankedDistribution::from_ranked(std::move(entries),
                                           Fingerprint::from_hex(j.at("fingerprint").get<std::string>()),
                                           j.at("real_valued").get<bool>());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(fmt::format("malformed distribution JSON: {}", e.what()));
  }
}

}  // namespace zipfkit
