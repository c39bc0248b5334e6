#include "zipfkit/text_ingest.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>
#include <yaml-cpp/yaml.h>

#include "tsv.hpp"
#include "zipfkit/error.hpp"

namespace zipfkit {
namespace {

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw ConfigError(fmt::format("ICU NFC normalizer unavailable: {}", u_errorName(status)));
  }
  return *n;
}

icu::UnicodeString normalized(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(s, status);
  if (U_FAILURE(status)) {
    throw InputError(fmt::format("normalization failed: {}", u_errorName(status)));
  }
  return out;
}

bool is_letter(UChar32 c) { return (U_GET_GC_MASK(c) & U_GC_L_MASK) != 0; }
bool is_mark(UChar32 c) { return (U_GET_GC_MASK(c) & U_GC_M_MASK) != 0; }
bool is_number(UChar32 c) { return (U_GET_GC_MASK(c) & U_GC_N_MASK) != 0; }
bool is_word_char(UChar32 c) { return is_letter(c) || is_mark(c) || is_number(c); }
bool is_letterish(UChar32 c) { return is_letter(c) || is_mark(c); }

bool is_apostrophe(UChar32 c) { return c == 0x27 || c == 0x2019 || c == 0x02BC; }
bool is_hyphen(UChar32 c) { return c == 0x2D || c == 0x2010 || c == 0x2011; }

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  std::int32_t len = 0;
  U8_APPEND_UNSAFE(buf, len, c);
  out.append(buf, static_cast<std::size_t>(len));
}

std::string encode(const UChar32* begin, const UChar32* end) {
  std::string out;
  out.reserve(static_cast<std::size_t>(end - begin));
  for (const UChar32* p = begin; p != end; ++p) append_utf8(out, *p);
  return out;
}

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

// Folds and recomposes one candidate word given as code points.
std::string finish_word(std::u32string_view cps, const TokenizationRules& rules) {
  bool ascii = true;
  std::string out;
  out.reserve(cps.size());
  for (UChar32 c : cps) {
    if (is_apostrophe(c)) c = U'\'';
    else if (is_hyphen(c)) c = U'-';
    if (c >= 0x80) ascii = false;
    append_utf8(out, c);
  }
  if (ascii) {
    if (rules.case_fold) {
      std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) {
        return static_cast<char>(ch >= 'A' && ch <= 'Z' ? ch + ('a' - 'A') : ch);
      });
    }
    return out;
  }
  if (!rules.case_fold) return out;
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(out);
  u.foldCase(U_FOLD_CASE_DEFAULT);
  if (rules.normalize_nfc) u = normalized(u);
  return to_utf8(u);
}

std::string_view strip_gutenberg(std::string_view body) {
  constexpr std::string_view start_marker = "*** START OF";
  constexpr std::string_view end_marker = "*** END OF";
  std::size_t start = body.find(start_marker);
  if (start == std::string_view::npos) return body;
  std::size_t line_end = body.find('\n', start);
  if (line_end == std::string_view::npos) return {};
  std::size_t content = line_end + 1;
  std::size_t end = body.find(end_marker, content);
  if (end == std::string_view::npos) end = body.size();
  return body.substr(content, end - content);
}

bool parse_bool(const YAML::Node& node, std::string_view key) {
  try {
    return node.as<bool>();
  } catch (const YAML::Exception&) {
    throw ConfigError(fmt::format("tokenization rule '{}' expects true/false", key));
  }
}

}  // namespace

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::kNonWord:
      return "non-word";
    case RejectReason::kDictionaryMiss:
      return "dictionary-miss";
  }
  return "?";
}

std::string TokenizationRules::canonical() const {
  return fmt::format("tokenizer/v1;nfc={};fold={};apos={};hyph={};gutenberg={}",
                     int(normalize_nfc), int(case_fold), int(keep_apostrophes),
                     int(keep_hyphens), int(strip_gutenberg_boilerplate));
}

Fingerprint TokenizationRules::fingerprint() const { return Fingerprint::of(canonical()); }

TokenizationRules parse_tokenization_rules(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("tokenization rules: {}", e.what()));
  }
  TokenizationRules rules;
  if (root.IsNull()) return rules;
  if (!root.IsMap()) throw ConfigError("tokenization rules must be a key-value map");
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    if (key == "normalize") {
      const auto s = v.as<std::string>();
      if (s == "nfc") rules.normalize_nfc = true;
      else if (s == "none") rules.normalize_nfc = false;
      else throw ConfigError(fmt::format("normalize: expected nfc|none, got '{}'", s));
    } else if (key == "case_fold") {
      rules.case_fold = parse_bool(v, key);
    } else if (key == "apostrophes") {
      rules.keep_apostrophes = parse_bool(v, key);
    } else if (key == "hyphens") {
      rules.keep_hyphens = parse_bool(v, key);
    } else if (key == "gutenberg_boilerplate") {
      const auto s = v.as<std::string>();
      if (s == "strip") rules.strip_gutenberg_boilerplate = true;
      else if (s == "keep") rules.strip_gutenberg_boilerplate = false;
      else throw ConfigError(fmt::format("gutenberg_boilerplate: expected strip|keep, got '{}'", s));
    } else {
      throw ConfigError(fmt::format("unknown tokenization rule '{}'", key));
    }
  }
  return rules;
}

TokenizationRules load_tokenization_rules(const std::filesystem::path& path) {
  return parse_tokenization_rules(detail::read_file(path));
}

std::size_t find_invalid_utf8(std::string_view bytes) {
  const auto* s = reinterpret_cast<const std::uint8_t*>(bytes.data());
  const auto length = static_cast<std::int64_t>(bytes.size());
  std::int64_t i = 0;
  while (i < length) {
    if (s[i] < 0x80) {
      ++i;
      continue;
    }
    const std::int64_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) return static_cast<std::size_t>(start);
  }
  return std::string_view::npos;
}

std::string normalize_word(std::string_view word, const TokenizationRules& rules) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(icu::StringPiece(word.data(),
                                                                       static_cast<int32_t>(word.size())));
  if (rules.normalize_nfc) u = normalized(u);
  std::u32string cps(static_cast<std::size_t>(u.countChar32()), U'\0');
  UErrorCode status = U_ZERO_ERROR;
  u.toUTF32(reinterpret_cast<UChar32*>(cps.data()), static_cast<int32_t>(cps.size()), status);
  return finish_word(cps, rules);
}

TokenizeResult tokenize(const RawText& raw, const TokenizationRules& rules) {
  if (std::size_t bad = find_invalid_utf8(raw.body); bad != std::string_view::npos) {
    throw EncodingError(bad, raw.id.empty() ? std::string("<text>") : raw.id);
  }
  std::string_view body = raw.body;
  if (rules.strip_gutenberg_boilerplate) body = strip_gutenberg(body);

  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(body.data(), static_cast<int32_t>(body.size())));
  if (rules.normalize_nfc) u = normalized(u);
  std::vector<UChar32> cps(static_cast<std::size_t>(u.countChar32()));
  UErrorCode status = U_ZERO_ERROR;
  u.toUTF32(cps.data(), static_cast<int32_t>(cps.size()), status);
  if (U_FAILURE(status)) {
    throw InputError(fmt::format("{}: UTF-32 conversion failed", raw.id));
  }

  TokenizeResult result;
  const std::size_t n = cps.size();
  auto is_mark_char = [&](UChar32 c) {
    return (rules.keep_apostrophes && is_apostrophe(c)) || (rules.keep_hyphens && is_hyphen(c));
  };

  std::size_t i = 0;
  while (i < n) {
    if (u_isUWhiteSpace(cps[i])) {
      ++i;
      continue;
    }
    std::size_t chunk_begin = i;
    while (i < n && !u_isUWhiteSpace(cps[i])) ++i;
    const std::size_t chunk_end = i;

    bool any_run = false;
    std::size_t j = chunk_begin;
    while (j < chunk_end) {
      if (!is_word_char(cps[j])) {
        ++j;
        continue;
      }
      any_run = true;
      std::size_t run_begin = j;
      bool has_letter = false;
      bool has_number = false;
      while (j < chunk_end) {
        UChar32 c = cps[j];
        if (is_word_char(c)) {
          has_letter |= is_letter(c);
          has_number |= is_number(c);
          ++j;
        } else if (is_mark_char(c) && j > run_begin && j + 1 < chunk_end &&
                   is_letterish(cps[j - 1]) && is_letterish(cps[j + 1])) {
          ++j;
        } else {
          break;
        }
      }
      if (has_number || !has_letter) {
        result.rejects.push_back({encode(&cps[run_begin], &cps[0] + j), result.tokens.size(),
                                  RejectReason::kNonWord});
      } else {
        result.tokens.push_back(
            {finish_word(std::u32string_view(reinterpret_cast<const char32_t*>(&cps[run_begin]),
                                             j - run_begin),
                         rules),
             result.tokens.size()});
      }
    }
    if (!any_run) {
      result.rejects.push_back({encode(&cps[chunk_begin], &cps[0] + chunk_end),
                                result.tokens.size(), RejectReason::kNonWord});
    }
  }
  return result;
}

Dictionary Dictionary::from_words(const std::vector<std::string>& words,
                                  const TokenizationRules& rules) {
  Dictionary d;
  for (const auto& w : words) {
    std::string_view t = detail::trim(w);
    if (t.empty()) continue;
    if (!d.entries_.insert(normalize_word(t, rules)).second) ++d.duplicates_;
  }
  return d;
}

bool Dictionary::contains(std::string_view word) const {
  return entries_.find(std::string(word)) != entries_.end();
}

Dictionary load_dictionary(const std::filesystem::path& path, const TokenizationRules& rules) {
  const std::string content = detail::read_file(path);
  if (std::size_t bad = find_invalid_utf8(content); bad != std::string_view::npos) {
    throw EncodingError(bad, path.string());
  }
  std::vector<std::string> words;
  std::istringstream in(content);
  for (std::string line; std::getline(in, line);) words.push_back(line);
  return Dictionary::from_words(words, rules);
}

FilterPolicy parse_filter_policy(std::string_view name) {
  if (name == "drop-misses") return FilterPolicy::kDropMisses;
  if (name == "keep-misses") return FilterPolicy::kKeepMisses;
  if (name == "review-only") return FilterPolicy::kReviewOnly;
  throw ConfigError(fmt::format("unknown dictionary policy '{}'", name));
}

std::string_view to_string(FilterPolicy policy) {
  switch (policy) {
    case FilterPolicy::kDropMisses:
      return "drop-misses";
    case FilterPolicy::kKeepMisses:
      return "keep-misses";
    case FilterPolicy::kReviewOnly:
      return "review-only";
  }
  return "?";
}

FilterResult apply_dictionary_filter(const TokenStream& stream, const Dictionary& dict,
                                     FilterPolicy policy) {
  if (policy == FilterPolicy::kDropMisses && dict.empty()) {
    throw ConfigError("empty dictionary with drop-misses would erase the entire text");
  }
  FilterResult result;
  const bool drop = policy == FilterPolicy::kDropMisses;
  result.tokens.reserve(stream.size());
  for (const Token& t : stream) {
    if (dict.contains(t.surface)) {
      result.tokens.push_back(t);
      continue;
    }
    result.misses.push_back({t.surface, t.position, RejectReason::kDictionaryMiss});
    if (!drop) result.tokens.push_back(t);
  }
  return result;
}

void write_rejects_tsv(std::ostream& out, const std::vector<RejectRecord>& rejects) {
  out << "original\tposition\treason\n";
  for (const auto& r : rejects) {
    out << r.original << '\t' << r.position << '\t' << to_string(r.reason) << '\n';
  }
}

RawText read_raw_text(const std::filesystem::path& path, std::string id, std::string language) {
  RawText raw;
  raw.id = id.empty() ? path.string() : std::move(id);
  raw.language = std::move(language);
  raw.body = detail::read_file(path);
  return raw;
}

std::vector<std::string> surfaces(const TokenStream& stream) {
  std::vector<std::string> out;
  out.reserve(stream.size());
  for (const auto& t : stream) out.push_back(t.surface);
  return out;
}

std::string join_surfaces(const TokenStream& stream) {
  std::string out;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (i) out.push_back(' ');
    out += stream[i].surface;
  }
  if (!stream.empty()) out.push_back('\n');
  return out;
}

}  // namespace zipfkit
