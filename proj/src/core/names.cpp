#include "leadalloc/names.hpp"

#include <cstdint>
#include <optional>
#include <set>

#include "json.hpp"
#include "leadalloc/error.hpp"
#include "leadalloc/ingest.hpp"

namespace leadalloc {

namespace {

// Decodes one UTF-8 code point starting at s[i]; advances i. nullopt on
// malformed input.
std::optional<char32_t> decode(std::string_view s, std::size_t& i) {
  const auto lead = static_cast<unsigned char>(s[i]);
  if (lead < 0x80) {
    ++i;
    return lead;
  }
  std::size_t len = 0;
  char32_t cp = 0;
  if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
  } else {
    return std::nullopt;
  }
  if (i + len > s.size()) return std::nullopt;
  for (std::size_t k = 1; k < len; ++k) {
    const auto c = static_cast<unsigned char>(s[i + k]);
    if ((c & 0xC0) != 0x80) return std::nullopt;
    cp = (cp << 6) | (c & 0x3F);
  }
  // overlong encodings and surrogates
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
      (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF)
    return std::nullopt;
  i += len;
  return cp;
}

// Non-ASCII code points that separate words: dashes, spaces, quotes, bullets.
bool is_separator(char32_t cp) {
  if (cp >= 0x2010 && cp <= 0x2015) return true;  // hyphen .. horizontal bar
  if (cp >= 0x2018 && cp <= 0x201F) return true;  // curly quotes
  if (cp >= 0x2000 && cp <= 0x200B) return true;  // typographic spaces
  switch (cp) {
    case 0x00A0: case 0x00AD: case 0x00B7: case 0x2022: case 0x2026: case 0x202F:
    case 0x205F: case 0x2212: case 0x3000: case 0xFE58: case 0xFE63: case 0xFEFF:
    case 0xFF0D:
      return true;
    default:
      return false;
  }
}

bool ascii_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

std::string fold_name(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  auto emit_space = [&] { pending_space = !out.empty(); };

  std::size_t i = 0;
  while (i < raw.size()) {
    const std::size_t start = i;
    const auto cp = decode(raw, i);
    if (!cp) throw Error(ErrorCode::InvalidName, "neighborhood name is not valid UTF-8");
    if (*cp < 0x80) {
      const auto c = static_cast<unsigned char>(*cp);
      if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z')) {
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
      } else {
        emit_space();  // punctuation, whitespace, control
      }
      continue;
    }
    if (is_separator(*cp)) {
      emit_space();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.append(raw.substr(start, i - start));
  }
  return out;
}

std::string trim_name(std::string_view raw) {
  std::size_t b = 0;
  std::size_t e = raw.size();
  while (b < e && ascii_space(static_cast<unsigned char>(raw[b]))) ++b;
  while (e > b && ascii_space(static_cast<unsigned char>(raw[e - 1]))) --e;
  return std::string(raw.substr(b, e - b));
}

std::string canonicalize_name(std::string_view raw, const AliasTable& aliases) {
  std::string folded = fold_name(raw);
  if (folded.empty())
    throw Error(ErrorCode::InvalidName,
                "neighborhood name is empty after normalization: \"" + std::string(raw) + "\"");
  return std::string(aliases.resolve(folded));
}

const AliasTable& AliasTable::identity() {
  static const AliasTable empty;
  return empty;
}

std::string_view AliasTable::resolve(std::string_view canonical) const {
  if (auto it = alias_to_target_.find(canonical); it != alias_to_target_.end()) return it->second;
  return canonical;
}

AliasTable AliasTable::parse(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Validation, std::string("alias file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::Validation, "alias file must be a JSON object");

  ValidationReport report;
  AliasTable table;
  std::set<std::string> targets;
  for (const auto& [key, _] : doc.items()) {
    try {
      targets.insert(canonicalize_name(key));
    } catch (const Error& e) {
      report.error(e.what(), std::nullopt, key);
    }
  }
  for (const auto& [key, list] : doc.items()) {
    if (!list.is_array()) {
      report.error("aliases must be an array of strings", std::nullopt, key);
      continue;
    }
    std::string target;
    try {
      target = canonicalize_name(key);
    } catch (const Error&) {
      continue;
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string where = key + "[" + std::to_string(i) + "]";
      if (!list[i].is_string()) {
        report.error("alias must be a string", std::nullopt, where);
        continue;
      }
      std::string alias;
      try {
        alias = canonicalize_name(list[i].get<std::string>());
      } catch (const Error& e) {
        report.error(e.what(), std::nullopt, where);
        continue;
      }
      if (alias == target) continue;
      if (targets.contains(alias)) {
        report.error("alias \"" + alias + "\" is also a canonical name", std::nullopt, where);
        continue;
      }
      auto [it, inserted] = table.alias_to_target_.emplace(alias, target);
      if (!inserted && it->second != target)
        report.error("alias \"" + alias + "\" maps to both \"" + it->second + "\" and \"" + target +
                         "\"",
                     std::nullopt, where);
    }
  }
  if (!report.accepted()) throw Error(ErrorCode::Validation, "invalid alias table", report);
  return table;
}

AliasTable AliasTable::load(const std::string& path) { return parse(read_file(path)); }

}  // namespace leadalloc
