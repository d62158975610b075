#pragma once

#include <map>
#include <string>
#include <string_view>

namespace leadalloc {

/// Maps alternative spellings onto one canonical neighborhood name.
///
/// Keys and aliases are stored in canonical form. An alias may not also be a
/// canonical key, so resolution never chains and canonicalization stays
/// idempotent.
class AliasTable {
public:
  AliasTable() = default;

  // File format: {"<canonical>": ["alias", ...], ...}
  static AliasTable parse(std::string_view json_text);
  static AliasTable load(const std::string& path);

  [[nodiscard]] std::string_view resolve(std::string_view canonical) const;
  [[nodiscard]] std::size_t size() const noexcept { return alias_to_target_.size(); }
  [[nodiscard]] bool empty() const noexcept { return alias_to_target_.empty(); }

  static const AliasTable& identity();

private:
  std::map<std::string, std::string, std::less<>> alias_to_target_;
};

/// Lowercases, folds punctuation and every Unicode dash/space variant to a
/// single ASCII space, trims, then applies the alias table.
/// Throws Error(InvalidName) if nothing is left.
std::string canonicalize_name(std::string_view raw, const AliasTable& aliases = AliasTable::identity());

/// Normalization only, without alias lookup.
std::string fold_name(std::string_view raw);

/// Trim ASCII and Unicode whitespace from both ends; used for display names.
std::string trim_name(std::string_view raw);

}  // namespace leadalloc
