#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace skigp::exper {

/// Flat key = value configuration. Lines are `key = value`, blank lines and
/// `#` comments are skipped. Keys unknown to the consuming experiment are
/// rejected at validation time.
class Config {
 public:
  Config() = default;
  static Config load_file(const std::string& path);
  static Config from_text(const std::string& text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback) const;
  std::vector<std::string> get_string_list(const std::string& key,
                                           const std::vector<std::string>& fallback) const;
  /// "a:b,c:d" half-open index ranges.
  std::vector<std::pair<int, int>> get_ranges(const std::string& key) const;

  /// Throws listing the offending key when any key is not in `allowed`.
  void validate_keys(std::span<const char* const> allowed) const;

  /// Sorted `key = value` lines; the basis of the config hash.
  std::string canonical_text() const;
  /// FNV-1a over the canonical text.
  std::uint64_t hash() const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace skigp::exper
