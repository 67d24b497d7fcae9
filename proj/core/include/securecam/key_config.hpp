#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "securecam/secure_stream.hpp"

namespace securecam {

inline constexpr std::string_view kKeyEnvVar = "SECURECAM_KEY";

/// Pre-shared keys indexed by key_id.
///
/// File format, one key per line:
///
///     key_id=<0..255> mode=<ecb|cbc|ctr> key=<hex>
///
/// Blank lines and lines starting with '#' are ignored. Fields may appear in
/// any order; mode defaults to ctr. The first key is the sending key.
class KeyRing {
 public:
  KeyRing() = default;
  explicit KeyRing(std::vector<KeyConfig> keys);

  const KeyConfig* find(std::uint8_t key_id) const;
  /// Throws Error(BadConfig) when empty.
  const KeyConfig& primary() const;
  bool empty() const noexcept { return keys_.empty(); }
  const std::vector<KeyConfig>& keys() const noexcept { return keys_; }

 private:
  std::vector<KeyConfig> keys_;
};

/// Throws Error(BadConfig) with the line number on malformed input,
/// duplicate key ids or bad key lengths.
KeyRing parse_key_file(std::string_view text);
KeyRing load_key_file(const std::filesystem::path& path);

/// Reads SECURECAM_KEY (hex) as key_id 0, mode ctr.
std::optional<KeyConfig> key_from_env();

/// Key file if given, otherwise SECURECAM_KEY. Throws Error(BadConfig)
/// if neither yields a key.
KeyRing resolve_keys(const std::optional<std::filesystem::path>& key_file);

std::string format_key_line(const KeyConfig& cfg);

}  // namespace securecam
