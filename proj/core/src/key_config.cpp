#include "securecam/key_config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "securecam/error.hpp"

namespace securecam {
namespace {

[[noreturn]] void bad_line(std::size_t line_no, const std::string& why) {
  throw Error(ErrorCode::BadConfig, "key file line " + std::to_string(line_no) + ": " + why);
}

KeyConfig key_with_validation(std::uint8_t id, Bytes key, CipherMode mode) {
  // Expansion rejects bad lengths; surface that as a config error.
  CipherContext::expand_key(key);
  return KeyConfig{id, std::move(key), mode};
}

}  // namespace

KeyRing::KeyRing(std::vector<KeyConfig> keys) : keys_(std::move(keys)) {}

const KeyConfig* KeyRing::find(std::uint8_t key_id) const {
  for (const auto& k : keys_) {
    if (k.key_id == key_id) return &k;
  }
  return nullptr;
}

const KeyConfig& KeyRing::primary() const {
  if (keys_.empty()) throw Error(ErrorCode::BadConfig, "no keys configured");
  return keys_.front();
}

KeyRing parse_key_file(std::string_view text) {
  std::vector<KeyConfig> keys;
  std::istringstream lines{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::optional<int> id;
    std::optional<CipherMode> mode;
    std::optional<Bytes> key;
    std::istringstream fields(line);
    std::string field;
    while (fields >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) bad_line(line_no, "expected name=value, got '" + field + "'");
      const std::string name = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      if (name == "key_id") {
        int v = -1;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc{} || ptr != value.data() + value.size() || v < 0 || v > 255) {
          bad_line(line_no, "key_id must be 0..255");
        }
        id = v;
      } else if (name == "mode") {
        mode = parse_mode(value);
        if (!mode) bad_line(line_no, "mode must be ecb, cbc or ctr");
      } else if (name == "key") {
        try {
          key = from_hex(value);
        } catch (const Error& e) {
          bad_line(line_no, e.what());
        }
      } else {
        bad_line(line_no, "unknown field '" + name + "'");
      }
    }
    if (!id) bad_line(line_no, "missing key_id");
    if (!key) bad_line(line_no, "missing key");
    for (const auto& k : keys) {
      if (k.key_id == *id) bad_line(line_no, "duplicate key_id " + std::to_string(*id));
    }
    try {
      keys.push_back(key_with_validation(static_cast<std::uint8_t>(*id), std::move(*key),
                                         mode.value_or(CipherMode::CTR)));
    } catch (const Error& e) {
      bad_line(line_no, e.what());
    }
  }
  return KeyRing(std::move(keys));
}

KeyRing load_key_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadConfig, "cannot read key file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_key_file(buf.str());
}

std::optional<KeyConfig> key_from_env() {
  const char* hex = std::getenv(std::string(kKeyEnvVar).c_str());
  if (hex == nullptr || *hex == '\0') return std::nullopt;
  try {
    return key_with_validation(0, from_hex(hex), CipherMode::CTR);
  } catch (const Error& e) {
    throw Error(ErrorCode::BadConfig, std::string(kKeyEnvVar) + ": " + e.what());
  }
}

KeyRing resolve_keys(const std::optional<std::filesystem::path>& key_file) {
  if (key_file) {
    auto ring = load_key_file(*key_file);
    if (ring.empty()) throw Error(ErrorCode::BadConfig, "key file has no keys");
    return ring;
  }
  if (auto env = key_from_env()) return KeyRing({std::move(*env)});
  throw Error(ErrorCode::BadConfig,
              "no key: pass --key-file or set " + std::string(kKeyEnvVar));
}

std::string format_key_line(const KeyConfig& cfg) {
  return "key_id=" + std::to_string(cfg.key_id) + " mode=" + std::string(to_string(cfg.mode)) +
         " key=" + to_hex(cfg.key);
}

}  // namespace securecam
