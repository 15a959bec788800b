#include "skigp/exper/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace skigp::exper {

namespace {

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' is not numeric: " + value);
  }
  if (pos != value.size()) {
    throw std::invalid_argument("config: key '" + key + "' has trailing junk: " + value);
  }
  return v;
}

}  // namespace

Config Config::load_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("config: cannot open " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  return from_text(buf.str());
}

Config Config::from_text(const std::string& text) {
  Config cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config: empty key at line " + std::to_string(lineno));
    }
    cfg.kv_[key] = value;
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) { kv_[key] = value; }

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : parse_double(key, it->second);
}

int Config::get_int(const std::string& key, int fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  const double v = parse_double(key, it->second);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw std::invalid_argument("config: key '" + key + "' must be an integer");
  }
  return i;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    return std::stoull(it->second);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' is not an unsigned integer");
  }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  if (it->second == "on" || it->second == "true" || it->second == "1") return true;
  if (it->second == "off" || it->second == "false" || it->second == "0") return false;
  throw std::invalid_argument("config: key '" + key + "' must be on/off");
}

std::vector<int> Config::get_int_list(const std::string& key,
                                      const std::vector<int>& fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  std::vector<int> out;
  std::istringstream is(it->second);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    const std::string t = trim(tok);
    if (t.empty()) continue;
    out.push_back(static_cast<int>(parse_double(key, t)));
  }
  if (out.empty()) throw std::invalid_argument("config: key '" + key + "' is an empty list");
  return out;
}

std::vector<std::string> Config::get_string_list(const std::string& key,
                                                 const std::vector<std::string>& fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  std::vector<std::string> out;
  std::istringstream is(it->second);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    const std::string t = trim(tok);
    if (!t.empty()) out.push_back(t);
  }
  if (out.empty()) throw std::invalid_argument("config: key '" + key + "' is an empty list");
  return out;
}

std::vector<std::pair<int, int>> Config::get_ranges(const std::string& key) const {
  auto it = kv_.find(key);
  std::vector<std::pair<int, int>> out;
  if (it == kv_.end()) return out;
  std::istringstream is(it->second);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    const std::string t = trim(tok);
    if (t.empty()) continue;
    const std::size_t colon = t.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("config: key '" + key + "' ranges must be start:end");
    }
    const int a = static_cast<int>(parse_double(key, trim(t.substr(0, colon))));
    const int b = static_cast<int>(parse_double(key, trim(t.substr(colon + 1))));
    if (b <= a) throw std::invalid_argument("config: key '" + key + "' has an empty range");
    out.emplace_back(a, b);
  }
  return out;
}

void Config::validate_keys(std::span<const char* const> allowed) const {
  for (const auto& [key, value] : kv_) {
    const bool known =
        std::any_of(allowed.begin(), allowed.end(), [&key](const char* a) { return key == a; });
    if (!known) throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

std::string Config::canonical_text() const {
  std::string out;
  for (const auto& [key, value] : kv_) {  // std::map iterates sorted
    out += key;
    out += " = ";
    out += value;
    out += "\n";
  }
  return out;
}

std::uint64_t Config::hash() const {
  const std::string text = canonical_text();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace skigp::exper
