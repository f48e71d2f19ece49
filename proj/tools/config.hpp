#pragma once

#include <json.hpp>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace lcs::cli {

using nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& file, int line, const std::string& msg)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + msg), line(line) {}
  int line;
};

struct Config {
  std::string path;
  std::string subcommand;
  json resolved;
  std::string hash;  // FNV-1a 64 of the resolved dump without output and threads, hex
  int line_of(const std::string& pointer) const;
  std::map<std::string, int> lines;
  [[noreturn]] void fail(const std::string& pointer, const std::string& msg) const;
};

// JSON pointer ("/a/0/b") -> 1-based line where that key or element starts.
std::map<std::string, int> key_lines(const std::string& text);

std::uint64_t fnv1a(const std::string& s);
std::string hex64(std::uint64_t v);

json schema_for(const std::string& subcommand);
// Parses, validates against the schema, fills defaults, applies overrides (already-typed values
// at top-level pointers) and hashes the result.
Config load_config(const std::string& path, const std::string& subcommand, const json& overrides);

}  // namespace lcs::cli
