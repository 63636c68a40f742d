#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "vista/error.hpp"
#include "vista/util/io.hpp"

namespace vista::cli {

/// Defaults read from a vista.toml-style file: `key = value` lines, `#`
/// comments, optional double quotes around strings. Section headers are not
/// supported.
struct Config {
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> policy;
  std::optional<std::filesystem::path> thresholds;
  std::optional<std::size_t> jobs;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::optional<std::uint64_t> parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace detail

inline Config parse_config(std::string_view text, const std::filesystem::path& base_dir = {}) {
  Config c;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw FormatError(line_no, "expected key = value");
    const std::string key(detail::trim(line.substr(0, eq)));
    std::string_view value = detail::trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);

    if (key == "dt") {
      auto v = util::parse_double(value);
      if (!v || !(*v > 0.0)) throw FormatError(line_no, "dt must be a positive number");
      c.dt = *v;
    } else if (key == "seed") {
      auto v = detail::parse_u64(value);
      if (!v) throw FormatError(line_no, "seed must be a non-negative integer");
      c.seed = *v;
    } else if (key == "policy") {
      c.policy = std::string(value);
    } else if (key == "thresholds") {
      std::filesystem::path p{std::string(value)};
      c.thresholds = p.is_relative() ? base_dir / p : p;
    } else if (key == "jobs") {
      auto v = detail::parse_u64(value);
      if (!v || *v == 0) throw FormatError(line_no, "jobs must be a positive integer");
      c.jobs = static_cast<std::size_t>(*v);
    } else {
      throw FormatError(line_no, "unknown key '" + key + "'");
    }
  }
  return c;
}

inline Config load_config(const std::filesystem::path& file) {
  return parse_config(util::read_file(file), file.parent_path());
}

}  // namespace vista::cli
