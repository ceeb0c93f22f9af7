#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <thread>
#include <functional>

#include <unistd.h>

#include "cobcalc/manifold.hpp"

namespace cobcalc {

inline constexpr const char* kToolVersion = "0.3.0";
/// Bump when the atom family or its canonical order changes.
inline constexpr int kAtomSetVersion = 1;
inline constexpr int kCacheFormatVersion = 1;

/// $COBCALC_CACHE, else $XDG_CACHE_HOME/cobcalc, else ~/.cache/cobcalc.
inline std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("COBCALC_CACHE"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg)
    return std::filesystem::path(xdg) / "cobcalc";
  if (const char* home = std::getenv("HOME"); home && *home)
    return std::filesystem::path(home) / ".cache" / "cobcalc";
  return std::filesystem::temp_directory_path() / "cobcalc";
}

inline std::filesystem::path cache_file(const std::filesystem::path& dir, int degree) {
  return dir / ("chern-matrix-d" + std::to_string(degree) + ".txt");
}

// Format (one file per degree):
//   cobcalc-chern-matrix <format>
//   degree <i>
//   atom-set <version>
//   code-version <tool version>
//   columns <count> <partition> ...
//   rows <count>
//   <manifold> | <entry> <entry> ...
//   end
inline std::string serialize_chern_matrix(const ChernMatrix& m) {
  std::ostringstream out;
  out << "cobcalc-chern-matrix " << kCacheFormatVersion << "\n";
  out << "degree " << m.degree << "\n";
  out << "atom-set " << kAtomSetVersion << "\n";
  out << "code-version " << kToolVersion << "\n";
  out << "columns " << m.columns.size();
  for (const auto& p : m.columns) out << " " << p.to_string();
  out << "\nrows " << m.rows.size() << "\n";
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    out << m.rows[r].to_string() << " |";
    for (const auto& e : m.entries[r]) out << " " << e.str();
    out << "\n";
  }
  out << "end\n";
  return out.str();
}

/// Parses and validates a cache file body against the expected degree; any
/// deviation (version, row set, column set, entry count) yields nullopt.
inline std::optional<ChernMatrix> parse_chern_matrix(const std::string& text, int degree) {
  std::istringstream in(text);
  std::string line;
  auto expect_kv = [&](const std::string& key, const std::string& value) {
    if (!std::getline(in, line)) return false;
    return line == key + " " + value;
  };
  if (!expect_kv("cobcalc-chern-matrix", std::to_string(kCacheFormatVersion))) return std::nullopt;
  if (!expect_kv("degree", std::to_string(degree))) return std::nullopt;
  if (!expect_kv("atom-set", std::to_string(kAtomSetVersion))) return std::nullopt;
  if (!expect_kv("code-version", kToolVersion)) return std::nullopt;

  ChernMatrix m;
  m.degree = degree;
  m.columns = partitions(degree);
  m.rows = spanning_set(degree);

  std::string expected_columns = "columns " + std::to_string(m.columns.size());
  for (const auto& p : m.columns) expected_columns += " " + p.to_string();
  if (!std::getline(in, line) || line != expected_columns) return std::nullopt;
  if (!expect_kv("rows", std::to_string(m.rows.size()))) return std::nullopt;

  for (const auto& row : m.rows) {
    if (!std::getline(in, line)) return std::nullopt;
    auto bar = line.find(" |");
    if (bar == std::string::npos || line.substr(0, bar) != row.to_string()) return std::nullopt;
    std::istringstream nums(line.substr(bar + 2));
    std::vector<Integer> entries;
    std::string tok;
    while (nums >> tok) {
      try {
        entries.emplace_back(tok);
      } catch (const std::exception&) {
        return std::nullopt;
      }
    }
    if (entries.size() != m.columns.size()) return std::nullopt;
    m.entries.push_back(std::move(entries));
  }
  if (!std::getline(in, line) || line != "end") return std::nullopt;
  if (std::getline(in, line) && !line.empty()) return std::nullopt;
  return m;
}

inline std::optional<ChernMatrix> load_chern_matrix(const std::filesystem::path& dir, int degree) {
  std::ifstream f(cache_file(dir, degree), std::ios::binary);
  if (!f) return std::nullopt;
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_chern_matrix(buf.str(), degree);
}

/// Writes via a temporary file and an atomic rename. Returns false on IO failure.
inline bool store_chern_matrix(const std::filesystem::path& dir, const ChernMatrix& m) {
  static std::atomic<unsigned> counter{0};
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return false;
  auto target = cache_file(dir, m.degree);
  auto tmp = target;
  tmp += ".tmp." + std::to_string(::getpid()) + "." +
         std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) + "." +
         std::to_string(counter.fetch_add(1));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) return false;
    f << serialize_chern_matrix(m);
    f.flush();
    if (!f) {
      f.close();
      std::filesystem::remove(tmp, ec);
      return false;
    }
  }
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    return false;
  }
  return true;
}

enum class CacheOutcome { Disabled, Hit, Recomputed, WriteFailed };

inline const char* to_string(CacheOutcome c) {
  switch (c) {
    case CacheOutcome::Disabled: return "disabled";
    case CacheOutcome::Hit: return "hit";
    case CacheOutcome::Recomputed: return "recomputed";
    case CacheOutcome::WriteFailed: return "write-failed";
  }
  return "?";
}

}  // namespace cobcalc
