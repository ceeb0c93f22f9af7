// cobcalc: command-line front end for the cobcalc checks.
//
// Exit status: 0 all records PASS/SKIP, 1 some record FAIL, 2 usage or parse error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cobcalc/report.hpp"

namespace fs = std::filesystem;
using namespace cobcalc;

namespace {

struct Globals {
  std::string cache_dir;
  bool no_cache = false;
  bool allow_large = false;
  std::string format = "markdown";
  std::string out;
};

RunOptions run_options(const Globals& g) {
  RunOptions o;
  if (!g.no_cache) o.cache_dir = g.cache_dir.empty() ? default_cache_dir() : fs::path(g.cache_dir);
  o.allow_large = g.allow_large;
  o.progress = &std::cerr;
  return o;
}

int emit(const Report& r, const Globals& g) {
  const std::string text = g.format == "json" ? r.to_json_text() : r.to_markdown();
  if (g.out.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    std::ofstream f(g.out, std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) {
      std::cerr << "error: cannot write " << g.out << "\n";
      return 2;
    }
  }
  return r.exit_code();
}

int cache_status(const Globals& g) {
  const fs::path dir = g.cache_dir.empty() ? default_cache_dir() : fs::path(g.cache_dir);
  std::cout << "cache directory: " << dir.string() << "\n";
  std::cout << "format " << kCacheFormatVersion << ", atom-set " << kAtomSetVersion
            << ", code-version " << kToolVersion << "\n";
  for (int i = 1; i <= kDefaultMaxDegree; ++i) {
    const fs::path f = cache_file(dir, i);
    std::string state = "missing";
    if (fs::exists(f)) state = load_chern_matrix(dir, i) ? "valid" : "stale or corrupt";
    std::cout << "  degree " << i << ": " << state << "\n";
  }
  return 0;
}

int cache_clear(const Globals& g) {
  const fs::path dir = g.cache_dir.empty() ? default_cache_dir() : fs::path(g.cache_dir);
  std::error_code ec;
  std::size_t removed = 0;
  if (fs::is_directory(dir, ec)) {
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("chern-matrix-d", 0) == 0 && fs::remove(entry.path(), ec)) ++removed;
    }
  }
  std::cout << "removed " << removed << " file(s) from " << dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Segre/Chern number divisibility checks and codimension-4 integrality replay"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--cache-dir", g.cache_dir, "Chern matrix cache directory")->envname("COBCALC_CACHE");
  app.add_flag("--no-cache", g.no_cache, "Do not read or write the disk cache");
  app.add_flag("--allow-large", g.allow_large, "Allow degrees above 8");
  app.add_option("--format", g.format, "Report format")
      ->check(CLI::IsMember({"markdown", "json"}));
  app.add_option("--out", g.out, "Write the report to this file instead of stdout");

  int segre_max_i = 6, segre_max_h = 3;
  int corr_max_i = 6, corr_max_e = 2, corr_max_h = 2;
  auto* segre = app.add_subcommand("verify-segre", "Segre number divisibility against the binary-digit criterion");
  segre->add_option("--max-i", segre_max_i, "Largest degree")->check(CLI::NonNegativeNumber);
  segre->add_option("--max-h", segre_max_h, "Largest exponent h")->check(CLI::NonNegativeNumber);

  auto* corr = app.add_subcommand("verify-correction", "Existence of integral corrections Q");
  corr->add_option("--max-i", corr_max_i, "Largest degree")->check(CLI::NonNegativeNumber);
  corr->add_option("--max-e", corr_max_e, "Largest exponent e")->check(CLI::NonNegativeNumber);
  corr->add_option("--max-h", corr_max_h, "Largest exponent h")->check(CLI::NonNegativeNumber);

  std::string jcase;
  auto* jac = app.add_subcommand("verify-jacobian", "Todd class, Chern character and residue searches");
  jac->add_option("case", jcase, "n12 or n14")->required();

  std::string manifold, partition;
  auto* cn = app.add_subcommand("chern-numbers", "All Chern numbers of a product of P(k) and H(m,n)");
  cn->add_option("manifold", manifold, "e.g. \"P1 * H(2,3)\"")->required();
  cn->add_option("--partition", partition, "Only this partition, e.g. 2,1");

  int c = 0, n = 0;
  auto* mult = app.add_subcommand("multiplier", "Proven divisibility multiplier for codimension c in dimension n");
  mult->add_option("c", c, "codimension")->required()->check(CLI::NonNegativeNumber);
  mult->add_option("n", n, "dimension")->required()->check(CLI::NonNegativeNumber);

  auto* cache = app.add_subcommand("cache", "Inspect or clear the Chern matrix cache");
  cache->require_subcommand(1);
  auto* cache_st = cache->add_subcommand("status", "Show cache files and their validity");
  auto* cache_cl = cache->add_subcommand("clear", "Delete cached matrices");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (segre->parsed()) return emit(cmd_verify_segre(segre_max_i, segre_max_h, run_options(g)), g);
    if (corr->parsed())
      return emit(cmd_verify_correction(corr_max_i, corr_max_e, corr_max_h, run_options(g)), g);
    if (jac->parsed()) return emit(cmd_verify_jacobian(jcase, run_options(g)), g);
    if (cn->parsed()) {
      std::optional<Partition> p;
      if (!partition.empty()) p = parse_partition(partition);
      return emit(cmd_chern_numbers(manifold, p, run_options(g)), g);
    }
    if (mult->parsed()) return emit(cmd_multiplier(c, n, run_options(g)), g);
    if (cache_st->parsed()) return cache_status(g);
    if (cache_cl->parsed()) return cache_clear(g);
  } catch (const ManifoldParseError& e) {
    std::cerr << "parse error: " << e.caret_message() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
