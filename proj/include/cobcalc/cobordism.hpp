#pragma once

#include <filesystem>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cobcalc/arith.hpp"
#include "cobcalc/char_calculus.hpp"
#include "cobcalc/manifold.hpp"
#include "cobcalc/matrix_cache.hpp"
#include "cobcalc/normal_form.hpp"

namespace cobcalc {

namespace detail {
inline std::optional<ChernMatrix> memory_matrix(int i, const ChernMatrix* insert = nullptr,
                                                bool clear = false) {
  static std::mutex mu;
  static std::map<int, ChernMatrix> cache;
  std::lock_guard lock(mu);
  if (clear) {
    cache.clear();
    return std::nullopt;
  }
  if (insert) cache.emplace(i, *insert);
  auto it = cache.find(i);
  if (it == cache.end()) return std::nullopt;
  return it->second;
}
}  // namespace detail

/// Drops in-process Chern rows and matrices; the next lookup goes to disk or recomputes.
inline void clear_memory_caches() {
  detail::memory_matrix(0, nullptr, true);
  detail::ChernRowCache::instance().clear();
}

/// Chern matrix of degree i. With a cache directory, a valid file is reused and
/// a missing or corrupt one is silently regenerated.
inline ChernMatrix chern_matrix(int i, const std::optional<std::filesystem::path>& cache_dir = {},
                                CacheOutcome* outcome = nullptr) {
  if (i < 1) throw std::invalid_argument("chern_matrix: degree must be >= 1");
  auto report = [&](CacheOutcome o) {
    if (outcome) *outcome = o;
  };
  if (cache_dir) {
    if (auto loaded = load_chern_matrix(*cache_dir, i)) {
      detail::memory_matrix(i, &*loaded);
      report(CacheOutcome::Hit);
      return *loaded;
    }
  }
  ChernMatrix m;
  if (auto mem = detail::memory_matrix(i)) {
    m = std::move(*mem);
  } else {
    m = compute_chern_matrix(i);
    detail::memory_matrix(i, &m);
  }
  if (cache_dir)
    report(store_chern_matrix(*cache_dir, m) ? CacheOutcome::Recomputed : CacheOutcome::WriteFailed);
  else
    report(CacheOutcome::Disabled);
  return m;
}

inline IntMatrix to_int_matrix(const ChernMatrix& m) { return IntMatrix::from_rows(m.entries); }

struct ValuationWitness {
  int valuation = 0;
  ManifoldExpr manifold;
  Integer segre_value;
};

namespace detail {
inline std::optional<ValuationWitness> min_valuation_over(const ChernMatrix& m, bool decomposable_only) {
  const auto s = segre_vector(m.degree);
  std::optional<ValuationWitness> best;
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    if (decomposable_only && m.rows[r].factors().size() < 2) continue;
    Integer value = dot(m.entries[r], s);
    if (value == 0) continue;
    int v = v2(value);
    if (!best || v < best->valuation) best = ValuationWitness{v, m.rows[r], value};
  }
  return best;
}
}  // namespace detail

/// min over spanning_set(i) of v2(s_i[M]), with a manifold attaining it.
inline ValuationWitness min_segre_valuation(int i,
                                            const std::optional<std::filesystem::path>& cache_dir = {}) {
  auto w = detail::min_valuation_over(chern_matrix(i, cache_dir), false);
  if (!w) throw std::logic_error("min_segre_valuation: s_i vanishes on the whole spanning set");
  return *w;
}

/// Same minimum restricted to products with at least two factors of positive dimension.
inline ValuationWitness decomposable_min_valuation(
    int i, const std::optional<std::filesystem::path>& cache_dir = {}) {
  if (i < 2) throw std::invalid_argument("decomposable_min_valuation: degree must be >= 2");
  auto w = detail::min_valuation_over(chern_matrix(i, cache_dir), true);
  if (!w) throw std::logic_error("decomposable_min_valuation: no nonzero decomposable value");
  return *w;
}

/// Criterion for 2^h | s_i on the whole cobordism group of degree i.
inline bool segre_divisibility_formula(int i, int h) { return alpha(static_cast<std::uint64_t>(i + h - 1)) > 2 * h - 2; }

/// Criterion for existence of Q with s_i + 2^h Q divisible by 2^{e+h}.
inline bool correction_formula(int i, int e, int h) {
  return alpha(static_cast<std::uint64_t>(i + e + h - 1)) > e + 2 * h - 2;
}

struct Verdict {
  std::string query;
  bool formula_result = false;
  bool bruteforce_result = false;
  std::optional<ManifoldExpr> manifold;
  std::optional<ChernPolynomial> correction;

  bool agrees() const { return formula_result == bruteforce_result; }

  std::string witness_text() const {
    if (correction) return "Q = " + correction->to_string();
    if (manifold) return manifold->to_string();
    return "";
  }
};

/// Decides whether some integral Q of degree i makes s_i + 2^h Q divisible by
/// 2^{e+h} on every spanning manifold, by solving
///   2^h B q + 2^{e+h} t = -B s
/// over the integers with a Smith normal form, where B is a basis of the row
/// lattice of the Chern matrix and s the expansion of s_i.
inline Verdict exists_correction(int i, int e, int h,
                                 const std::optional<std::filesystem::path>& cache_dir = {}) {
  if (i < 1 || e < 0 || h < 1) throw std::invalid_argument("exists_correction: need i>=1, e>=0, h>=1");
  Verdict v;
  v.query = "i=" + std::to_string(i) + " e=" + std::to_string(e) + " h=" + std::to_string(h);
  v.formula_result = correction_formula(i, e, h);

  const ChernMatrix cm = chern_matrix(i, cache_dir);
  const std::vector<Integer> s = segre_vector(i);
  const IntMatrix basis = row_lattice_basis(to_int_matrix(cm));
  const std::size_t r = basis.rows(), p = basis.cols();
  const Integer lo = pow2(static_cast<unsigned>(h));
  const Integer hi = pow2(static_cast<unsigned>(e + h));

  IntMatrix system(r, p + r);
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = 0; b < p; ++b) system(a, b) = lo * basis(a, b);
    system(a, p + a) = hi;
  }
  std::vector<Integer> rhs = basis * s;
  for (auto& x : rhs) x = -x;

  auto z = solve_integer_system(system, rhs);
  v.bruteforce_result = z.has_value();
  if (z) {
    // only q mod 2^e matters; report the least nonnegative representative
    const Integer qmod = pow2(static_cast<unsigned>(e));
    std::vector<Integer> q(p);
    ChernPolynomial poly;
    poly.degree = i;
    for (std::size_t b = 0; b < p; ++b) {
      q[b] = mod_floor((*z)[b], qmod);
      if (q[b] != 0) poly.expansion.emplace(cm.columns[b], Rational(q[b]));
    }
    for (const auto& row : cm.entries) {
      if (mod_floor(dot(row, s) + lo * dot(row, q), hi) != 0)
        throw std::logic_error("exists_correction: solver returned an invalid correction");
    }
    v.correction = std::move(poly);
  } else if (auto w = detail::min_valuation_over(cm, false); w && w->valuation < h) {
    v.manifold = w->manifold;
  }
  return v;
}

/// Independent route: exhaustive search over Q with coefficients in [0, 2^e).
/// Feasible only for small degrees.
inline bool exists_correction_exhaustive(int i, int e, int h) {
  const ChernMatrix cm = chern_matrix(i);
  const std::vector<Integer> s = segre_vector(i);
  const std::size_t p = cm.columns.size();
  const Integer lo = pow2(static_cast<unsigned>(h));
  const Integer hi = pow2(static_cast<unsigned>(e + h));
  const unsigned base = 1u << e;
  std::vector<Integer> q(p, 0);
  std::vector<Integer> row_s;
  for (const auto& row : cm.entries) row_s.push_back(dot(row, s));
  for (;;) {
    bool ok = true;
    for (std::size_t k = 0; k < cm.entries.size() && ok; ++k)
      ok = mod_floor(row_s[k] + lo * dot(cm.entries[k], q), hi) == 0;
    if (ok) return true;
    std::size_t b = 0;
    while (b < p && q[b] == base - 1) q[b++] = 0;
    if (b == p) return false;
    q[b] += 1;
  }
}

}  // namespace cobcalc
