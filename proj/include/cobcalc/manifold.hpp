#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cobcalc/arith.hpp"
#include "cobcalc/char_calculus.hpp"
#include "cobcalc/graded_series.hpp"

namespace cobcalc {

/// Projective space P(k), or the Milnor hypersurface H(m,n) of bidegree (1,1)
/// in P(m) x P(n).
struct Atom {
  enum class Kind { Projective = 0, Milnor = 1 };
  Kind kind = Kind::Projective;
  int m = 1;
  int n = 0;  // unused for Projective

  static Atom projective(int k) {
    if (k < 1) throw std::invalid_argument("P(k) requires k >= 1");
    return {Kind::Projective, k, 0};
  }
  static Atom milnor(int m, int n) {
    if (m < 1 || m > n) throw std::invalid_argument("H(m,n) requires 1 <= m <= n");
    return {Kind::Milnor, m, n};
  }

  int dimension() const { return kind == Kind::Projective ? m : m + n - 1; }

  std::string to_string() const {
    if (kind == Kind::Projective) return "P" + std::to_string(m);
    return "H(" + std::to_string(m) + "," + std::to_string(n) + ")";
  }

  friend bool operator==(const Atom&, const Atom&) = default;
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
    if (auto c = a.dimension() <=> b.dimension(); c != 0) return c;
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    return a.m <=> b.m;
  }
};

/// Formal product of atoms, kept sorted so equal products compare equal.
class ManifoldExpr {
 public:
  ManifoldExpr() = default;
  explicit ManifoldExpr(std::vector<Atom> factors) : factors_(std::move(factors)) {
    std::sort(factors_.begin(), factors_.end());
  }

  const std::vector<Atom>& factors() const { return factors_; }

  int dimension() const {
    int d = 0;
    for (const auto& a : factors_) d += a.dimension();
    return d;
  }

  std::size_t milnor_factor_count() const {
    return static_cast<std::size_t>(std::count_if(
        factors_.begin(), factors_.end(), [](const Atom& a) { return a.kind == Atom::Kind::Milnor; }));
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t k = 0; k < factors_.size(); ++k) {
      if (k) s += " * ";
      s += factors_[k].to_string();
    }
    return s;
  }

  friend ManifoldExpr operator*(const ManifoldExpr& a, const ManifoldExpr& b) {
    std::vector<Atom> f = a.factors_;
    f.insert(f.end(), b.factors_.begin(), b.factors_.end());
    return ManifoldExpr(std::move(f));
  }

  friend bool operator==(const ManifoldExpr&, const ManifoldExpr&) = default;
  friend auto operator<=>(const ManifoldExpr& a, const ManifoldExpr& b) {
    return a.factors_ <=> b.factors_;
  }

 private:
  std::vector<Atom> factors_;
};

/// Malformed manifold text; `position` is the 0-based offset of the problem.
class ManifoldParseError : public std::invalid_argument {
 public:
  ManifoldParseError(std::string text, std::size_t position, const std::string& msg)
      : std::invalid_argument(msg), text_(std::move(text)), position_(position) {}

  std::size_t position() const { return position_; }

  /// Two-line rendering: the input and a caret under the offending column.
  std::string caret_message() const {
    return std::string(what()) + "\n  " + text_ + "\n  " + std::string(position_, ' ') + "^";
  }

 private:
  std::string text_;
  std::size_t position_;
};

namespace detail {

class ManifoldParser {
 public:
  explicit ManifoldParser(std::string_view text) : text_(text) {}

  ManifoldExpr parse() {
    std::vector<Atom> atoms;
    skip_ws();
    atoms.push_back(atom());
    for (;;) {
      skip_ws();
      if (pos_ == text_.size()) break;
      if (text_[pos_] != '*') fail("expected ' * ' between factors");
      ++pos_;
      skip_ws();
      atoms.push_back(atom());
    }
    return ManifoldExpr(std::move(atoms));
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const {
    throw ManifoldParseError(std::string(text_), at,
                             "manifold syntax error at column " + std::to_string(at + 1) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  int number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    if (pos_ - start > 4) fail_at(start, "number too large");
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }

  Atom atom() {
    if (pos_ >= text_.size()) fail("expected 'P' or 'H('");
    std::size_t start = pos_;
    if (text_[pos_] == 'P') {
      ++pos_;
      std::size_t at = pos_;
      int k = number();
      if (k < 1) fail_at(at, "P" + std::to_string(k) + " is not allowed; need P(k) with k >= 1");
      return Atom::projective(k);
    }
    if (text_[pos_] == 'H') {
      ++pos_;
      expect('(');
      std::size_t at_m = pos_;
      int m = number();
      expect(',');
      int n = number();
      expect(')');
      if (m < 1) fail_at(at_m, "H(m,n) requires m >= 1");
      if (m > n) fail_at(start, "H(m,n) requires m <= n");
      return Atom::milnor(m, n);
    }
    fail("expected 'P' or 'H('");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Grammar: expr := atom (" * " atom)* ; atom := "P" digits | "H(" digits "," digits ")".
inline ManifoldExpr parse_manifold(std::string_view text) {
  return detail::ManifoldParser(text).parse();
}

/// Cohomology model of a product of atoms: one hyperplane class h per P(k) factor,
/// a pair x, y per H(m,n) factor (classes of the ambient P(m) x P(n)).
struct ManifoldRing {
  TablePtr table;
  int dimension = 0;
  int ambient_dimension = 0;
  std::vector<std::pair<std::size_t, std::size_t>> milnor_vars;  // (x, y) indices
};

inline ManifoldRing manifold_ring(const ManifoldExpr& mfd) {
  ManifoldRing ring;
  std::vector<Variable> vars;
  const auto& fs = mfd.factors();
  const bool single = fs.size() == 1;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    std::string suffix = single ? "" : std::to_string(i + 1);
    const Atom& a = fs[i];
    if (a.kind == Atom::Kind::Projective) {
      vars.push_back({"h" + suffix, 1, a.m + 1});
    } else {
      ring.milnor_vars.emplace_back(vars.size(), vars.size() + 1);
      vars.push_back({"x" + suffix, 1, a.m + 1});
      vars.push_back({"y" + suffix, 1, a.n + 1});
    }
  }
  ring.table = make_table(std::move(vars));
  ring.dimension = mfd.dimension();
  ring.ambient_dimension = ring.dimension + static_cast<int>(ring.milnor_vars.size());
  return ring;
}

namespace detail {
inline RationalSeries one_plus(const RationalSeries& x) {
  return RationalSeries::constant(x.table(), x.truncation(), Rational(1)) + x;
}
}  // namespace detail

/// Total Chern class via Whitney sum: c(P(k)) = (1+h)^{k+1},
/// c(H(m,n)) = (1+x)^{m+1} (1+y)^{n+1} / (1+x+y).
inline RationalSeries chern_total(const ManifoldExpr& mfd, const ManifoldRing& ring) {
  const int d = ring.dimension;
  const auto& t = ring.table;
  auto c = RationalSeries::constant(t, d, Rational(1));
  std::size_t var = 0;
  for (const Atom& a : mfd.factors()) {
    if (a.kind == Atom::Kind::Projective) {
      auto h = RationalSeries::variable(t, d, (*t)[var].name);
      c *= detail::one_plus(h).pow(static_cast<unsigned>(a.m + 1));
      var += 1;
    } else {
      auto x = RationalSeries::variable(t, d, (*t)[var].name);
      auto y = RationalSeries::variable(t, d, (*t)[var + 1].name);
      c *= detail::one_plus(x).pow(static_cast<unsigned>(a.m + 1));
      c *= detail::one_plus(y).pow(static_cast<unsigned>(a.n + 1));
      c *= invert_unit(detail::one_plus(x + y));
      var += 2;
    }
  }
  return c;
}

inline RationalSeries chern_total(const ManifoldExpr& mfd) {
  return chern_total(mfd, manifold_ring(mfd));
}

/// Pairs a top-degree class of M with the fundamental class: multiply by the
/// hypersurface class x+y of every H factor and read the top ambient coefficient.
inline Integer integrate(const RationalSeries& top_class, const ManifoldRing& ring) {
  const int amb = ring.ambient_dimension;
  const auto& t = ring.table;
  RationalSeries lifted = top_class.homogeneous(ring.dimension).with_truncation(amb);
  for (const auto& [xi, yi] : ring.milnor_vars) {
    lifted *= RationalSeries::variable(t, amb, (*t)[xi].name) +
              RationalSeries::variable(t, amb, (*t)[yi].name);
  }
  Exponents top(t->size());
  for (std::size_t i = 0; i < t->size(); ++i)
    top[i] = static_cast<std::uint8_t>(*(*t)[i].nilpotency - 1);
  Rational v = lifted.coefficient_of(top);
  if (denominator(v) != 1) throw std::logic_error("integrate: non-integral Chern number");
  return numerator(v);
}

/// c_lambda[M] computed entirely inside the cohomology ring of the product.
inline Integer chern_number_direct(const ManifoldExpr& mfd, const Partition& lambda) {
  if (lambda.weight() != mfd.dimension())
    throw std::invalid_argument("chern_number: partition weight " + std::to_string(lambda.weight()) +
                                " != dimension " + std::to_string(mfd.dimension()));
  ManifoldRing ring = manifold_ring(mfd);
  RationalSeries total = chern_total(mfd, ring);
  auto mono = RationalSeries::constant(ring.table, ring.dimension, Rational(1));
  for (int j : lambda.parts()) mono *= total.homogeneous(j);
  return integrate(mono, ring);
}

namespace detail {

inline const std::map<Partition, std::size_t>& partition_index(int n) {
  static std::mutex mu;
  static std::map<int, std::map<Partition, std::size_t>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::map<Partition, std::size_t> idx;
    auto ps = partitions(n);
    for (std::size_t k = 0; k < ps.size(); ++k) idx.emplace(ps[k], k);
    it = cache.emplace(n, std::move(idx)).first;
  }
  return it->second;
}

// c_lambda of a Whitney sum: c_k(E+F) = sum_{a+b=k} c_a(E) c_b(F); pairing with
// [A x B] keeps the part of degree dim A on the first factor.
inline std::vector<Integer> whitney_product_row(const std::vector<Integer>& row_a, int dim_a,
                                                const std::vector<Integer>& row_b, int dim_b) {
  const auto ps = partitions(dim_a + dim_b);
  const auto& idx_a = partition_index(dim_a);
  const auto& idx_b = partition_index(dim_b);
  std::vector<Integer> out(ps.size());
  for (std::size_t col = 0; col < ps.size(); ++col) {
    const auto& parts = ps[col].parts();
    std::vector<int> pick(parts.size(), 0);
    Integer sum = 0;
    auto recurse = [&](auto&& self, std::size_t j, int left) -> void {
      if (j == parts.size()) {
        if (left != 0) return;
        std::vector<int> mu, nu;
        for (std::size_t k = 0; k < parts.size(); ++k) {
          if (pick[k] > 0) mu.push_back(pick[k]);
          if (parts[k] - pick[k] > 0) nu.push_back(parts[k] - pick[k]);
        }
        std::sort(mu.rbegin(), mu.rend());
        std::sort(nu.rbegin(), nu.rend());
        sum += row_a[idx_a.at(Partition(mu))] * row_b[idx_b.at(Partition(nu))];
        return;
      }
      for (int a = 0; a <= std::min(parts[j], left); ++a) {
        pick[j] = a;
        self(self, j + 1, left - a);
      }
    };
    recurse(recurse, 0, dim_a);
    out[col] = sum;
  }
  return out;
}

class ChernRowCache {
 public:
  static ChernRowCache& instance() {
    static ChernRowCache c;
    return c;
  }
  std::optional<std::vector<Integer>> find(const ManifoldExpr& m) {
    std::lock_guard lock(mu_);
    auto it = rows_.find(m);
    if (it == rows_.end()) return std::nullopt;
    return it->second;
  }
  void insert(const ManifoldExpr& m, const std::vector<Integer>& row) {
    std::lock_guard lock(mu_);
    rows_.emplace(m, row);
  }
  void clear() {
    std::lock_guard lock(mu_);
    rows_.clear();
  }

 private:
  std::mutex mu_;
  std::map<ManifoldExpr, std::vector<Integer>> rows_;
};

}  // namespace detail

/// All Chern numbers of M, indexed like partitions(dim M). Single atoms are
/// integrated directly; products are assembled from their factors.
inline std::vector<Integer> chern_row(const ManifoldExpr& mfd) {
  if (auto hit = detail::ChernRowCache::instance().find(mfd)) return *hit;
  std::vector<Integer> row;
  const auto& fs = mfd.factors();
  if (fs.size() <= 1) {
    for (const auto& p : partitions(mfd.dimension()))
      row.push_back(fs.empty() ? Integer(1) : chern_number_direct(mfd, p));
  } else {
    ManifoldExpr head({fs.front()});
    ManifoldExpr tail(std::vector<Atom>(fs.begin() + 1, fs.end()));
    row = detail::whitney_product_row(chern_row(head), head.dimension(), chern_row(tail),
                                      tail.dimension());
  }
  detail::ChernRowCache::instance().insert(mfd, row);
  return row;
}

inline Integer chern_number(const ManifoldExpr& mfd, const Partition& lambda) {
  if (lambda.weight() != mfd.dimension())
    throw std::invalid_argument("chern_number: partition weight " + std::to_string(lambda.weight()) +
                                " != dimension " + std::to_string(mfd.dimension()));
  return chern_row(mfd)[detail::partition_index(mfd.dimension()).at(lambda)];
}

/// Integer coefficients of s_i in the partition basis, ordered like partitions(i).
inline std::vector<Integer> segre_vector(int i) {
  const ChernPolynomial s = segre_from_chern(i).at(static_cast<std::size_t>(i));
  std::vector<Integer> v;
  for (const auto& p : partitions(i)) v.push_back(numerator(s.coefficient(p)));
  return v;
}

inline Integer dot(const std::vector<Integer>& a, const std::vector<Integer>& b) {
  Integer s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

/// s_{dim M}[M].
inline Integer segre_number(const ManifoldExpr& mfd) {
  return dot(chern_row(mfd), segre_vector(mfd.dimension()));
}

/// s_{dim M}[M] computed inside the cohomology ring of the whole product.
inline Integer segre_number_direct(const ManifoldExpr& mfd) {
  ManifoldRing ring = manifold_ring(mfd);
  return integrate(invert_unit(chern_total(mfd, ring)), ring);
}

/// Atoms of dimension <= max_dim in canonical order.
inline std::vector<Atom> atoms_up_to(int max_dim) {
  std::vector<Atom> out;
  for (int d = 1; d <= max_dim; ++d) {
    out.push_back(Atom::projective(d));
    for (int m = 1; 2 * m <= d + 1; ++m) out.push_back(Atom::milnor(m, d + 1 - m));
  }
  return out;
}

/// Every product of atoms with total dimension i, without repetition.
inline std::vector<ManifoldExpr> spanning_set(int i) {
  if (i < 1) throw std::invalid_argument("spanning_set: degree must be >= 1");
  const auto atoms = atoms_up_to(i);
  std::vector<ManifoldExpr> out;
  std::vector<Atom> cur;
  auto recurse = [&](auto&& self, std::size_t from, int left) -> void {
    if (left == 0) {
      out.emplace_back(cur);
      return;
    }
    for (std::size_t k = from; k < atoms.size(); ++k) {
      int d = atoms[k].dimension();
      if (d > left) break;
      cur.push_back(atoms[k]);
      self(self, k, left - d);
      cur.pop_back();
    }
  };
  recurse(recurse, 0, i);
  return out;
}

/// Chern numbers of a spanning set of one cobordism degree.
struct ChernMatrix {
  int degree = 0;
  std::vector<ManifoldExpr> rows;
  std::vector<Partition> columns;
  std::vector<std::vector<Integer>> entries;

  friend bool operator==(const ChernMatrix&, const ChernMatrix&) = default;
};

inline ChernMatrix compute_chern_matrix(int i) {
  ChernMatrix m;
  m.degree = i;
  m.rows = spanning_set(i);
  m.columns = partitions(i);
  for (const auto& r : m.rows) m.entries.push_back(chern_row(r));
  return m;
}

}  // namespace cobcalc
