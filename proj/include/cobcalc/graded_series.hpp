#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cobcalc/arith.hpp"
#include "cobcalc/sym_poly.hpp"

namespace cobcalc {

struct Variable {
  std::string name;
  int degree = 1;
  /// x^k = 0 for k >= nilpotency when set.
  std::optional<int> nilpotency;

  friend bool operator==(const Variable&, const Variable&) = default;
};

class VariableTable {
 public:
  explicit VariableTable(std::vector<Variable> vars) : vars_(std::move(vars)) {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i].degree < 1) throw std::invalid_argument("VariableTable: degree must be >= 1");
      if (vars_[i].nilpotency && *vars_[i].nilpotency < 1)
        throw std::invalid_argument("VariableTable: nilpotency bound must be >= 1");
      for (std::size_t j = 0; j < i; ++j)
        if (vars_[j].name == vars_[i].name)
          throw std::invalid_argument("VariableTable: duplicate variable " + vars_[i].name);
    }
  }

  std::size_t size() const { return vars_.size(); }
  const Variable& operator[](std::size_t i) const { return vars_[i]; }
  const std::vector<Variable>& variables() const { return vars_; }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i].name == name) return i;
    throw std::out_of_range("VariableTable: unknown variable " + name);
  }

  friend bool operator==(const VariableTable&, const VariableTable&) = default;

 private:
  std::vector<Variable> vars_;
};

using TablePtr = std::shared_ptr<const VariableTable>;

inline TablePtr make_table(std::vector<Variable> vars) {
  return std::make_shared<const VariableTable>(std::move(vars));
}

using Exponents = std::vector<std::uint8_t>;

/// Storage key: weighted degree first, then exponents in descending lex order,
/// so iteration order matches the canonical rendering (lowest degree first).
struct MonomialKey {
  int degree = 0;
  Exponents exps;

  friend bool operator==(const MonomialKey&, const MonomialKey&) = default;
  friend bool operator<(const MonomialKey& a, const MonomialKey& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    return a.exps > b.exps;
  }
};

/// Sparse truncated polynomial in the graded variables of a VariableTable.
/// Coefficients are Rational or SymPoly (any exact ring constructible from Rational).
template <class Coeff>
class GradedSeries {
 public:
  using coefficient_type = Coeff;
  using TermMap = std::map<MonomialKey, Coeff>;

  GradedSeries(TablePtr table, int truncation) : table_(std::move(table)), trunc_(truncation) {
    if (!table_) throw std::invalid_argument("GradedSeries: null variable table");
    if (trunc_ < 0) throw std::invalid_argument("GradedSeries: negative truncation degree");
  }

  static GradedSeries constant(TablePtr table, int truncation, const Coeff& c) {
    GradedSeries s(std::move(table), truncation);
    s.add_term(Exponents(s.table_->size(), 0), c);
    return s;
  }

  static GradedSeries monomial(TablePtr table, int truncation, const Exponents& e,
                               const Coeff& c = Coeff(1)) {
    GradedSeries s(std::move(table), truncation);
    s.check_exponents(e);
    s.add_term(e, c);
    return s;
  }

  static GradedSeries variable(TablePtr table, int truncation, const std::string& name,
                               const Coeff& c = Coeff(1)) {
    Exponents e(table->size(), 0);
    e[table->index_of(name)] = 1;
    return monomial(std::move(table), truncation, e, c);
  }

  const TablePtr& table() const { return table_; }
  int truncation() const { return trunc_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree_of(const Exponents& e) const {
    int d = 0;
    for (std::size_t i = 0; i < e.size(); ++i) d += e[i] * (*table_)[i].degree;
    return d;
  }

  Coeff coefficient_of(const Exponents& e) const {
    check_exponents(e);
    auto it = terms_.find(MonomialKey{degree_of(e), e});
    return it == terms_.end() ? Coeff() : it->second;
  }

  /// Coefficient of the monomial given as {name, exponent} pairs.
  Coeff coefficient_of(const std::map<std::string, int>& mono) const {
    Exponents e(table_->size(), 0);
    for (const auto& [name, k] : mono) {
      if (k < 0 || k > 255) throw std::invalid_argument("GradedSeries: bad exponent");
      e[table_->index_of(name)] = static_cast<std::uint8_t>(k);
    }
    return coefficient_of(e);
  }

  Coeff constant_term() const { return coefficient_of(Exponents(table_->size(), 0)); }

  GradedSeries homogeneous(int degree) const {
    GradedSeries out(table_, trunc_);
    for (const auto& [k, c] : terms_)
      if (k.degree == degree) out.terms_.emplace(k, c);
    return out;
  }

  /// Same terms viewed at a new truncation degree (terms above it are dropped).
  GradedSeries with_truncation(int truncation) const {
    GradedSeries out(table_, truncation);
    for (const auto& [k, c] : terms_)
      if (k.degree <= truncation) out.terms_.emplace(k, c);
    return out;
  }

  GradedSeries& operator+=(const GradedSeries& o) {
    check_compatible(o);
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  GradedSeries& operator-=(const GradedSeries& o) {
    check_compatible(o);
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }
  GradedSeries& operator*=(const GradedSeries& o) { return *this = *this * o; }

  friend GradedSeries operator+(GradedSeries a, const GradedSeries& b) { return a += b; }
  friend GradedSeries operator-(GradedSeries a, const GradedSeries& b) { return a -= b; }
  friend GradedSeries operator-(GradedSeries a) {
    for (auto& [k, c] : a.terms_) c = -c;
    return a;
  }

  friend GradedSeries operator*(const GradedSeries& a, const GradedSeries& b) {
    a.check_compatible(b);
    GradedSeries r(a.table_, a.trunc_);
    const auto& vars = a.table_->variables();
    Exponents e(vars.size());
    for (const auto& [ka, ca] : a.terms_) {
      for (const auto& [kb, cb] : b.terms_) {
        int d = ka.degree + kb.degree;
        // terms are sorted by degree, so nothing later in b fits either
        if (d > a.trunc_) break;
        bool killed = false;
        for (std::size_t i = 0; i < vars.size(); ++i) {
          int x = ka.exps[i] + kb.exps[i];
          if (vars[i].nilpotency && x >= *vars[i].nilpotency) {
            killed = true;
            break;
          }
          e[i] = static_cast<std::uint8_t>(x);
        }
        if (!killed) r.add_term(MonomialKey{d, e}, ca * cb);
      }
    }
    return r;
  }

  friend GradedSeries operator*(GradedSeries a, const Coeff& s) {
    if (s == Coeff()) return GradedSeries(a.table_, a.trunc_);
    for (auto& [k, c] : a.terms_) c = c * s;
    a.drop_zeros();
    return a;
  }
  friend GradedSeries operator*(const Coeff& s, const GradedSeries& a) { return a * s; }

  friend bool operator==(const GradedSeries& a, const GradedSeries& b) {
    return *a.table_ == *b.table_ && a.trunc_ == b.trunc_ && a.terms_ == b.terms_;
  }

  GradedSeries pow(unsigned k) const {
    GradedSeries r = constant(table_, trunc_, Coeff(1));
    for (unsigned j = 0; j < k; ++j) r *= *this;
    return r;
  }

  /// Applies f to every coefficient, e.g. to substitute symbols.
  template <class F>
  GradedSeries map_coefficients(F&& f) const {
    GradedSeries out(table_, trunc_);
    for (const auto& [k, c] : terms_) out.add_term(k, f(c));
    return out;
  }

  /// Lowest degree first; within a degree, higher powers of earlier variables first.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      std::string mono;
      for (std::size_t i = 0; i < k.exps.size(); ++i) {
        if (k.exps[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += (*table_)[i].name;
        if (k.exps[i] > 1) mono += "^" + std::to_string(k.exps[i]);
      }
      std::string coeff = cobcalc::to_string(c);
      bool negative = !coeff.empty() && coeff[0] == '-';
      bool compound = coeff.find(' ') != std::string::npos;
      std::string term;
      if (compound) {
        negative = false;
        coeff = "(" + coeff + ")";
      } else if (negative) {
        coeff.erase(0, 1);
      }
      if (mono.empty())
        term = coeff;
      else if (coeff == "1")
        term = mono;
      else
        term = coeff + "*" + mono;
      if (first)
        out = (negative ? "-" : "") + term;
      else
        out += (negative ? " - " : " + ") + term;
      first = false;
    }
    return out;
  }

 private:
  void check_compatible(const GradedSeries& o) const {
    if (table_ != o.table_ && !(*table_ == *o.table_))
      throw std::invalid_argument("GradedSeries: variable table mismatch");
    if (trunc_ != o.trunc_) throw std::invalid_argument("GradedSeries: truncation mismatch");
  }

  void check_exponents(const Exponents& e) const {
    if (e.size() != table_->size())
      throw std::invalid_argument("GradedSeries: exponent vector does not match table");
  }

  void add_term(const Exponents& e, const Coeff& c) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      const auto& nil = (*table_)[i].nilpotency;
      if (nil && e[i] >= *nil) return;
    }
    add_term(MonomialKey{degree_of(e), e}, c);
  }

  void add_term(const MonomialKey& k, const Coeff& c) {
    if (k.degree > trunc_ || c == Coeff()) return;
    auto [it, inserted] = terms_.emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Coeff()) terms_.erase(it);
    }
  }

  void drop_zeros() {
    for (auto it = terms_.begin(); it != terms_.end();)
      it = (it->second == Coeff()) ? terms_.erase(it) : std::next(it);
  }

  TablePtr table_;
  int trunc_;
  TermMap terms_;
};

namespace detail {
template <class Coeff>
void require_constant(const GradedSeries<Coeff>& p, const Coeff& expected, const char* what) {
  if (!(p.constant_term() == expected)) throw std::domain_error(what);
}
}  // namespace detail

/// Multiplicative inverse of a series with constant term 1.
template <class Coeff>
GradedSeries<Coeff> invert_unit(const GradedSeries<Coeff>& p) {
  detail::require_constant(p, Coeff(1), "invert_unit: constant term must be 1");
  auto one = GradedSeries<Coeff>::constant(p.table(), p.truncation(), Coeff(1));
  GradedSeries<Coeff> u = one - p;  // p = 1 - u, p^{-1} = sum u^k
  GradedSeries<Coeff> result = one;
  GradedSeries<Coeff> power = one;
  for (;;) {
    power *= u;
    if (power.is_zero()) break;
    result += power;
  }
  return result;
}

/// Formal logarithm of a series with constant term 1.
template <class Coeff>
GradedSeries<Coeff> series_log(const GradedSeries<Coeff>& p) {
  detail::require_constant(p, Coeff(1), "series_log: constant term must be 1");
  auto one = GradedSeries<Coeff>::constant(p.table(), p.truncation(), Coeff(1));
  GradedSeries<Coeff> u = p - one;
  GradedSeries<Coeff> result(p.table(), p.truncation());
  GradedSeries<Coeff> power = one;
  for (int k = 1;; ++k) {
    power *= u;
    if (power.is_zero()) break;
    Rational w(1, k);
    if (k % 2 == 0) w = -w;
    result += power * Coeff(w);
  }
  return result;
}

/// Formal exponential of a series with constant term 0.
template <class Coeff>
GradedSeries<Coeff> series_exp(const GradedSeries<Coeff>& p) {
  detail::require_constant(p, Coeff(), "series_exp: constant term must be 0");
  auto one = GradedSeries<Coeff>::constant(p.table(), p.truncation(), Coeff(1));
  GradedSeries<Coeff> result = one;
  GradedSeries<Coeff> power = one;
  for (int k = 1;; ++k) {
    power = power * p * Coeff(Rational(1, k));
    if (power.is_zero()) break;
    result += power;
  }
  return result;
}

using RationalSeries = GradedSeries<Rational>;
using SymbolicSeries = GradedSeries<SymPoly>;

}  // namespace cobcalc
