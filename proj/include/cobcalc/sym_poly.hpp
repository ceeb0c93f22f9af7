#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cobcalc/arith.hpp"

namespace cobcalc {

/// Monomial in named indeterminates: name -> positive exponent.
using SymMonomial = std::map<std::string, int>;

inline int total_degree(const SymMonomial& m) {
  int d = 0;
  for (const auto& [name, e] : m) d += e;
  return d;
}

/// Polynomial in named symbolic indeterminates with exact rational coefficients.
/// The zero-indeterminate case is an ordinary rational number.
class SymPoly {
 public:
  SymPoly() = default;
  SymPoly(int c) : SymPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  SymPoly(const Integer& c) : SymPoly(Rational(c)) {}  // NOLINT
  SymPoly(const Rational& c) {  // NOLINT
    if (c != 0) terms_.emplace(SymMonomial{}, c);
  }

  static SymPoly symbol(const std::string& name, int exponent = 1) {
    if (exponent < 0) throw std::invalid_argument("SymPoly: negative exponent");
    SymPoly p;
    SymMonomial m;
    if (exponent > 0) m.emplace(name, exponent);
    p.terms_.emplace(std::move(m), Rational(1));
    return p;
  }

  const std::map<SymMonomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
  }

  Rational coefficient(const SymMonomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }
  Rational constant_term() const { return coefficient({}); }

  std::set<std::string> symbols() const {
    std::set<std::string> out;
    for (const auto& [m, c] : terms_)
      for (const auto& [name, e] : m) out.insert(name);
    return out;
  }

  /// Least common multiple of all coefficient denominators (1 for the zero polynomial).
  Integer common_denominator() const {
    Integer l = 1;
    for (const auto& [m, c] : terms_) l = boost::multiprecision::lcm(l, denominator(c));
    return l;
  }

  SymPoly& operator+=(const SymPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  SymPoly& operator-=(const SymPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  SymPoly& operator*=(const SymPoly& o) { return *this = *this * o; }

  friend SymPoly operator+(SymPoly a, const SymPoly& b) { return a += b; }
  friend SymPoly operator-(SymPoly a, const SymPoly& b) { return a -= b; }
  friend SymPoly operator-(SymPoly a) {
    for (auto& [m, c] : a.terms_) c = -c;
    return a;
  }
  friend SymPoly operator*(const SymPoly& a, const SymPoly& b) {
    SymPoly r;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        SymMonomial m = ma;
        for (const auto& [name, e] : mb) m[name] += e;
        r.add_term(m, ca * cb);
      }
    return r;
  }
  friend SymPoly operator/(SymPoly a, const Rational& d) {
    if (d == 0) throw std::domain_error("SymPoly: division by zero");
    for (auto& [m, c] : a.terms_) c /= d;
    return a;
  }

  friend bool operator==(const SymPoly&, const SymPoly&) = default;

  SymPoly pow(unsigned k) const {
    SymPoly r(1);
    for (unsigned j = 0; j < k; ++j) r *= *this;
    return r;
  }

  /// Replace every occurrence of `name` by `value`.
  SymPoly substitute(const std::string& name, const SymPoly& value) const {
    SymPoly r;
    for (const auto& [m, c] : terms_) {
      SymMonomial rest = m;
      int e = 0;
      if (auto it = rest.find(name); it != rest.end()) {
        e = it->second;
        rest.erase(it);
      }
      SymPoly t;
      t.terms_.emplace(std::move(rest), c);
      r += t * value.pow(static_cast<unsigned>(e));
    }
    return r;
  }

  /// Value at integer arguments; every symbol present must be assigned.
  Rational evaluate(const std::map<std::string, Integer>& values) const {
    Rational sum = 0;
    for (const auto& [m, c] : terms_) {
      Rational t = c;
      for (const auto& [name, e] : m) {
        auto it = values.find(name);
        if (it == values.end())
          throw std::out_of_range("SymPoly::evaluate: no value for symbol " + name);
        t *= Rational(boost::multiprecision::pow(it->second, static_cast<unsigned>(e)));
      }
      sum += t;
    }
    return sum;
  }

  /// Canonical rendering: higher total degree first, ties broken lexicographically.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<SymMonomial, Rational>> ordered(terms_.begin(), terms_.end());
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto& x, const auto& y) {
      int dx = total_degree(x.first), dy = total_degree(y.first);
      if (dx != dy) return dx > dy;
      return x.first > y.first;
    });
    std::string out;
    bool first = true;
    for (const auto& [m, c] : ordered) {
      Rational mag = c < 0 ? Rational(-c) : c;
      std::string mono;
      for (const auto& [name, e] : m) {
        if (!mono.empty()) mono += "*";
        mono += name;
        if (e > 1) mono += "^" + std::to_string(e);
      }
      std::string term;
      if (mono.empty())
        term = cobcalc::to_string(mag);
      else if (mag == 1)
        term = mono;
      else
        term = cobcalc::to_string(mag) + "*" + mono;
      if (first)
        out = (c < 0 ? "-" : "") + term;
      else
        out += (c < 0 ? " - " : " + ") + term;
      first = false;
    }
    return out;
  }

 private:
  void add_term(const SymMonomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  std::map<SymMonomial, Rational> terms_;
};

inline std::string to_string(const SymPoly& p) { return p.to_string(); }

/// Thrown for malformed polynomial text; `position` is a 0-based offset.
class SymParseError : public std::invalid_argument {
 public:
  SymParseError(const std::string& msg, std::size_t position)
      : std::invalid_argument(msg + " at offset " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

// expr   := term (('+'|'-') term)*
// term   := unary (('*'|'/') unary)*
// unary  := '-' unary | power
// power  := primary ('^' digits)?
// primary:= digits | ident | '(' expr ')'
class SymPolyParser {
 public:
  explicit SymPolyParser(std::string_view text) : text_(text) {}

  SymPoly parse() {
    SymPoly p = expr();
    skip_ws();
    if (pos_ != text_.size()) throw SymParseError("unexpected character", pos_);
    return p;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  Integer digits() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) throw SymParseError("expected integer", start);
    return Integer(std::string(text_.substr(start, pos_ - start)));
  }

  SymPoly expr() {
    SymPoly p = term();
    for (;;) {
      if (accept('+'))
        p += term();
      else if (accept('-'))
        p -= term();
      else
        return p;
    }
  }
  SymPoly term() {
    SymPoly p = unary();
    for (;;) {
      if (accept('*')) {
        p *= unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        SymPoly d = unary();
        if (!d.is_constant() || d.is_zero())
          throw SymParseError("division only by nonzero constants", at);
        p = p / d.constant_term();
      } else {
        return p;
      }
    }
  }
  SymPoly power() {
    SymPoly base = primary();
    if (accept('^')) {
      Integer e = digits();
      if (e > 64) throw SymParseError("exponent too large", pos_);
      return base.pow(static_cast<unsigned>(e));
    }
    return base;
  }
  SymPoly unary() {
    if (accept('-')) return -unary();
    return power();
  }
  SymPoly primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw SymParseError("unexpected end of input", pos_);
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      SymPoly p = expr();
      if (!accept(')')) throw SymParseError("expected ')'", pos_);
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return SymPoly(digits());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      return SymPoly::symbol(std::string(text_.substr(start, pos_ - start)));
    }
    throw SymParseError("unexpected character", pos_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse text such as "(144*a1^4 - 108*a1^2*a2 + 12*a2^2 + a4)/17280".
inline SymPoly parse_sym_poly(std::string_view text) {
  return detail::SymPolyParser(text).parse();
}

}  // namespace cobcalc
