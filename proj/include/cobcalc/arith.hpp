#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cobcalc {

using Integer = boost::multiprecision::cpp_int;
// cpp_rational keeps numerator/denominator reduced with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline std::string to_string(const Integer& x) { return x.str(); }

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

/// Number of ones in the binary expansion of m.
constexpr int alpha(std::uint64_t m) { return std::popcount(m); }

/// 2-adic valuation. Throws std::domain_error for zero.
inline int v2(const Integer& x) {
  if (x == 0) throw std::domain_error("v2: valuation of zero is infinite");
  return static_cast<int>(boost::multiprecision::lsb(boost::multiprecision::abs(x)));
}

/// 2-adic valuation of a nonzero rational (negative when the denominator is even).
inline int v2(const Rational& q) {
  if (q == 0) throw std::domain_error("v2: valuation of zero is infinite");
  return v2(numerator(q)) - v2(denominator(q));
}

inline Integer binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  Integer r = 1;
  for (unsigned j = 1; j <= k; ++j) {
    r *= n - k + j;
    r /= j;
  }
  return r;
}

inline Integer factorial(unsigned n) {
  Integer r = 1;
  for (unsigned j = 2; j <= n; ++j) r *= j;
  return r;
}

inline Integer pow2(unsigned k) { return Integer(1) << k; }

/// Nonnegative remainder of x modulo m (m > 0).
inline Integer mod_floor(const Integer& x, const Integer& m) {
  Integer r = x % m;
  if (r < 0) r += m;
  return r;
}

/// v2(C(2c, c)) == alpha(c); always true by Kummer's carry count.
inline bool central_binom_valuation_check(unsigned c) {
  return v2(binomial(2 * c, c)) == alpha(c);
}

/// All primes p with m = p^t for some t >= 1 (at most one for any m).
inline std::vector<std::uint64_t> prime_power_bases(std::uint64_t m) {
  std::vector<std::uint64_t> factors;
  std::uint64_t rest = m;
  for (std::uint64_t d = 2; d * d <= rest; ++d) {
    if (rest % d != 0) continue;
    factors.push_back(d);
    while (rest % d == 0) rest /= d;
  }
  if (rest > 1) factors.push_back(rest);

  std::vector<std::uint64_t> out;
  for (std::uint64_t p : factors) {
    std::uint64_t q = p;
    while (q < m) q *= p;
    if (q == m) out.push_back(p);
  }
  return out;
}

/// p if i = p^t - 1 for a prime p and t >= 1, otherwise 1.
inline std::uint64_t hazewinkel_lambda(std::uint64_t i) {
  if (i == 0) throw std::domain_error("hazewinkel_lambda: index must be positive");
  auto bases = prime_power_bases(i + 1);
  if (bases.size() > 1)
    throw std::logic_error("hazewinkel_lambda: i+1 is a power of two distinct primes");
  return bases.empty() ? 1 : bases.front();
}

/// All c in [0, limit] with alpha(c + alpha(c)) > alpha(c).
inline std::vector<unsigned> admissible_c(unsigned limit) {
  std::vector<unsigned> out;
  for (unsigned c = 0; c <= limit; ++c)
    if (alpha(c + alpha(c)) > alpha(c)) out.push_back(c);
  return out;
}

/// A weakly decreasing tuple of positive integers.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (std::size_t k = 0; k < parts_.size(); ++k) {
      if (parts_[k] < 1) throw std::invalid_argument("Partition: parts must be positive");
      if (k > 0 && parts_[k] > parts_[k - 1])
        throw std::invalid_argument("Partition: parts must be weakly decreasing");
      weight_ += parts_[k];
    }
  }
  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

  const std::vector<int>& parts() const { return parts_; }
  int weight() const { return weight_; }
  std::size_t length() const { return parts_.size(); }

  /// Multiplicity of part j.
  int multiplicity(int j) const {
    int m = 0;
    for (int p : parts_) m += (p == j);
    return m;
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t k = 0; k < parts_.size(); ++k) {
      if (k) s += ",";
      s += std::to_string(parts_[k]);
    }
    return s + ")";
  }

  friend bool operator==(const Partition&, const Partition&) = default;
  friend std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
    return a.parts_ <=> b.parts_;
  }

 private:
  std::vector<int> parts_;
  int weight_ = 0;
};

namespace detail {
inline void partitions_into(int remaining, int max_part, std::vector<int>& cur,
                            std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(cur);
    return;
  }
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_into(remaining - p, p, cur, out);
    cur.pop_back();
  }
}
}  // namespace detail

/// Partitions of n in descending lexicographic order: (n), (n-1,1), ..., (1,...,1).
inline std::vector<Partition> partitions(int n) {
  if (n < 0) throw std::invalid_argument("partitions: n must be nonnegative");
  std::vector<Partition> out;
  std::vector<int> cur;
  detail::partitions_into(n, n, cur, out);
  return out;
}

/// Accepts "2,1", "(2,1)" or "2 1"; parts are sorted into decreasing order.
inline Partition parse_partition(const std::string& text) {
  std::vector<int> parts;
  std::string digits;
  auto flush = [&] {
    if (digits.empty()) return;
    if (digits.size() > 6) throw std::invalid_argument("partition part too large: " + digits);
    parts.push_back(std::stoi(digits));
    digits.clear();
  };
  for (std::size_t k = 0; k < text.size(); ++k) {
    char ch = text[k];
    if (ch >= '0' && ch <= '9') {
      digits += ch;
    } else if (ch == ',' || ch == ' ') {
      flush();
    } else if ((ch == '(' && k == 0) || (ch == ')' && k + 1 == text.size())) {
      flush();
    } else {
      throw std::invalid_argument("bad partition '" + text + "' at position " + std::to_string(k));
    }
  }
  flush();
  if (parts.empty()) throw std::invalid_argument("empty partition '" + text + "'");
  std::sort(parts.rbegin(), parts.rend());
  return Partition(std::move(parts));
}

}  // namespace cobcalc
