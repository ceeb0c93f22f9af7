#pragma once

#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "cobcalc/arith.hpp"
#include "cobcalc/graded_series.hpp"

namespace cobcalc {

/// Universal polynomial in the Chern classes, expanded in the monomial basis
/// c_lambda = c_{lambda_1} c_{lambda_2} ...
struct ChernPolynomial {
  int degree = 0;
  std::map<Partition, Rational> expansion;

  Rational coefficient(const Partition& p) const {
    auto it = expansion.find(p);
    return it == expansion.end() ? Rational(0) : it->second;
  }

  bool is_integral() const {
    for (const auto& [p, c] : expansion)
      if (denominator(c) != 1) return false;
    return true;
  }

  friend bool operator==(const ChernPolynomial&, const ChernPolynomial&) = default;

  /// e.g. "c1^2 - c2": ascending lex order of partitions, factors by increasing index.
  std::string to_string() const {
    if (expansion.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [p, c] : expansion) {
      std::string mono;
      const auto& parts = p.parts();
      for (std::size_t k = parts.size(); k > 0;) {
        std::size_t run = k;
        while (run > 0 && parts[run - 1] == parts[k - 1]) --run;
        if (!mono.empty()) mono += "*";
        mono += "c" + std::to_string(parts[k - 1]);
        if (k - run > 1) mono += "^" + std::to_string(k - run);
        k = run;
      }
      Rational mag = c < 0 ? Rational(-c) : c;
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
};

/// Graded ring Q[c_1, ..., c_d] with c_j in degree j, truncated at degree d.
inline TablePtr chern_table(int d) {
  std::vector<Variable> vars;
  for (int j = 1; j <= d; ++j) vars.push_back({"c" + std::to_string(j), j, std::nullopt});
  return make_table(std::move(vars));
}

inline Exponents exponents_of(const Partition& p, std::size_t nvars) {
  Exponents e(nvars, 0);
  for (int part : p.parts()) ++e.at(static_cast<std::size_t>(part - 1));
  return e;
}

inline Partition partition_of(const Exponents& e) {
  std::vector<int> parts;
  for (std::size_t j = e.size(); j-- > 0;)
    for (int k = 0; k < e[j]; ++k) parts.push_back(static_cast<int>(j + 1));
  return Partition(std::move(parts));
}

/// Split a series in Q[c_1..c_d] into its homogeneous parts as ChernPolynomials.
inline std::vector<ChernPolynomial> chern_polynomials_of(const RationalSeries& s, int d) {
  std::vector<ChernPolynomial> out(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k <= d; ++k) out[static_cast<std::size_t>(k)].degree = k;
  for (const auto& [key, c] : s.terms())
    out.at(static_cast<std::size_t>(key.degree)).expansion.emplace(partition_of(key.exps), c);
  return out;
}

inline RationalSeries series_of(const ChernPolynomial& p, const TablePtr& table, int truncation) {
  RationalSeries s(table, truncation);
  for (const auto& [part, c] : p.expansion)
    s += RationalSeries::monomial(table, truncation, exponents_of(part, table->size()), c);
  return s;
}

inline RationalSeries total_chern_class(const TablePtr& table, int d) {
  auto c = RationalSeries::constant(table, d, Rational(1));
  for (int j = 1; j <= d; ++j) c += RationalSeries::variable(table, d, "c" + std::to_string(j));
  return c;
}

namespace detail {

// Write-once cache; concurrent first calls may both compute, the first insert wins.
class UniversalCache {
 public:
  template <class F>
  std::vector<ChernPolynomial> get(const std::string& kind, int d, F&& compute) {
    {
      std::lock_guard lock(mutex_);
      if (auto it = table_.find({kind, d}); it != table_.end()) return it->second;
    }
    std::vector<ChernPolynomial> value = compute();
    std::lock_guard lock(mutex_);
    return table_.emplace(std::make_pair(kind, d), std::move(value)).first->second;
  }

  static UniversalCache& instance() {
    static UniversalCache cache;
    return cache;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::string, int>, std::vector<ChernPolynomial>> table_;
};

inline std::vector<RationalSeries> power_sum_series(const TablePtr& table, int d) {
  auto c = [&](int j) { return RationalSeries::variable(table, d, "c" + std::to_string(j)); };
  std::vector<RationalSeries> p(static_cast<std::size_t>(d) + 1, RationalSeries(table, d));
  for (int k = 1; k <= d; ++k) {
    // Newton: p_k = sum_{i<k} (-1)^{i-1} c_i p_{k-i} + (-1)^{k-1} k c_k
    RationalSeries acc(table, d);
    for (int i = 1; i < k; ++i) {
      RationalSeries t = c(i) * p[static_cast<std::size_t>(k - i)];
      if (i % 2 == 0)
        acc -= t;
      else
        acc += t;
    }
    RationalSeries last = c(k) * Rational(k);
    if (k % 2 == 0)
      acc -= last;
    else
      acc += last;
    p[static_cast<std::size_t>(k)] = acc;
  }
  return p;
}

}  // namespace detail

/// Segre classes s_0..s_d defined by (sum c_j)(sum s_i) = 1.
inline std::vector<ChernPolynomial> segre_from_chern(int d) {
  if (d < 0) throw std::invalid_argument("segre_from_chern: negative degree");
  return detail::UniversalCache::instance().get("segre", d, [d] {
    auto table = chern_table(d);
    return chern_polynomials_of(invert_unit(total_chern_class(table, d)), d);
  });
}

/// Power sums p_0..p_d of the Chern roots (p_0 is left as 0).
inline std::vector<ChernPolynomial> power_sums_from_chern(int d) {
  if (d < 0) throw std::invalid_argument("power_sums_from_chern: negative degree");
  return detail::UniversalCache::instance().get("power", d, [d] {
    auto table = chern_table(d);
    auto p = detail::power_sum_series(table, d);
    std::vector<ChernPolynomial> out;
    for (int k = 0; k <= d; ++k)
      out.push_back(chern_polynomials_of(p[static_cast<std::size_t>(k)], d)[static_cast<std::size_t>(k)]);
    return out;
  });
}

/// Coefficients mu_k of log(x / (1 - e^{-x})) = sum mu_k x^k, k = 0..d.
inline std::vector<Rational> todd_log_coefficients(int d) {
  auto table = make_table({{"x", 1, std::nullopt}});
  // (1 - e^{-x}) / x = sum (-1)^k x^k / (k+1)!
  RationalSeries q(table, d);
  for (int k = 0; k <= d; ++k) {
    Rational c(Integer(1), factorial(static_cast<unsigned>(k + 1)));
    if (k % 2) c = -c;
    Exponents e{static_cast<std::uint8_t>(k)};
    q += RationalSeries::monomial(table, d, e, c);
  }
  RationalSeries log_todd = -series_log(q);
  std::vector<Rational> mu;
  for (int k = 0; k <= d; ++k) mu.push_back(log_todd.coefficient_of({{"x", k}}));
  return mu;
}

/// Todd polynomials td_0..td_d: exp(sum mu_k p_k).
inline std::vector<ChernPolynomial> todd_from_chern(int d) {
  if (d < 0) throw std::invalid_argument("todd_from_chern: negative degree");
  return detail::UniversalCache::instance().get("todd", d, [d] {
    auto table = chern_table(d);
    auto mu = todd_log_coefficients(d);
    auto p = detail::power_sum_series(table, d);
    RationalSeries exponent(table, d);
    for (int k = 1; k <= d; ++k)
      exponent += p[static_cast<std::size_t>(k)] * mu[static_cast<std::size_t>(k)];
    return chern_polynomials_of(series_exp(exponent), d);
  });
}

/// Chern character components ch_0 = rank, ch_k = p_k / k!.
inline std::vector<ChernPolynomial> ch_from_chern(int d, int rank) {
  auto p = power_sums_from_chern(d);
  std::vector<ChernPolynomial> out;
  ChernPolynomial ch0;
  if (rank != 0) ch0.expansion.emplace(Partition{}, Rational(rank));
  out.push_back(ch0);
  for (int k = 1; k <= d; ++k) {
    ChernPolynomial chk = p[static_cast<std::size_t>(k)];
    Integer f = factorial(static_cast<unsigned>(k));
    for (auto& [part, c] : chk.expansion) c /= Rational(f);
    out.push_back(std::move(chk));
  }
  return out;
}

/// Substitutes concrete classes c_j into P; `values` must supply every c_j used.
template <class Coeff>
GradedSeries<Coeff> evaluate(const ChernPolynomial& p,
                             const std::map<int, GradedSeries<Coeff>>& values,
                             const TablePtr& table, int truncation) {
  auto one = GradedSeries<Coeff>::constant(table, truncation, Coeff(1));
  GradedSeries<Coeff> result(table, truncation);
  for (const auto& [part, c] : p.expansion) {
    GradedSeries<Coeff> term = one;
    for (int j : part.parts()) {
      auto it = values.find(j);
      if (it == values.end())
        throw std::out_of_range("evaluate: no value supplied for c" + std::to_string(j));
      term *= it->second;
    }
    result += term * Coeff(c);
  }
  return result;
}

/// Chern classes c_1..c_d read off as homogeneous parts of a total class.
template <class Coeff>
std::map<int, GradedSeries<Coeff>> chern_classes_of(const GradedSeries<Coeff>& total, int d) {
  std::map<int, GradedSeries<Coeff>> out;
  for (int j = 1; j <= d; ++j) out.emplace(j, total.homogeneous(j));
  return out;
}

template <class Coeff>
GradedSeries<Coeff> evaluate(const ChernPolynomial& p, const GradedSeries<Coeff>& total_chern) {
  return evaluate(p, chern_classes_of(total_chern, p.degree), total_chern.table(),
                  total_chern.truncation());
}

}  // namespace cobcalc
