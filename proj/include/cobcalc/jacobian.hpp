#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cobcalc/arith.hpp"
#include "cobcalc/char_calculus.hpp"
#include "cobcalc/cobordism.hpp"
#include "cobcalc/graded_series.hpp"
#include "cobcalc/sym_poly.hpp"

namespace cobcalc {

/// Symbol data available for a smooth codimension-4 subvariety Y:
/// N12 leaves s_3(Y) formal (with f_* s_3(Y) = b theta^7/7!), N14 also fixes
/// s_3(Y) = a3 theta^3/3!.
enum class JacobianCase { N12, N14 };

inline std::string to_string(JacobianCase c) { return c == JacobianCase::N12 ? "n12" : "n14"; }

inline JacobianCase parse_jacobian_case(std::string_view s) {
  if (s == "n12" || s == "N12") return JacobianCase::N12;
  if (s == "n14" || s == "N14") return JacobianCase::N14;
  throw std::invalid_argument("unknown case '" + std::string(s) + "' (expected n12 or n14)");
}

inline constexpr int kCodimension = 4;
inline constexpr int kAmbientTruncation = 8;

/// theta in degree 1 and the formal class S3 = s_3(Y) in degree 3 with S3^2 = 0.
/// Degrees count complex codimension; theta^k lives in H^{2k}.
inline const TablePtr& ambient_table() {
  static const TablePtr table = make_table({{"theta", 1, std::nullopt}, {"S3", 3, 2}});
  return table;
}

/// Element of the model cohomology: theta-polynomial plus S3 * theta-polynomial,
/// with coefficients in Q[a1, a2, a3, a4, b].
using AmbientClass = SymbolicSeries;

inline SymPoly sym(const std::string& name) { return SymPoly::symbol(name); }

inline AmbientClass theta_power(int k, const SymPoly& coeff, int truncation) {
  return AmbientClass::monomial(ambient_table(), truncation,
                                {static_cast<std::uint8_t>(k), 0}, coeff);
}

inline AmbientClass s3_theta_power(int k, const SymPoly& coeff, int truncation) {
  return AmbientClass::monomial(ambient_table(), truncation,
                                {static_cast<std::uint8_t>(k), 1}, coeff);
}

/// Coefficient of theta^k.
inline SymPoly theta_coefficient(const AmbientClass& c, int k) {
  return c.coefficient_of(Exponents{static_cast<std::uint8_t>(k), 0});
}

/// Coefficient of S3 * theta^k.
inline SymPoly s3_coefficient(const AmbientClass& c, int k) {
  return c.coefficient_of(Exponents{static_cast<std::uint8_t>(k), 1});
}

/// s(Y) = sum a_i theta^i / i!, with S3 standing in for s_3 in case N12.
inline AmbientClass segre_of_subvariety(JacobianCase jc) {
  const int t = kCodimension;
  AmbientClass s = theta_power(0, 1, t);
  s += theta_power(1, sym("a1"), t);
  s += theta_power(2, sym("a2") / Rational(2), t);
  if (jc == JacobianCase::N12)
    s += s3_theta_power(0, 1, t);
  else
    s += theta_power(3, sym("a3") / Rational(6), t);
  s += theta_power(4, sym("a4") / Rational(24), t);
  return s;
}

/// c(-N) = c(T_Y) = s(Y)^{-1}, the ambient tangent bundle being trivial.
inline AmbientClass chern_of_minus_normal(JacobianCase jc) {
  return invert_unit(segre_of_subvariety(jc));
}

inline AmbientClass todd_minus_normal(JacobianCase jc) {
  const AmbientClass c = chern_of_minus_normal(jc);
  const auto td = todd_from_chern(kCodimension);
  AmbientClass sum(ambient_table(), kCodimension);
  for (const auto& tk : td) sum += evaluate(tk, c);
  return sum;
}

/// f_* of a class pulled back from the ambient variety: f_* f^* is cup product
/// with [Y] = a4 theta^4/4!, and f_* S3 = b theta^7/7!.
inline AmbientClass push_forward(const AmbientClass& y) {
  AmbientClass out(ambient_table(), kAmbientTruncation);
  const SymPoly fundamental = sym("a4") / Rational(24);
  const SymPoly s3_image = sym("b") / Rational(5040);
  for (const auto& [key, coeff] : y.terms()) {
    const int k = key.exps[0];
    if (key.exps[1] == 0)
      out += theta_power(k + kCodimension, coeff * fundamental, kAmbientTruncation);
    else
      out += theta_power(k + 7, coeff * s3_image, kAmbientTruncation);
  }
  return out;
}

/// ch(chi) = f_* td(-N), chi the topological K-class of f_* O_Y.
inline AmbientClass chern_character_chi(JacobianCase jc) {
  return push_forward(todd_minus_normal(jc));
}

/// Value of b forced once s_3(Y) = a3 theta^3/3!: equate f_* s_3 with b theta^7/7!.
inline SymPoly derive_b_relation() {
  const SymPoly pushed_s3 =
      theta_coefficient(push_forward(theta_power(3, sym("a3") / Rational(6), kCodimension)), 7);
  const SymPoly per_b = theta_coefficient(push_forward(s3_theta_power(0, 1, kCodimension)), 7);
  const Rational unit = per_b.coefficient({{"b", 1}});
  if (unit == 0 || per_b != sym("b") * SymPoly(unit))
    throw std::logic_error("derive_b_relation: unexpected push-forward of S3");
  return pushed_s3 / unit;
}

/// q_k theta^k integral <=> q_k * k! in Z, normalized to N_k == 0 mod 2^{m_k}
/// where N_k = D q_k k! has integer coefficients and m_k = v2(D).
struct IntegralityConstraint {
  int k = 0;
  SymPoly coefficient;  // q_k
  SymPoly scaled;       // q_k * k!
  Integer denominator;  // D
  SymPoly numerator;    // N_k
  int two_adic_exponent = 0;

  std::string to_string() const {
    std::string s = "k=" + std::to_string(k) + ": " + numerator.to_string();
    if (two_adic_exponent == 0) return s + " (no 2-adic condition)";
    return s + " == 0 mod " + pow2(static_cast<unsigned>(two_adic_exponent)).str();
  }
};

inline std::vector<IntegralityConstraint> integrality_constraints(JacobianCase jc) {
  const AmbientClass ch = chern_character_chi(jc);
  std::vector<IntegralityConstraint> out;
  for (int k = kCodimension; k <= kAmbientTruncation; ++k) {
    IntegralityConstraint c;
    c.k = k;
    c.coefficient = theta_coefficient(ch, k);
    if (!s3_coefficient(ch, k).is_zero())
      throw std::logic_error("integrality_constraints: S3 survived the push-forward");
    c.scaled = c.coefficient * SymPoly(factorial(static_cast<unsigned>(k)));
    c.denominator = c.scaled.common_denominator();
    c.numerator = c.scaled * SymPoly(c.denominator);
    c.two_adic_exponent = v2(c.denominator);
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<std::string> free_symbols(JacobianCase jc) {
  if (jc == JacobianCase::N12) return {"a1", "a2", "a4", "b"};
  return {"a1", "a2", "a3", "a4"};
}

/// a4 == value (mod modulus); modulus 1 means unconstrained.
struct ResidueClass {
  int value = 0;
  int modulus = 1;

  bool contains(const Integer& x) const { return mod_floor(x - value, Integer(modulus)) == 0; }
  std::string to_string() const {
    if (modulus == 1) return "any";
    return std::to_string(value) + " mod " + std::to_string(modulus);
  }
};

struct ResidueSearchResult {
  std::vector<std::string> symbols;
  int modulus = 1;
  std::size_t examined = 0;
  std::vector<std::vector<int>> solutions;  // residues in [0, modulus), ordered like symbols
};

/// Exhaustive search of residues mod 2^{max m_k}. Polynomial congruences mod
/// 2^m only depend on the arguments mod 2^m, so an empty result is a proof.
inline ResidueSearchResult residue_search(JacobianCase jc, ResidueClass a4_class) {
  const auto constraints = integrality_constraints(jc);
  int max_exp = 0;
  for (const auto& c : constraints) max_exp = std::max(max_exp, c.two_adic_exponent);

  ResidueSearchResult out;
  out.symbols = free_symbols(jc);
  out.modulus = 1 << max_exp;
  if (out.modulus % a4_class.modulus != 0)
    throw std::invalid_argument("residue_search: a4 modulus must divide " +
                                std::to_string(out.modulus));
  const std::size_t a4_pos = static_cast<std::size_t>(
      std::find(out.symbols.begin(), out.symbols.end(), "a4") - out.symbols.begin());

  std::vector<int> tuple(out.symbols.size(), 0);
  std::map<std::string, Integer> values;
  for (;;) {
    ++out.examined;
    if (a4_class.contains(tuple[a4_pos])) {
      for (std::size_t s = 0; s < tuple.size(); ++s) values[out.symbols[s]] = tuple[s];
      bool ok = true;
      for (const auto& c : constraints) {
        if (c.two_adic_exponent == 0) continue;
        Rational v = c.numerator.evaluate(values);
        if (mod_floor(numerator(v), pow2(static_cast<unsigned>(c.two_adic_exponent))) != 0) {
          ok = false;
          break;
        }
      }
      if (ok) out.solutions.push_back(tuple);
    }
    std::size_t pos = 0;
    while (pos < tuple.size() && tuple[pos] == out.modulus - 1) tuple[pos++] = 0;
    if (pos == tuple.size()) break;
    ++tuple[pos];
  }
  return out;
}

/// Proven divisibility of classes of smooth codimension-c subvarieties of a very
/// general Jacobian of dimension n, relative to theta^c/c!.
enum class Multiplier { Unknown = 0, One = 1, Two = 2, Four = 4 };

inline std::string to_string(Multiplier m) {
  switch (m) {
    case Multiplier::Unknown: return "unknown";
    case Multiplier::One: return "1";
    case Multiplier::Two: return "2";
    case Multiplier::Four: return "4";
  }
  return "?";
}

struct MultiplierResult {
  Multiplier value = Multiplier::Unknown;
  std::string basis;
  std::optional<bool> binomial_pillar;    // v2(C(2c,c)) == alpha(c)
  std::optional<bool> correction_pillar;  // correction formula at (c, alpha(c), 1)
  std::optional<bool> residue_pillar;     // codimension-4 residue searches empty

  bool pillars_hold() const {
    return binomial_pillar.value_or(true) && correction_pillar.value_or(true) &&
           residue_pillar.value_or(true);
  }
};

inline MultiplierResult theorem_multiplier(int c, int n) {
  if (c < 0 || n < 0) throw std::invalid_argument("theorem_multiplier: c and n must be >= 0");
  MultiplierResult r;
  if (c <= 1) {
    r.value = Multiplier::One;
    r.basis = "codimension <= 1: every class is realized";
    return r;
  }
  if (c == 4 && n >= 12) {
    bool odd_empty = residue_search(JacobianCase::N12, {1, 2}).solutions.empty();
    if (n >= 14) {
      bool two_mod_four_empty = residue_search(JacobianCase::N14, {2, 4}).solutions.empty();
      r.value = Multiplier::Four;
      r.basis = "codimension 4, n >= 14: residue search";
      r.residue_pillar = odd_empty && two_mod_four_empty;
    } else {
      r.value = Multiplier::Two;
      r.basis = "codimension 4, n >= 12: residue search";
      r.residue_pillar = odd_empty;
    }
    return r;
  }
  const unsigned uc = static_cast<unsigned>(c);
  if (alpha(uc + static_cast<unsigned>(alpha(uc))) > alpha(uc) && n >= 4 * c - 2) {
    r.value = Multiplier::Two;
    r.basis = "alpha(c + alpha(c)) > alpha(c) and n >= 4c - 2";
    r.binomial_pillar = central_binom_valuation_check(uc);
    r.correction_pillar = correction_formula(c, alpha(uc), 1);
    return r;
  }
  r.basis = "no divisibility result applies";
  return r;
}

}  // namespace cobcalc
