#include <random>

#include <gtest/gtest.h>

#include "cobcalc/arith.hpp"
#include "cobcalc/graded_series.hpp"
#include "cobcalc/normal_form.hpp"
#include "cobcalc/sym_poly.hpp"

using namespace cobcalc;

// ---------------------------------------------------------------- arith

TEST(Arith, AlphaSmallValues) {
  EXPECT_EQ(alpha(0), 0);
  EXPECT_EQ(alpha(1), 1);
  EXPECT_EQ(alpha(7), 3);
  EXPECT_EQ(alpha(8), 1);
  EXPECT_EQ(alpha(255), 8);
}

TEST(Arith, AlphaRecursions) {
  for (std::uint64_t m = 0; m < 5000; ++m) {
    EXPECT_EQ(alpha(2 * m), alpha(m));
    EXPECT_EQ(alpha(2 * m + 1), alpha(m) + 1);
  }
}

TEST(Arith, V2BasicsAndMultiplicativity) {
  EXPECT_EQ(v2(Integer(12)), 2);
  EXPECT_EQ(v2(Integer(-40)), 3);
  EXPECT_EQ(v2(Rational(3, 8)), -3);
  EXPECT_THROW(v2(Integer(0)), std::domain_error);
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<long long> d(1, 1'000'000);
  for (int k = 0; k < 200; ++k) {
    Integer a = d(rng), b = d(rng);
    EXPECT_EQ(v2(Integer(a * b)), v2(a) + v2(b));
  }
}

TEST(Arith, LegendreFormulaForFactorial) {
  for (unsigned n = 1; n <= 200; ++n) EXPECT_EQ(v2(factorial(n)), static_cast<int>(n) - alpha(n));
}

TEST(Arith, CentralBinomialValuation) {
  for (unsigned c = 1; c <= 256; ++c) {
    EXPECT_EQ(v2(binomial(2 * c, c)), alpha(c)) << c;
    EXPECT_TRUE(central_binom_valuation_check(c));
  }
}

TEST(Arith, Binomial) {
  EXPECT_EQ(binomial(10, 3), 120);
  EXPECT_EQ(binomial(5, 7), 0);
  EXPECT_EQ(binomial(60, 30), Integer("118264581564861424"));
}

TEST(Arith, HazewinkelLambda) {
  EXPECT_EQ(hazewinkel_lambda(1), 2u);  // 2 = 2^1
  EXPECT_EQ(hazewinkel_lambda(2), 3u);
  EXPECT_EQ(hazewinkel_lambda(3), 2u);
  EXPECT_EQ(hazewinkel_lambda(4), 5u);
  EXPECT_EQ(hazewinkel_lambda(5), 1u);
  EXPECT_EQ(hazewinkel_lambda(7), 2u);
  EXPECT_EQ(hazewinkel_lambda(8), 3u);
  EXPECT_THROW(hazewinkel_lambda(0), std::domain_error);
}

TEST(Arith, HazewinkelLambdaHasAtMostOneBase) {
  for (std::uint64_t i = 1; i <= 10000; ++i) EXPECT_LE(prime_power_bases(i + 1).size(), 1u) << i;
  EXPECT_EQ(prime_power_bases(1).size(), 0u);
  EXPECT_EQ(prime_power_bases(81), std::vector<std::uint64_t>{3});
}

TEST(Arith, AdmissibleList) {
  EXPECT_EQ(admissible_c(17), (std::vector<unsigned>{2, 4, 5, 8, 9, 12, 16, 17}));
}

TEST(Arith, PartitionCounts) {
  const std::vector<std::size_t> p = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42,
                                      56, 77, 101, 135, 176, 231, 297, 385, 490, 627};
  for (int n = 0; n <= 20; ++n) {
    auto parts = partitions(n);
    ASSERT_EQ(parts.size(), p[static_cast<std::size_t>(n)]) << n;
    for (std::size_t k = 1; k < parts.size(); ++k) EXPECT_TRUE(parts[k - 1] > parts[k]);
    for (const auto& q : parts) EXPECT_EQ(q.weight(), n);
  }
  EXPECT_EQ(partitions(3).front(), Partition({3}));
  EXPECT_EQ(partitions(3).back(), Partition({1, 1, 1}));
}

TEST(Arith, PartitionValidationAndParse) {
  EXPECT_THROW(Partition({1, 2}), std::invalid_argument);
  EXPECT_THROW(Partition({2, 0}), std::invalid_argument);
  EXPECT_EQ(Partition({2, 1, 1}).to_string(), "(2,1,1)");
  EXPECT_EQ(Partition({2, 1, 1}).multiplicity(1), 2);
  EXPECT_EQ(parse_partition("(2,1)"), Partition({2, 1}));
  EXPECT_EQ(parse_partition("1,3"), Partition({3, 1}));
  EXPECT_THROW(parse_partition("2;1"), std::invalid_argument);
  EXPECT_THROW(parse_partition(""), std::invalid_argument);
}

// ---------------------------------------------------------------- symbolic polynomials

TEST(SymPoly, ParseAndRender) {
  EXPECT_EQ(parse_sym_poly("(4*a1^2 - a2)/24").to_string(), "1/6*a1^2 - 1/24*a2");
  EXPECT_EQ(parse_sym_poly("-a^2"), -(SymPoly::symbol("a", 2)));
  EXPECT_EQ(parse_sym_poly("2*(x+y)^2"), parse_sym_poly("2*x^2 + 4*x*y + 2*y^2"));
  EXPECT_TRUE(parse_sym_poly("a - a").is_zero());
  EXPECT_EQ(parse_sym_poly("0").to_string(), "0");
}

TEST(SymPoly, ParseErrors) {
  EXPECT_THROW(parse_sym_poly("a +"), SymParseError);
  EXPECT_THROW(parse_sym_poly("(a"), SymParseError);
  EXPECT_THROW(parse_sym_poly("a / b"), SymParseError);
  EXPECT_THROW(parse_sym_poly("a $ b"), SymParseError);
}

TEST(SymPoly, SubstituteAndEvaluate) {
  const SymPoly p = parse_sym_poly("a*b + b^2/2");
  EXPECT_EQ(p.substitute("b", parse_sym_poly("3*a")), parse_sym_poly("3*a^2 + 9*a^2/2"));
  EXPECT_EQ(p.evaluate({{"a", 2}, {"b", 3}}), Rational(21, 2));
  EXPECT_EQ(p.common_denominator(), 2);
  EXPECT_THROW(p.evaluate({{"a", 2}}), std::out_of_range);
}

TEST(SymPoly, RingAxiomsRandom) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-5, 5), ex(0, 2);
  auto rnd = [&] {
    SymPoly p;
    for (int k = 0; k < 4; ++k)
      p += SymPoly(Rational(coef(rng), 1 + ex(rng))) * SymPoly::symbol("a", ex(rng)) *
           SymPoly::symbol("b", ex(rng));
    return p;
  };
  for (int k = 0; k < 100; ++k) {
    SymPoly x = rnd(), y = rnd(), z = rnd();
    EXPECT_EQ((x + y) * z, x * z + y * z);
    EXPECT_EQ(x * y, y * x);
    EXPECT_EQ((x * y) * z, x * (y * z));
  }
}

// ---------------------------------------------------------------- graded series

namespace {

TablePtr two_var_table() {
  return make_table({{"u", 1, std::nullopt}, {"v", 2, std::nullopt}});
}

RationalSeries random_series(std::mt19937& rng, const TablePtr& t, int trunc, bool constant_one) {
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3), present(0, 2);
  RationalSeries s = constant_one ? RationalSeries::constant(t, trunc, 1) : RationalSeries(t, trunc);
  for (std::uint8_t a = 0; a <= trunc; ++a)
    for (std::uint8_t b = 0; a + 2 * b <= trunc; ++b) {
      if (a == 0 && b == 0) continue;
      if (present(rng) == 0) continue;
      s += RationalSeries::monomial(t, trunc, {a, b}, Rational(num(rng), den(rng)));
    }
  return s;
}

}  // namespace

TEST(GradedSeries, TableValidation) {
  EXPECT_THROW(make_table({{"x", 0, std::nullopt}}), std::invalid_argument);
  EXPECT_THROW(make_table({{"x", 1, std::nullopt}, {"x", 2, std::nullopt}}), std::invalid_argument);
  EXPECT_THROW(two_var_table()->index_of("w"), std::out_of_range);
}

TEST(GradedSeries, RingAxiomsRandom) {
  std::mt19937 rng(11);
  auto t = two_var_table();
  for (int k = 0; k < 100; ++k) {
    auto a = random_series(rng, t, 5, false), b = random_series(rng, t, 5, true),
         c = random_series(rng, t, 5, false);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a - a, RationalSeries(t, 5));
  }
}

TEST(GradedSeries, InvertUnitRoundTrip) {
  std::mt19937 rng(12);
  auto t = two_var_table();
  const auto one = RationalSeries::constant(t, 6, 1);
  for (int k = 0; k < 100; ++k) {
    auto p = random_series(rng, t, 6, true);
    auto q = invert_unit(p);
    EXPECT_EQ(p * q, one);
    EXPECT_EQ(invert_unit(q), p);
  }
}

TEST(GradedSeries, ExpLogRoundTrip) {
  std::mt19937 rng(13);
  auto t = two_var_table();
  for (int k = 0; k < 100; ++k) {
    auto p = random_series(rng, t, 5, false);
    EXPECT_EQ(series_log(series_exp(p)), p);
    auto u = random_series(rng, t, 5, true);
    EXPECT_EQ(series_exp(series_log(u)), u);
  }
}

TEST(GradedSeries, ExpIsAHomomorphism) {
  std::mt19937 rng(14);
  auto t = two_var_table();
  for (int k = 0; k < 100; ++k) {
    auto a = random_series(rng, t, 5, false), b = random_series(rng, t, 5, false);
    EXPECT_EQ(series_exp(a + b), series_exp(a) * series_exp(b));
  }
}

TEST(GradedSeries, TruncationConsistency) {
  std::mt19937 rng(15);
  auto t = two_var_table();
  for (int k = 0; k < 100; ++k) {
    auto a = random_series(rng, t, 7, true), b = random_series(rng, t, 7, false);
    EXPECT_EQ((a * b).with_truncation(4), a.with_truncation(4) * b.with_truncation(4));
    EXPECT_EQ(invert_unit(a).with_truncation(3), invert_unit(a.with_truncation(3)));
  }
}

TEST(GradedSeries, NilpotencyAndDomainErrors) {
  auto t = make_table({{"h", 1, 3}});
  auto h = RationalSeries::variable(t, 10, "h");
  EXPECT_TRUE(h.pow(3).is_zero());
  EXPECT_FALSE(h.pow(2).is_zero());
  auto other = RationalSeries::variable(two_var_table(), 10, "u");
  EXPECT_THROW(h + other, std::invalid_argument);
  EXPECT_THROW(h + RationalSeries(t, 9), std::invalid_argument);
  EXPECT_THROW(invert_unit(h), std::domain_error);
  EXPECT_THROW(series_log(h), std::domain_error);
  EXPECT_THROW(series_exp(h + RationalSeries::constant(t, 10, 1)), std::domain_error);
}

TEST(GradedSeries, Rendering) {
  auto t = two_var_table();
  auto s = RationalSeries::constant(t, 4, 1) + RationalSeries::variable(t, 4, "v") * Rational(-1, 2) +
           RationalSeries::variable(t, 4, "u");
  EXPECT_EQ(s.to_string(), "1 + u - 1/2*v");
  EXPECT_EQ(RationalSeries(t, 4).to_string(), "0");
}

// ---------------------------------------------------------------- normal form

namespace {

Rational det(const IntMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(m(i, j));
  Rational d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      Rational f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return d;
}

IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int range) {
  std::uniform_int_distribution<int> d(-range, range);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

bool equal(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

}  // namespace

TEST(NormalForm, SmithProperties) {
  std::mt19937 rng(21);
  std::uniform_int_distribution<int> dim(1, 5);
  for (int k = 0; k < 150; ++k) {
    const IntMatrix a = random_matrix(rng, dim(rng), dim(rng), 9);
    const SmithDecomposition s = smith_normal_form(a);
    ASSERT_TRUE(equal(s.left * a * s.right, s.diagonal));
    EXPECT_EQ(abs(det(s.left)), 1);
    EXPECT_EQ(abs(det(s.right)), 1);
    const std::size_t n = std::min(a.rows(), a.cols());
    for (std::size_t i = 0; i < s.diagonal.rows(); ++i)
      for (std::size_t j = 0; j < s.diagonal.cols(); ++j)
        if (i != j) {
          EXPECT_EQ(s.diagonal(i, j), 0);
        }
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_GE(s.diagonal(i, i), 0);
      if (i + 1 < n && s.diagonal(i, i) != 0) {
        EXPECT_EQ(s.diagonal(i + 1, i + 1) % s.diagonal(i, i), 0);
      }
      EXPECT_EQ(s.diagonal(i, i) != 0, i < s.rank);
    }
  }
}

TEST(NormalForm, KnownDiagonal) {
  const IntMatrix a = IntMatrix::from_rows({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  const SmithDecomposition s = smith_normal_form(a);
  EXPECT_EQ(s.diagonal(0, 0), 2);
  EXPECT_EQ(s.diagonal(1, 1), 6);
  EXPECT_EQ(s.diagonal(2, 2), 12);
}

TEST(NormalForm, RowLatticeBasisSpansSameLattice) {
  std::mt19937 rng(22);
  for (int k = 0; k < 100; ++k) {
    IntMatrix a = random_matrix(rng, 5, 3, 6);
    // duplicate a combination to force dependence
    for (std::size_t j = 0; j < 3; ++j) a(4, j) = a(0, j) * 2 - a(1, j);
    const IntMatrix b = row_lattice_basis(a);
    const SmithDecomposition sa = smith_normal_form(a), sb = smith_normal_form(b);
    EXPECT_EQ(sa.rank, b.rows());
    for (std::size_t i = 0; i < sa.rank; ++i) EXPECT_EQ(sa.diagonal(i, i), sb.diagonal(i, i));
  }
}

TEST(NormalForm, SolverAgreesWithBruteForce) {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> db(-6, 6);
  int solvable = 0;
  for (int k = 0; k < 200; ++k) {
    const IntMatrix a = random_matrix(rng, 2, 2, 4);
    std::vector<Integer> b = {db(rng), db(rng)};
    bool brute = false;
    // a hit in the box proves solvability, so the solver must then succeed
    for (int x = -40; x <= 40 && !brute; ++x)
      for (int y = -40; y <= 40 && !brute; ++y)
        brute = a(0, 0) * x + a(0, 1) * y == b[0] && a(1, 0) * x + a(1, 1) * y == b[1];
    auto sol = solve_integer_system(a, b);
    if (sol) {
      ++solvable;
      EXPECT_EQ(a * *sol, b);
    }
    if (brute) {
      EXPECT_TRUE(sol.has_value());
    }
  }
  EXPECT_GT(solvable, 10);
}

TEST(NormalForm, InfeasibleParity) {
  const IntMatrix a = IntMatrix::from_rows({{2, 4}});
  EXPECT_FALSE(solve_integer_system(a, {3}).has_value());
  EXPECT_TRUE(solve_integer_system(a, {6}).has_value());
}
