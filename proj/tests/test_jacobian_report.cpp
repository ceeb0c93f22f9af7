#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "cobcalc/jacobian.hpp"
#include "cobcalc/report.hpp"

using namespace cobcalc;
namespace fs = std::filesystem;

namespace {

SymPoly P(const std::string& s) { return parse_sym_poly(s); }

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("cobcalc-report-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(d);
  return d;
}

const CheckRecord* find(const Report& r, const std::string& id) {
  for (const auto& rec : r.records)
    if (rec.id == id) return &rec;
  return nullptr;
}

nlohmann::json strip_volatile(nlohmann::json j) {
  j.erase("timestamp");
  for (auto& r : j["records"]) r.erase("wall_time_ms");
  return j;
}

}  // namespace

// ---------------------------------------------------------------- codimension-4 replay

TEST(Jacobian, ChernClassOfMinusNormal) {
  const auto c = chern_of_minus_normal(JacobianCase::N12);
  EXPECT_EQ(theta_coefficient(c, 1), P("-a1"));
  EXPECT_EQ(theta_coefficient(c, 2), P("a1^2 - a2/2"));
  EXPECT_EQ(theta_coefficient(c, 3), P("a1*a2 - a1^3"));
  EXPECT_EQ(s3_coefficient(c, 0), P("-1"));
  EXPECT_EQ(theta_coefficient(c, 4), P("a1^4 - 3*a1^2*a2/2 + a2^2/4 - a4/24"));
  EXPECT_EQ(s3_coefficient(c, 1), P("2*a1"));
}

TEST(Jacobian, ToddClass) {
  const auto td = todd_minus_normal(JacobianCase::N12);
  EXPECT_EQ(theta_coefficient(td, 0), P("1"));
  EXPECT_EQ(theta_coefficient(td, 1), P("-a1/2"));
  EXPECT_EQ(theta_coefficient(td, 2), P("(4*a1^2 - a2)/24"));
  EXPECT_EQ(theta_coefficient(td, 3), P("(a1*a2 - 2*a1^3)/48"));
  EXPECT_EQ(theta_coefficient(td, 4), P("(144*a1^4 - 108*a1^2*a2 + 12*a2^2 + a4)/17280"));
  EXPECT_EQ(s3_coefficient(td, 1), P("-a1/720"));
  EXPECT_EQ(s3_coefficient(td, 0), P("0"));
}

TEST(Jacobian, ChernCharacter) {
  const auto ch = chern_character_chi(JacobianCase::N12);
  for (int k = 0; k < 4; ++k) EXPECT_TRUE(theta_coefficient(ch, k).is_zero());
  EXPECT_EQ(theta_coefficient(ch, 4), P("a4/24"));
  EXPECT_EQ(theta_coefficient(ch, 5), P("-a1*a4/48"));
  EXPECT_EQ(theta_coefficient(ch, 6), P("(4*a1^2 - a2)*a4/576"));
  EXPECT_EQ(theta_coefficient(ch, 7), P("(a1*a2 - 2*a1^3)*a4/1152"));
  EXPECT_EQ(theta_coefficient(ch, 8),
            P("(144*a1^4 - 108*a1^2*a2 + 12*a2^2 + a4)*a4/414720 - b*a1/3628800"));
  EXPECT_EQ(Rational(1, 414720), Rational(7, 72) / Rational(factorial(8)));
}

TEST(Jacobian, BRelationAndCoherence) {
  EXPECT_EQ(derive_b_relation(), P("35*a3*a4"));
  const auto n12 = chern_character_chi(JacobianCase::N12).map_coefficients(
      [](const SymPoly& c) { return c.substitute("b", P("35*a3*a4")); });
  EXPECT_EQ(n12, chern_character_chi(JacobianCase::N14));
  EXPECT_EQ(theta_coefficient(chern_character_chi(JacobianCase::N14), 8),
            P("(144*a1^4 - 108*a1^2*a2 + 12*a2^2 + a4)*a4/414720 - 35*a1*a3*a4/3628800"));
}

TEST(Jacobian, IntegralityConstraints) {
  const auto cs = integrality_constraints(JacobianCase::N12);
  ASSERT_EQ(cs.size(), 5u);
  const std::vector<int> exps = {0, 1, 2, 3, 3};
  for (std::size_t k = 0; k < cs.size(); ++k) {
    EXPECT_EQ(cs[k].k, static_cast<int>(k) + 4);
    EXPECT_EQ(cs[k].two_adic_exponent, exps[k]);
    EXPECT_EQ(cs[k].numerator, cs[k].scaled * SymPoly(cs[k].denominator));
  }
  EXPECT_EQ(cs[1].to_string(), "k=5: -5*a1*a4 == 0 mod 2");
}

TEST(Jacobian, ResidueSearches) {
  const auto odd = residue_search(JacobianCase::N12, {1, 2});
  EXPECT_EQ(odd.examined, 4096u);
  EXPECT_EQ(odd.modulus, 8);
  EXPECT_TRUE(odd.solutions.empty());
  EXPECT_EQ(residue_search(JacobianCase::N12, {0, 2}).solutions.size(), 768u);
  EXPECT_TRUE(residue_search(JacobianCase::N14, {2, 4}).solutions.empty());
  EXPECT_TRUE(residue_search(JacobianCase::N14, {1, 2}).solutions.empty());
  EXPECT_EQ(residue_search(JacobianCase::N14, {0, 4}).solutions.size(), 896u);
  EXPECT_THROW(residue_search(JacobianCase::N12, {0, 3}), std::invalid_argument);
}

TEST(Jacobian, CaseParsing) {
  EXPECT_EQ(parse_jacobian_case("n12"), JacobianCase::N12);
  EXPECT_EQ(parse_jacobian_case("n14"), JacobianCase::N14);
  EXPECT_THROW(parse_jacobian_case("n13"), std::invalid_argument);
}

TEST(Multiplier, Table) {
  EXPECT_EQ(theorem_multiplier(0, 3).value, Multiplier::One);
  EXPECT_EQ(theorem_multiplier(1, 5).value, Multiplier::One);
  EXPECT_EQ(theorem_multiplier(2, 6).value, Multiplier::Two);
  EXPECT_EQ(theorem_multiplier(2, 5).value, Multiplier::Unknown);
  EXPECT_EQ(theorem_multiplier(3, 40).value, Multiplier::Unknown);
  EXPECT_EQ(theorem_multiplier(4, 11).value, Multiplier::Unknown);
  EXPECT_EQ(theorem_multiplier(4, 12).value, Multiplier::Two);
  EXPECT_EQ(theorem_multiplier(4, 13).value, Multiplier::Two);
  EXPECT_EQ(theorem_multiplier(4, 14).value, Multiplier::Four);
  EXPECT_EQ(theorem_multiplier(5, 18).value, Multiplier::Two);
  EXPECT_EQ(theorem_multiplier(5, 17).value, Multiplier::Unknown);
  EXPECT_THROW(theorem_multiplier(-1, 3), std::invalid_argument);
}

TEST(Multiplier, GeneralTheoremPillarsHold) {
  for (unsigned c : admissible_c(64)) {
    if (c == 4) continue;
    const auto r = theorem_multiplier(static_cast<int>(c), static_cast<int>(4 * c - 2));
    ASSERT_EQ(r.value, Multiplier::Two) << c;
    ASSERT_TRUE(r.binomial_pillar.has_value());
    ASSERT_TRUE(r.correction_pillar.has_value());
    EXPECT_TRUE(*r.binomial_pillar && *r.correction_pillar) << c;
  }
  const auto four = theorem_multiplier(4, 14);
  ASSERT_TRUE(four.residue_pillar.has_value());
  EXPECT_TRUE(*four.residue_pillar);
}

// ---------------------------------------------------------------- reports

TEST(Report, EmptySegreRun) {
  const Report r = cmd_verify_segre(0, 3);
  EXPECT_TRUE(r.records.empty());
  EXPECT_EQ(r.exit_code(), 0);
}

TEST(Report, SegreDegreeOne) {
  const Report r = cmd_verify_segre(1, 1);
  const CheckRecord* rec = find(r, "segre-divisibility/i=1/h=1");
  ASSERT_NE(rec, nullptr);
  EXPECT_EQ(rec->status, Status::Pass);
  EXPECT_EQ(rec->formula_result, std::optional<bool>(true));
  EXPECT_NE(rec->witness.find("P1"), std::string::npos);
  EXPECT_NE(rec->witness.find("s_1 = -2"), std::string::npos);
}

TEST(Report, SegreAllPass) {
  const Report r = cmd_verify_segre(6, 3);
  EXPECT_FALSE(r.failed());
  // 18 divisibility + 6 parity + 5 decomposable + 2 generator records
  EXPECT_EQ(r.records.size(), 31u);
  EXPECT_NE(find(r, "segre-generator-mod4/i=3"), nullptr);
  EXPECT_NE(find(r, "segre-decomposable/i=6"), nullptr);
}

TEST(Report, DegreeGuard) {
  EXPECT_THROW(cmd_verify_segre(9, 1), UsageError);
  EXPECT_THROW(cmd_verify_correction(9, 1, 1), UsageError);
}

TEST(Report, CorrectionAllPass) {
  const Report r = cmd_verify_correction(6, 2, 2);
  EXPECT_FALSE(r.failed());
  EXPECT_EQ(r.records.size(), 36u);
  const CheckRecord* a = find(r, "correction/i=2/e=1/h=1");
  ASSERT_NE(a, nullptr);
  EXPECT_EQ(a->bruteforce_result, std::optional<bool>(true));
  EXPECT_EQ(a->witness, "Q = c2");
  const CheckRecord* b = find(r, "correction/i=3/e=2/h=1");
  ASSERT_NE(b, nullptr);
  EXPECT_EQ(b->formula_result, std::optional<bool>(false));
  EXPECT_EQ(b->bruteforce_result, std::optional<bool>(false));
  EXPECT_EQ(b->status, Status::Pass);
}

TEST(Report, JacobianReports) {
  const Report n12 = cmd_verify_jacobian("n12");
  EXPECT_FALSE(n12.failed());
  const CheckRecord* odd = find(n12, "residue/n12/a4=1 mod 2");
  ASSERT_NE(odd, nullptr);
  EXPECT_EQ(odd->witness, "0 solutions");
  const Report n14 = cmd_verify_jacobian("n14");
  EXPECT_FALSE(n14.failed());
  const CheckRecord* b = find(n14, "b-relation");
  ASSERT_NE(b, nullptr);
  EXPECT_EQ(b->witness, "b = 35*a3*a4");
  EXPECT_THROW(cmd_verify_jacobian("n13"), UsageError);
}

TEST(Report, ChernNumbers) {
  const Report r = cmd_chern_numbers("P2");
  ASSERT_EQ(r.records.size(), 3u);
  EXPECT_EQ(find(r, "c(2)")->witness, "c(2)[P2] = 3");
  EXPECT_EQ(find(r, "c(1,1)")->witness, "c(1,1)[P2] = 9");
  EXPECT_EQ(find(r, "s2")->witness, "s_2[P2] = 6");
  EXPECT_EQ(find(cmd_chern_numbers("H(2,2)"), "s3")->witness, "s_3[H(2,2)] = -6");
  EXPECT_EQ(cmd_chern_numbers("P3", Partition{2, 1}).records.size(), 1u);
  EXPECT_THROW(cmd_chern_numbers("P3", Partition{2}), UsageError);
  EXPECT_THROW(cmd_chern_numbers("P0"), ManifoldParseError);
}

TEST(Report, Multiplier) {
  EXPECT_EQ(find(cmd_multiplier(2, 6), "multiplier")->witness, "multiplier = 2");
  EXPECT_EQ(find(cmd_multiplier(4, 14), "multiplier")->witness, "multiplier = 4");
  EXPECT_EQ(find(cmd_multiplier(5, 18), "multiplier")->witness, "multiplier = 2");
  EXPECT_EQ(find(cmd_multiplier(3, 9), "multiplier")->witness, "multiplier = unknown");
  EXPECT_FALSE(cmd_multiplier(5, 18).failed());
}

TEST(Report, JsonSchema) {
  const nlohmann::json j = cmd_verify_correction(2, 1, 1).to_json();
  EXPECT_EQ(j.at("schema_version"), kReportSchemaVersion);
  EXPECT_EQ(j.at("tool_version"), kToolVersion);
  EXPECT_TRUE(j.at("timestamp").is_string());
  ASSERT_TRUE(j.at("records").is_array());
  const std::set<std::string> keys = {"id",      "parameters", "formula_result", "bruteforce_result",
                                      "witness", "status",     "wall_time_ms"};
  for (const auto& rec : j["records"]) {
    std::set<std::string> got;
    for (const auto& [k, v] : rec.items()) got.insert(k);
    EXPECT_EQ(got, keys);
    EXPECT_TRUE(rec["status"] == "PASS" || rec["status"] == "FAIL" || rec["status"] == "SKIP");
  }
  EXPECT_EQ(nlohmann::json::parse(cmd_multiplier(3, 3).to_json_text())["records"][0]["formula_result"],
            nullptr);
}

TEST(Report, WarmCacheRunsAreIdentical) {
  const fs::path dir = fresh_dir("determinism");
  RunOptions opts;
  opts.cache_dir = dir;
  const auto first = strip_volatile(cmd_verify_segre(5, 2, opts).to_json());
  const auto second = strip_volatile(cmd_verify_segre(5, 2, opts).to_json());
  EXPECT_EQ(first.dump(), second.dump());
  const auto c1 = strip_volatile(cmd_verify_correction(4, 1, 2, opts).to_json());
  const auto c2 = strip_volatile(cmd_verify_correction(4, 1, 2, opts).to_json());
  EXPECT_EQ(c1.dump(), c2.dump());
  fs::remove_all(dir);
}

TEST(Report, FormatsCarryTheSameRecords) {
  const Report r = cmd_verify_jacobian("n14");
  std::set<std::string> from_json;
  const nlohmann::json j = r.to_json();
  for (const auto& rec : j["records"]) from_json.insert(rec["id"].get<std::string>());
  std::set<std::string> from_md;
  std::istringstream md(r.to_markdown());
  std::string line;
  while (std::getline(md, line)) {
    if (line.rfind("| ", 0) != 0 || line.rfind("| id |", 0) == 0) continue;
    from_md.insert(line.substr(2, line.find(" | ", 2) - 2));
  }
  EXPECT_EQ(from_json, from_md);
  EXPECT_EQ(from_json.size(), r.records.size());
}

TEST(Report, CacheWriteFailureBecomesSkip) {
  const fs::path blocker = fresh_dir("blocker");
  { std::ofstream f(blocker); }
  RunOptions opts;
  opts.cache_dir = blocker / "sub";
  const Report r = cmd_verify_segre(2, 1, opts);
  const CheckRecord* skip = find(r, "cache/i=1");
  ASSERT_NE(skip, nullptr);
  EXPECT_EQ(skip->status, Status::Skip);
  EXPECT_FALSE(r.failed());
  EXPECT_EQ(find(r, "segre-divisibility/i=2/h=1")->status, Status::Pass);
  fs::remove(blocker);
}
