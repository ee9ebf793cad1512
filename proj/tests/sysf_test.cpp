#include <gtest/gtest.h>

#include "posproof/expand.hpp"
#include "posproof/sysf.hpp"
#include "support.hpp"

using namespace posproof;

namespace {

FType Ty(const char* s) { return parse_ftype(s); }

const char* kA1 = "forall X. ((forall Y. (Y -> X) -> (Y -> X)) -> X) -> X";
const char* kA2 = "forall X. forall Y. (((Y -> X) -> (Y -> X)) -> X) -> X";

std::set<std::string> rendered(const char* type, int h) {
  std::set<std::string> out;
  for (const auto& t : enumerate_terms(phi(Ty(type)), h)) out.insert(render_sysf_term(t, {false}));
  return out;
}

}  // namespace

TEST(Phi, Variable) { EXPECT_EQ(phi(Ty("X")), parse_formula("eps(X)")); }

TEST(Phi, Identity) { EXPECT_EQ(phi(Ty("forall X. X -> X")), parse_formula("forall X. eps(X) -> eps(X)")); }

TEST(Phi, SecondExample) {
  EXPECT_EQ(phi(Ty(kA2)),
            parse_formula("forall X. forall Y. (((eps(Y) -> eps(X)) -> eps(Y) -> eps(X)) -> eps(X)) -> eps(X)"));
}

TEST(Phi, InvertsOnImage) {
  for (const char* s : {kA1, kA2, "forall X. X -> ((X -> X) -> X) -> X", "(X -> Y) -> forall Z. Z"}) {
    FType t = Ty(s);
    EXPECT_TRUE(unphi(phi(t)) == t) << s;
  }
  EXPECT_THROW(unphi(parse_formula("P(x, y)")), Error);
}

TEST(ParseType, RejectsArguments) { EXPECT_THROW(Ty("X(y) -> X"), ParseError); }

TEST(PositiveType, Examples) {
  EXPECT_TRUE(is_positive_type(Ty("forall X. X -> (X -> X) -> X")));
  EXPECT_TRUE(is_positive_type(Ty("forall X. X -> ((X -> X) -> X) -> X")));
  EXPECT_FALSE(is_positive_type(Ty("(forall X. X) -> Y")));
  EXPECT_TRUE(is_positive_type(Ty(kA1)));
}

TEST(Render, PolymorphicIdentity) {
  EXPECT_EQ(render_sysf_term(parse_term("\\x. \\a:eps(x). a")), "\\X. \\a:X. a");
  EXPECT_EQ(render_sysf_term(parse_term("\\x. \\a:eps(x). a"), {false}), "\\X. \\a. a");
}

TEST(Render, FirstExampleTwoUses) {
  // the two-use pair, Greek letters spelled a, b, g
  std::set<std::string> expected = {
      "\\X. \\a. (a \\Y1. \\b1. \\g1. (a \\Y2. \\b2. \\g2. (b1 g1)))",
      "\\X. \\a. (a \\Y1. \\b1. \\g1. (a \\Y2. \\b2. \\g2. (b2 g2)))",
  };
  auto all = rendered(kA1, 12);
  EXPECT_EQ(all.size(), 3u);
  for (const auto& p : expected) EXPECT_TRUE(all.contains(p)) << p;
  EXPECT_TRUE(all.contains("\\X. \\a. (a \\Y. \\b. \\g. (b g))"));
}

TEST(Render, SecondExampleFourTerms) {
  std::set<std::string> expected = {
      "\\X. \\Y. \\a. (a \\b1. \\g1. (a \\b2. \\g2. (b1 g1)))",
      "\\X. \\Y. \\a. (a \\b1. \\g1. (a \\b2. \\g2. (b1 g2)))",
      "\\X. \\Y. \\a. (a \\b1. \\g1. (a \\b2. \\g2. (b2 g1)))",
      "\\X. \\Y. \\a. (a \\b1. \\g1. (a \\b2. \\g2. (b2 g2)))",
  };
  auto all = rendered(kA2, 11);
  EXPECT_EQ(all.size(), 5u);
  for (const auto& p : expected) EXPECT_TRUE(all.contains(p)) << p;
}

TEST(Render, Annotations) {
  auto ts = enumerate_terms(phi(Ty(kA2)), 8);
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_EQ(render_sysf_term(ts[0]), "\\X. \\Y. \\a:(((Y -> X) -> Y -> X) -> X). (a \\b:(Y -> X). \\g:Y. (b g))");
}

TEST(Render, DistinctOnCorpus) {
  for (const auto& e : testsupport::corpus()) {
    if (!e.sysf) continue;
    auto ts = enumerate_terms(e.formula(), 10);
    std::set<std::string> seen;
    for (const auto& t : ts) EXPECT_TRUE(seen.insert(render_sysf_term(t)).second) << e.text << ": " << t;
  }
}
