#include <gtest/gtest.h>

#include "posproof/ljplus.hpp"

using namespace posproof;

namespace {

Formula F(const char* s) { return parse_formula(s); }
ProofTerm T(const char* s) { return parse_term(s); }

const char* kA = "((forall y. (P(y) -> Q) -> (P(y) -> Q)) -> Q) -> Q";
const char* kB = "forall y. (P(y) -> Q) -> P(y) -> Q";

std::vector<ProofTerm> oracle(const char* goal, int h) { return oracle_enumerate({{}, F(goal)}, h); }

}  // namespace

TEST(CheckProof, AxiomWithoutArguments) {
  EXPECT_TRUE(check_proof({{"h0", F("Q")}}, T("h0"), F("Q")));
}

TEST(CheckProof, HeadMismatch) {
  EXPECT_FALSE(check_proof({{"h0", F("Q")}}, T("h0"), F("P")));
}

TEST(CheckProof, RunningExampleLeftBranch) {
  ProofTerm t = ProofTerm::lam_pf(
      "a", Formula::impl(F(kB), F("Q")),
      T("(a \\y. \\b:(P(y) -> Q). \\g:P(y). (b g))"));
  EXPECT_TRUE(check_proof({}, t, F(kA)));
}

TEST(CheckProof, UnboundHead) { EXPECT_FALSE(check_proof({}, T("\\a:P. b"), F("P -> P"))); }

TEST(CheckProof, EigenvariableMustBeFresh) {
  NamedContext ctx{{"h0", F("P(x)")}};
  EXPECT_FALSE(check_proof(ctx, T("\\x. \\a:P(x). a"), F("forall y. P(y) -> P(y)")));
  EXPECT_TRUE(check_proof(ctx, T("\\z. \\a:P(z). a"), F("forall y. P(y) -> P(y)")));
}

TEST(CheckProof, AnnotationMustMatch) {
  EXPECT_FALSE(check_proof({}, T("\\a:Q. a"), F("P -> P")));
}

TEST(CheckProof, IllFormedIsDistinct) {
  NamedContext ctx{{"f", F("P -> Q")}, {"p", F("P")}};
  EXPECT_EQ(classify_proof(ctx, T("f"), F("Q")), Verdict::IllFormed);
  EXPECT_THROW(check_proof(ctx, T("f"), F("Q")), IllFormedTerm);
  EXPECT_EQ(classify_proof({}, T("\\a:P. a"), F("Q")), Verdict::IllFormed);
  EXPECT_EQ(classify_proof(ctx, T("(f p)"), F("Q")), Verdict::Proves);
  EXPECT_EQ(classify_proof(ctx, T("(f p)"), F("P")), Verdict::Fails);
  EXPECT_FALSE(is_eta_long(ctx, T("f"), F("Q")));
  EXPECT_TRUE(is_eta_long(ctx, T("(f p)"), F("P")));
}

TEST(TermHeight, Conventions) {
  EXPECT_EQ(term_height(T("a")), 1);
  EXPECT_EQ(term_height(T("\\a:P. a")), 2);
  EXPECT_EQ(term_height(T("(f (g a) b)")), 3);
  // two nested uses of the head hypothesis of the running example
  EXPECT_EQ(term_height(T("\\a:((forall y. (P(y) -> Q) -> P(y) -> Q) -> Q). (a \\y1. \\b1:(P(y1) -> Q). \\g1:P(y1). "
                          "(a \\y2. \\b2:(P(y2) -> Q). \\g2:P(y2). (b1 g1)))")),
            11);
}

TEST(ParseTerm, RoundTrip) {
  for (const char* s : {"a", "(f a b)", "\\x. \\a:P(x). (f (g a) (\\b:Q. b))", "\\a:(P -> Q). \\b:P. (a b)"})
    EXPECT_EQ(to_string(T(s)), s);
}

TEST(ParseTerm, BareLambdaArgument) {
  EXPECT_EQ(to_string(T("(f a \\b:Q. b)")), "(f a (\\b:Q. b))");
  EXPECT_THROW(T("(f \\b:Q. b a)"), ParseError);
}

TEST(Oracle, EmptyContextAtom) { EXPECT_TRUE(oracle("Q", 5).empty()); }

TEST(Oracle, Identity) {
  EXPECT_TRUE(oracle("P -> P", 1).empty());
  auto ts = oracle("P -> P", 2);
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_TRUE(alpha_key(ts[0]) == alpha_key(T("\\a:P. a")));
}

TEST(Oracle, ChurchNumerals) {
  // \a. \f. f^n a has height n + 3
  for (int h = 1; h <= 9; ++h)
    EXPECT_EQ(oracle("P -> (P -> P) -> P", h).size(), static_cast<std::size_t>(std::max(0, h - 2))) << h;
}

TEST(Oracle, BinaryNumerals) {
  // words over {f, g} of length n: 2^(n+1) - 1 words of length <= n, height n + 4
  for (int h = 4; h <= 9; ++h)
    EXPECT_EQ(oracle("P -> (P -> P) -> (P -> P) -> P", h).size(), (std::size_t{1} << (h - 3)) - 1) << h;
}

TEST(Oracle, PeirceLikeFormulaIsEmpty) {
  // ((P -> Q) -> Q) -> Q: every use of the hypothesis needs a proof of Q
  // from P, which needs the hypothesis again; no finite term closes it
  EXPECT_TRUE(oracle("((P -> Q) -> Q) -> Q", 12).empty());
}

TEST(Oracle, RunningExampleMinimalTerm) {
  EXPECT_TRUE(oracle(kA, 6).empty());
  auto ts = oracle(kA, 10);
  ASSERT_EQ(ts.size(), 1u);
  EXPECT_EQ(term_height(ts[0]), 7);
  EXPECT_EQ(oracle(kA, 11).size(), 3u);  // one, plus the two of the doubled scheme
}

TEST(Oracle, SoundAndEtaLong) {
  for (const char* g : {kA, "P -> (P -> P) -> (P -> P) -> P", "forall x. P(x) -> (P(x) -> Q) -> Q",
                        "(P -> Q) -> (Q -> R) -> P -> R", "forall x. forall y. (R(x, y) -> Q) -> R(x, y) -> Q"}) {
    for (const auto& t : oracle(g, 9)) {
      EXPECT_TRUE(is_eta_long({}, t, F(g))) << t;
      EXPECT_TRUE(check_proof({}, t, F(g))) << t;
      EXPECT_LE(term_height(t), 9);
      EXPECT_EQ(alpha_key(parse_term(to_string(t))), alpha_key(t));
    }
  }
}

TEST(Oracle, Monotone) {
  const char* g = "P -> (P -> P -> P) -> P";
  for (int h = 1; h < 8; ++h) {
    auto small = alpha_classes(oracle(g, h));
    auto big = alpha_classes(oracle(g, h + 1));
    EXPECT_TRUE(std::includes(big.begin(), big.end(), small.begin(), small.end())) << h;
  }
}

TEST(Oracle, Deterministic) {
  auto a = oracle(kA, 11), b = oracle(kA, 11);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(RenameTerm, RespectsShadowing) {
  ProofTerm t = T("\\a:P(x). (f a b)");
  ProofTerm r = rename_term(t, {{"a", "z"}, {"b", "c"}}, {{"x", "y"}});
  EXPECT_EQ(to_string(r), "\\a:P(y). (f a c)");
}
