#include <gtest/gtest.h>

#include "posproof/ljb.hpp"
#include "support.hpp"

using namespace posproof;
using testsupport::erased_multiset;
using testsupport::has_redex;

namespace {

Formula F(const char* s) { return parse_formula(s); }
LJBContext C(const char* s) { return parse_context(s); }

const char* kB = "forall y. (P(y) -> Q) -> P(y) -> Q";

std::string norm(const char* s) { return to_string(normalize(C(s)).normal); }

}  // namespace

TEST(Context, ParsePrint) {
  EXPECT_EQ(to_string(C("P, [P(x), P(x) -> Q]_x")), "P, [P(x), P(x) -> Q]_x");
  EXPECT_EQ(to_string(C("[Q]_{y,x}")), "[Q]_{x,y}");
  EXPECT_EQ(to_string(C("Q, P")), "P, Q");
  EXPECT_EQ(to_string(parse_ljb_sequent("|- P -> P")), "|- P -> P");
  EXPECT_THROW(C("[P"), ParseError);
}

TEST(Normalize, DropEmpty) {
  auto n = normalize(C("[]_x, P"));
  EXPECT_EQ(to_string(n.normal), "P");
  ASSERT_EQ(n.trace.size(), 1u);
  EXPECT_EQ(n.trace[0].rule, CleaningRule::DropEmpty);
}

TEST(Normalize, MergeDuplicateBrackets) {
  auto n = normalize(C("[P(x), P(x) -> Q]_x, [P(x), P(x) -> Q]_x"));
  EXPECT_EQ(to_string(n.normal), "[P(x), P(x) -> Q]_x");
  ASSERT_EQ(n.trace.size(), 1u);
  EXPECT_EQ(n.trace[0].rule, CleaningRule::Merge);
}

TEST(Normalize, SplitIndependentItem) {
  auto n = normalize(C("[Q, P(x)]_x"));
  EXPECT_EQ(to_string(n.normal), "Q, [P(x)]_x");
  ASSERT_EQ(n.trace.size(), 1u);
  EXPECT_EQ(n.trace[0].rule, CleaningRule::Split);
}

TEST(Normalize, Cascades) {
  // the inner bracket empties, then the outer one
  EXPECT_EQ(norm("[[Q]_y]_x"), "Q");
  // a split item meets its twin outside and merges
  EXPECT_EQ(norm("Q, [Q, P(x)]_x"), "Q, [P(x)]_x");
  // two brackets become identical only after cleaning
  EXPECT_EQ(norm("[P(x), Q]_x, [P(x)]_x"), "Q, [P(x)]_x");
  EXPECT_EQ(normalize(C("Q, [Q, P(x)]_x")).trace.size(), 2u);
}

TEST(Normalize, NormalInputHasEmptyTrace) {
  EXPECT_TRUE(is_normal(C("B, [P(x), R(x, y)]_{x,y}")));
  EXPECT_FALSE(is_normal(C("P, P")));
}

TEST(Normalize, ReplayReachesNormalForm) {
  LJBContext c = C("[Q, [P(x), Q]_y, P(x)]_x, Q, [P(x), P(x)]_x, []_z");
  auto n = normalize(c);
  auto states = replay(c, n.trace);
  EXPECT_EQ(to_string(states.back()), to_string(n.normal));
  EXPECT_FALSE(has_redex(n.normal));
}

TEST(Replay, RejectsIllegalSteps) {
  LJBContext c = C("[P(x)]_x, Q");
  EXPECT_THROW(replay(c, {{CleaningRule::Split, {0, 0}, {}}}), InconsistentTrace);
  EXPECT_THROW(replay(c, {{CleaningRule::DropEmpty, {0}, {}}}), InconsistentTrace);
  EXPECT_THROW(replay(c, {{CleaningRule::Merge, {0}, {1}}}), InconsistentTrace);
  EXPECT_THROW(replay(c, {{CleaningRule::Split, {1}, {}}}), InconsistentTrace);
}

TEST(Normalize, RandomContexts) {
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    LJBContext c = testsupport::random_context(rng, 30);
    auto n = normalize(c);
    ASSERT_FALSE(has_redex(n.normal)) << to_string(c);
    ASSERT_TRUE(normalize(n.normal).trace.empty()) << to_string(c);
    auto states = replay(c, n.trace);
    ASSERT_EQ(to_string(states.back()), to_string(n.normal));
    for (std::size_t k = 0; k < n.trace.size(); ++k) {
      auto before = erased_multiset(states[k]), after = erased_multiset(states[k + 1]);
      if (n.trace[k].rule != CleaningRule::Merge) {
        ASSERT_EQ(before, after);
        continue;
      }
      auto gone = erased_multiset({item_at(states[k], n.trace[k].other)});
      for (const auto& [f, m] : gone) before[f] -= m;
      std::erase_if(before, [](const auto& e) { return e.second == 0; });
      ASSERT_EQ(before, after);
    }
  }
}

TEST(Expose, SeparatedBracket) {
  auto es = expose(C("Q(x), [Q(x) -> P]_x"), F("P"));
  ASSERT_EQ(es.size(), 1u);
  EXPECT_EQ(es[0].formula, F("Q(x) -> P"));
  EXPECT_EQ(to_string(es[0].restructured), "Q(x) -> P, [Q(x)]_x");
  EXPECT_EQ(to_string(lhs_premises(es[0])[0]), "Q(x) -> P, [Q(x)]_x |- Q(x)");
}

TEST(Expose, TwoHeads) {
  std::string ctx = std::string("(") + kB + ") -> Q, P(y) -> Q, P(y)";
  auto es = expose(C(ctx.c_str()), F("Q"));
  ASSERT_EQ(es.size(), 2u);
  std::set<std::string> heads{to_string(es[0].formula), to_string(es[1].formula)};
  EXPECT_TRUE(heads.contains("P(y) -> Q"));
  EXPECT_TRUE(heads.contains(std::string("(") + kB + ") -> Q"));
}

TEST(Expose, NoHead) { EXPECT_TRUE(expose(C("P(y)"), F("Q")).empty()); }

TEST(Expose, SideConditionBlocksCapturedGoal) {
  // P(x) under [..]_x cannot conclude the goal P(x) of the outer scope
  EXPECT_TRUE(expose(C("[P(x), R(x, y)]_x"), F("P(x)")).empty());
  EXPECT_EQ(expose(C("[R(x, y) -> P(y)]_x"), F("P(y)")).size(), 1u);
}

TEST(Expose, DeepPathFlipsBrackets) {
  auto es = expose(C("A, [B(x), [R(x, y) -> Q, C(y)]_y]_x"), F("Q"));
  ASSERT_EQ(es.size(), 1u);
  EXPECT_EQ(es[0].path, (Path{1, 1, 0}));
  // brackets turned inside out along the path: [[A]_x, B(x)]_y, C(y), F
  LJBContext expect = {Item::bracket({"y"}, {Item::bracket({"x"}, {Item::fml(F("A"))}), Item::fml(F("B(x)"))}),
                       Item::fml(F("C(y)")), Item::fml(F("R(x, y) -> Q"))};
  EXPECT_EQ(to_string(es[0].restructured), to_string(expect));
  for (const auto& [from, to] : es[0].formula_map)
    EXPECT_EQ(item_at(C("A, [B(x), [R(x, y) -> Q, C(y)]_y]_x"), from).formula, item_at(es[0].restructured, to).formula);
}

TEST(Expose, SideConditionHoldsOnRandomContexts) {
  std::mt19937 rng(5);
  for (int i = 0; i < 200; ++i) {
    LJBContext c = normalize(testsupport::random_context(rng, 20)).normal;
    for (const char* g : {"Q", "P(x)", "P(y)", "P(z)"}) {
      Formula goal = F(g);
      for (const auto& e : expose(c, goal)) {
        // every bracket crossed on the way binds nothing free in the goal
        const LJBContext* level = &c;
        for (std::size_t k = 0; k + 1 < e.path.size(); ++k) {
          const Item& br = (*level)[e.path[k]];
          for (const auto& v : free_vars(goal)) ASSERT_FALSE(br.binds_var(v));
          level = &br.inner;
        }
        ASSERT_EQ(decompose_negative(e.formula).head, goal);
      }
    }
  }
}

TEST(Rules, RForallDropsIrrelevantBracket) {
  std::string s = std::string("(") + kB + ") -> Q |- " + kB;
  auto r = apply_rforall(parse_ljb_sequent(s.c_str()));
  EXPECT_EQ(to_string(r), std::string("(") + kB + ") -> Q |- (P(y) -> Q) -> P(y) -> Q");
}

TEST(Rules, RForallEmptyContext) {
  EXPECT_EQ(to_string(apply_rforall(parse_ljb_sequent("|- forall x. P(x)"))), "|- P(x)");
}

TEST(Rules, RForallBracketsDependentItems) {
  std::string s = std::string("(") + kB + ") -> Q, P(y) -> Q, P(y) |- " + kB;
  auto r = apply_rforall(parse_ljb_sequent(s.c_str()));
  EXPECT_EQ(to_string(r), std::string("(") + kB + ") -> Q, [P(y), P(y) -> Q]_y |- (P(y) -> Q) -> P(y) -> Q");
}

TEST(Rules, RForallBindsAllInnerQuantifiers) {
  auto c = rforall_context(parse_ljb_sequent("P(y) |- forall x. forall y. R(x, y)"));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].binds, (std::vector<std::string>{"x", "y"}));
}

TEST(Rules, RImpl) {
  std::string a = std::string("|- ((") + kB + ") -> Q) -> Q";
  EXPECT_EQ(to_string(apply_rimpl(parse_ljb_sequent(a.c_str()))), std::string("(") + kB + ") -> Q |- Q");
  EXPECT_EQ(to_string(apply_rimpl(parse_ljb_sequent("P |- (P -> Q) -> Q"))), "P, P -> Q |- Q");
  auto merged = rimpl_context(parse_ljb_sequent("A |- A -> B"));
  EXPECT_EQ(merged.size(), 2u);
  EXPECT_EQ(to_string(apply_rimpl(parse_ljb_sequent("A |- A -> B"))), "A |- B");
}

TEST(Rules, WrongGoalShape) {
  EXPECT_THROW(apply_rforall(parse_ljb_sequent("P |- P")), GoalShapeError);
  EXPECT_THROW(apply_rimpl(parse_ljb_sequent("|- forall x. P(x)")), GoalShapeError);
}

TEST(Rules, PreserveSequentDiscipline) {
  std::mt19937 rng(3);
  const char* goals[] = {"forall u. P(u) -> Q", "(P(x) -> Q) -> forall w. R(x, w)", "P(x) -> P(x)"};
  for (int i = 0; i < 100; ++i) {
    LJBContext c = normalize(testsupport::random_context(rng, 15)).normal;
    for (const char* g : goals) {
      LJBSequent s{c, F(g)};
      LJBSequent r = F(g).is_forall() ? apply_rforall(s) : apply_rimpl(s);
      EXPECT_TRUE(is_positive(r.goal));
      EXPECT_FALSE(has_redex(r.context));
      std::vector<Formula> fs;
      erase_brackets(r.context, fs);
      for (const auto& f : fs) EXPECT_TRUE(is_negative(f));
    }
  }
}

TEST(SchemeCheck, Examples) {
  Session s;
  std::string cp = s.canonical_var(F("P"));
  EXPECT_TRUE(scheme_check(s, parse_ljb_sequent("P |- P"), ProofTerm::spine(cp)));
  EXPECT_FALSE(scheme_check(s, parse_ljb_sequent("P |- Q"), ProofTerm::spine(cp)));
  EXPECT_FALSE(scheme_check(s, parse_ljb_sequent("P |- P"), ProofTerm::spine("zz")));
}

TEST(SchemeCheck, RunningExampleScheme) {
  Session s;
  Formula bq = F((std::string("(") + kB + ") -> Q").c_str());
  std::string a = s.canonical_var(bq), b = s.canonical_var(F("P(y) -> Q")), g = s.canonical_var(F("P(y)"));
  std::string text = "\\" + a + ":(" + to_string(bq) + "). (" + a + " \\y. \\" + b + ":(P(y) -> Q). \\" + g +
                     ":P(y). (" + b + " " + g + "))";
  std::string goal = std::string("|- ((") + kB + ") -> Q) -> Q";
  EXPECT_TRUE(scheme_check(s, parse_ljb_sequent(goal.c_str()), parse_term(text)));
  // swapping the roles of the two hypotheses breaks it
  std::string bad = "\\" + a + ":(" + to_string(bq) + "). (" + a + " \\y. \\" + b + ":(P(y) -> Q). \\" + g +
                    ":P(y). (" + g + " " + b + "))";
  EXPECT_FALSE(scheme_check(s, parse_ljb_sequent(goal.c_str()), parse_term(bad)));
}
