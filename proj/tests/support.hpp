#pragma once

// Shared by the unit tests and the acceptance runner.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "posproof/posproof.hpp"

namespace testsupport {

using namespace posproof;

struct CorpusEntry {
  const char* text;
  bool sysf;
  Formula formula() const { return sysf ? phi(parse_ftype(text)) : parse_formula(text); }
};

inline const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> c = {
      {"P -> P", false},
      {"((P -> Q) -> Q) -> Q", false},
      {"((forall y. (P(y) -> Q) -> (P(y) -> Q)) -> Q) -> Q", false},
      {"forall X. ((forall Y. (Y -> X) -> (Y -> X)) -> X) -> X", true},
      {"forall X. forall Y. (((Y -> X) -> (Y -> X)) -> X) -> X", true},
      {"forall X. X -> ((X -> X) -> X) -> X", true},
      {"forall X. X -> (X -> X) -> X", true},
      {"forall X. X -> (X -> X) -> (X -> X) -> X", true},
      {"P -> P -> P", false},
      {"forall x. P(x) -> P(x)", false},
      {"((forall x. P(x) -> Q) -> Q) -> Q", false},
      {"forall x. forall y. (R(x, y) -> Q) -> R(x, y) -> Q", false},
      {"Q -> forall x. P(x) -> Q", false},
      {"forall x. P(x) -> forall y. P(y) -> (P(x) -> P(y) -> Q) -> Q", false},
      {"(P(a) -> Q) -> forall x. (P(x) -> Q) -> P(x) -> Q", false},
  };
  return c;
}

// --- random LJB contexts ---------------------------------------------------

inline Formula random_negative(std::mt19937& rng) {
  static const char* atoms[] = {"P", "Q", "P(x)", "P(y)", "R(x, y)", "P(z)"};
  static const char* arrows[] = {"P(x) -> Q", "P(y) -> Q", "R(x, y) -> P(z)", "(forall x. P(x)) -> Q"};
  if (rng() % 3 == 0) return parse_formula(arrows[rng() % 4]);
  return parse_formula(atoms[rng() % 6]);
}

inline LJBContext random_context(std::mt19937& rng, int budget, int depth = 0) {
  LJBContext out;
  int n = static_cast<int>(rng() % 6);
  for (int i = 0; i < n && budget > 0; ++i) {
    if (depth < 3 && rng() % 3 == 0) {
      static const std::vector<std::set<std::string>> vs = {{"x"}, {"y"}, {"z"}, {"x", "y"}};
      int inner = 1 + static_cast<int>(rng() % static_cast<unsigned>(budget));
      LJBContext c = random_context(rng, inner - 1, depth + 1);
      budget -= 1 + static_cast<int>(c.size());
      out.push_back(Item::bracket(vs[rng() % vs.size()], std::move(c)));
    } else {
      out.push_back(Item::fml(random_negative(rng)));
      --budget;
    }
    // occasional exact duplicates give Merge something to do
    if (!out.empty() && rng() % 4 == 0 && budget > 0) {
      out.push_back(out.back());
      --budget;
    }
  }
  return out;
}

inline std::size_t item_count(const LJBContext& c) {
  std::size_t n = 0;
  for (const auto& i : c) n += 1 + (i.is_bracket() ? item_count(i.inner) : 0);
  return n;
}

// Bracket-erased formulas with multiplicity, keyed by printed form.
inline std::map<std::string, int> erased_multiset(const LJBContext& c) {
  std::vector<Formula> fs;
  erase_brackets(c, fs);
  std::map<std::string, int> m;
  for (const auto& f : fs) ++m[to_string(f)];
  return m;
}

// A redex of any cleaning rule, found by direct inspection.
inline bool has_redex(const LJBContext& c) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (to_string(c[i]) == to_string(c[j])) return true;
    if (!c[i].is_bracket()) continue;
    if (c[i].inner.empty()) return true;
    for (const auto& in : c[i].inner) {
      bool dep = false;
      for (const auto& v : free_vars(in)) dep |= c[i].binds_var(v);
      if (!dep) return true;
    }
    if (has_redex(c[i].inner)) return true;
  }
  return false;
}

}  // namespace testsupport
