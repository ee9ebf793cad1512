#pragma once

// The scheme grammar: one nonterminal per reachable normalized LJB sequent.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "posproof/error.hpp"
#include "posproof/ljb.hpp"
#include "posproof/ljplus.hpp"
#include "posproof/session.hpp"
#include "posproof/syntax.hpp"
#include "posproof/util.hpp"

namespace posproof {

struct Nonterminal {
  int id = 0;
  LJBSequent sequent;
};

enum class ProductionKind { Spine, Forall, Impl };

inline const char* to_string(ProductionKind k) {
  switch (k) {
    case ProductionKind::Spine: return "spine";
    case ProductionKind::Forall: return "forall";
    case ProductionKind::Impl: return "impl";
  }
  return "?";
}

/// Spine: head is the canonical variable, premises one per argument.
/// Forall: head is the released variable. Impl: head is the canonical
/// variable of annot.
struct Production {
  int lhs = 0;
  ProductionKind kind = ProductionKind::Spine;
  std::string head;
  Formula annot;
  std::vector<int> premises;
  int occurrence = -1;
};

struct Grammar {
  int start = 0;
  std::vector<Nonterminal> nonterminals;
  std::vector<Production> productions;
  /// Canonical variable -> its formula, for every variable used by a production.
  std::map<std::string, Formula> canonical;

  std::vector<int> productions_of(int nt) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < productions.size(); ++i)
      if (productions[i].lhs == nt) out.push_back(static_cast<int>(i));
    return out;
  }
};

inline constexpr std::size_t kDefaultNonterminalCap = 10'000;

/// Saturates the sequents reachable from |- goal. The goal is first put in
/// Barendregt form; canonical variables are registered in session.
inline Grammar build_grammar(Session& session, const Formula& goal, std::size_t cap = kDefaultNonterminalCap) {
  if (!is_positive(goal)) throw NotPositive("goal is not a positive formula: " + to_string(goal));
  Formula g = ensure_distinct_binders(goal);
  session.reserve(g);

  Grammar out;
  std::unordered_map<std::string, int> ids;
  auto intern = [&](LJBSequent s) {
    auto key = to_string(s);
    if (auto it = ids.find(key); it != ids.end()) return it->second;
    if (out.nonterminals.size() >= cap)
      throw CapExceeded("grammar exceeded " + std::to_string(cap) + " nonterminals");
    int id = static_cast<int>(out.nonterminals.size());
    ids.emplace(std::move(key), id);
    out.nonterminals.push_back({id, std::move(s)});
    return id;
  };
  auto canon = [&](const Formula& f) {
    auto v = session.canonical_var(f);
    out.canonical.emplace(v, f);
    return v;
  };

  out.start = intern({{}, g});
  for (std::size_t next = 0; next < out.nonterminals.size(); ++next) {
    const int lhs = static_cast<int>(next);
    const LJBSequent s = out.nonterminals[next].sequent;
    switch (s.goal.kind()) {
      case FormulaKind::Atom:
        for (const auto& e : expose(s.context, s.goal)) {
          Production p{lhs, ProductionKind::Spine, canon(e.formula), Formula{}, {}, e.occurrence};
          for (auto& prem : lhs_premises(e)) p.premises.push_back(intern(std::move(prem)));
          out.productions.push_back(std::move(p));
        }
        break;
      case FormulaKind::Forall:
        out.productions.push_back({lhs, ProductionKind::Forall, s.goal.var(), Formula{}, {intern(apply_rforall(s))}, -1});
        break;
      case FormulaKind::Impl:
        out.productions.push_back(
            {lhs, ProductionKind::Impl, canon(s.goal.lhs()), s.goal.lhs(), {intern(apply_rimpl(s))}, -1});
        break;
    }
  }
  return out;
}

inline Grammar build_grammar(const Formula& goal, std::size_t cap = kDefaultNonterminalCap) {
  Session s;
  return build_grammar(s, goal, cap);
}

/// Nonterminals deriving at least one finite scheme (least fixpoint).
inline std::vector<bool> productive(const Grammar& g) {
  std::vector<bool> prod(g.nonterminals.size(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      if (prod[p.lhs]) continue;
      if (std::all_of(p.premises.begin(), p.premises.end(), [&](int n) { return prod[n]; })) {
        prod[p.lhs] = true;
        changed = true;
      }
    }
  }
  return prod;
}

inline bool is_inhabited(const Grammar& g) { return productive(g)[g.start]; }

namespace detail {

inline Scheme build_scheme(const Production& p, std::vector<Scheme> sub) {
  switch (p.kind) {
    case ProductionKind::Spine: return Scheme::spine(p.head, std::move(sub));
    case ProductionKind::Forall: return Scheme::lam_tm(p.head, sub[0]);
    case ProductionKind::Impl: return Scheme::lam_pf(p.head, p.annot, sub[0]);
  }
  throw InternalError("unknown production kind");
}

class SchemeEnumerator {
 public:
  explicit SchemeEnumerator(const Grammar& g) : g_(g) {
    by_lhs_.resize(g.nonterminals.size());
    for (std::size_t i = 0; i < g.productions.size(); ++i) by_lhs_[g.productions[i].lhs].push_back(i);
  }

  // All schemes of nonterminal nt with height <= h.
  const std::vector<Scheme>& run(int nt, int h) {
    auto key = std::make_pair(nt, h);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Scheme> out;
    if (h >= 1) {
      for (std::size_t pi : by_lhs_[nt]) {
        const Production& p = g_.productions[pi];
        if (p.premises.empty()) {
          out.push_back(build_scheme(p, {}));
          continue;
        }
        std::vector<std::vector<Scheme>> choices;
        for (int prem : p.premises) choices.push_back(run(prem, h - 1));
        detail::for_each_product(choices, [&](const std::vector<Scheme>& sub) { out.push_back(build_scheme(p, sub)); });
      }
    }
    canonicalize(out);
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  const Grammar& g_;
  std::vector<std::vector<std::size_t>> by_lhs_;
  std::map<std::pair<int, int>, std::vector<Scheme>> memo_;
};

}  // namespace detail

/// Every scheme derivable from the start symbol with height <= max_height,
/// sorted by printed form.
inline std::vector<Scheme> enumerate_schemes(const Grammar& g, int max_height) {
  detail::SchemeEnumerator e(g);
  return e.run(g.start, max_height);
}

/// Schemes of one nonterminal (used by tests and sampling).
inline std::vector<Scheme> enumerate_schemes(const Grammar& g, int nt, int max_height) {
  detail::SchemeEnumerator e(g);
  return e.run(nt, max_height);
}

// ---------------------------------------------------------------------------
// Inlined presentation
// ---------------------------------------------------------------------------

/// A grammar whose right-hand sides are scheme templates. A hole is a
/// zero-argument spine whose head is one of `names`.
struct TemplateGrammar {
  std::vector<std::string> names;                  // names[0] is the start symbol
  std::vector<int> sources;                        // nonterminal id behind each name
  std::vector<std::vector<Scheme>> alternatives;   // per name
};

namespace detail {

inline constexpr std::size_t kInlineLimit = 64;

// Nonterminals that stay: the start and every target of a back edge of a
// depth-first walk in production order.
inline std::set<int> loop_heads(const Grammar& g, const std::vector<bool>& live) {
  std::set<int> kept{g.start};
  std::vector<int> state(g.nonterminals.size(), 0);  // 0 new, 1 on stack, 2 done
  auto dfs = [&](auto&& self, int n) -> void {
    state[n] = 1;
    for (int pi : g.productions_of(n)) {
      const auto& p = g.productions[pi];
      if (!live[pi]) continue;
      for (int m : p.premises) {
        if (state[m] == 1)
          kept.insert(m);
        else if (state[m] == 0)
          self(self, m);
      }
    }
    state[n] = 2;
  };
  dfs(dfs, g.start);
  return kept;
}

}  // namespace detail

/// Collapses every nonterminal that is not a loop head into the right-hand
/// sides that use it, distributing over its alternatives. Unproductive
/// productions are dropped first.
inline TemplateGrammar inline_unary_chains(const Grammar& g) {
  auto prod = productive(g);
  std::vector<bool> live(g.productions.size());
  for (std::size_t i = 0; i < g.productions.size(); ++i) {
    const auto& p = g.productions[i];
    live[i] = std::all_of(p.premises.begin(), p.premises.end(), [&](int n) { return prod[n]; });
  }
  std::set<int> kept = detail::loop_heads(g, live);

  for (;;) {
    std::map<int, std::string> name;
    int k = 0;
    for (int n : kept) name[n] = n == g.start ? "S" : "S" + std::to_string(++k);

    bool overflow = false;
    std::map<int, std::vector<Scheme>> memo;
    std::function<const std::vector<Scheme>&(int)> expand = [&](int n) -> const std::vector<Scheme>& {
      if (auto it = memo.find(n); it != memo.end()) return it->second;
      std::vector<Scheme> out;
      for (int pi : g.productions_of(n)) {
        if (!live[pi]) continue;
        const auto& p = g.productions[pi];
        std::vector<std::vector<Scheme>> choices;
        for (int m : p.premises) {
          if (kept.contains(m))
            choices.push_back({Scheme::spine(name[m])});
          else
            choices.push_back(expand(m));
        }
        if (p.premises.empty())
          out.push_back(detail::build_scheme(p, {}));
        else
          detail::for_each_product(choices, [&](const std::vector<Scheme>& sub) { out.push_back(detail::build_scheme(p, sub)); });
      }
      canonicalize(out);
      if (out.size() > detail::kInlineLimit && !kept.contains(n)) overflow = true;
      return memo.emplace(n, std::move(out)).first->second;
    };

    TemplateGrammar tg;
    for (int n : kept) {
      tg.names.push_back(name[n]);
      tg.sources.push_back(n);
    }
    // keep the start symbol first
    auto s = std::find(tg.sources.begin(), tg.sources.end(), g.start) - tg.sources.begin();
    std::swap(tg.names[0], tg.names[s]);
    std::swap(tg.sources[0], tg.sources[s]);
    for (int n : tg.sources) {
      std::vector<Scheme> alts;
      for (int pi : g.productions_of(n)) {
        if (!live[pi]) continue;
        const auto& p = g.productions[pi];
        std::vector<std::vector<Scheme>> choices;
        for (int m : p.premises)
          choices.push_back(kept.contains(m) ? std::vector<Scheme>{Scheme::spine(name[m])} : expand(m));
        if (p.premises.empty())
          alts.push_back(detail::build_scheme(p, {}));
        else
          detail::for_each_product(choices, [&](const std::vector<Scheme>& sub) { alts.push_back(detail::build_scheme(p, sub)); });
      }
      canonicalize(alts);
      tg.alternatives.push_back(std::move(alts));
    }
    if (!overflow) return tg;
    // promote the oversized nonterminals and retry
    for (const auto& [n, alts] : memo)
      if (alts.size() > detail::kInlineLimit) kept.insert(n);
  }
}

/// Language of a template grammar up to max_height.
inline std::vector<Scheme> language(const TemplateGrammar& tg, int max_height) {
  std::map<std::string, int> idx;
  for (std::size_t i = 0; i < tg.names.size(); ++i) idx[tg.names[i]] = static_cast<int>(i);
  std::map<std::pair<int, int>, std::vector<Scheme>> memo;

  std::function<std::vector<Scheme>(int, int)> lang;
  std::function<std::vector<Scheme>(const Scheme&, int)> fill = [&](const Scheme& t, int h) -> std::vector<Scheme> {
    if (h < 1) return {};
    switch (t.kind()) {
      case TermKind::Spine: {
        if (t.args().empty()) {
          if (auto it = idx.find(t.head()); it != idx.end()) return lang(it->second, h);
          return {t};
        }
        std::vector<std::vector<Scheme>> choices;
        for (const auto& a : t.args()) choices.push_back(fill(a, h - 1));
        std::vector<Scheme> out;
        detail::for_each_product(choices, [&](const std::vector<Scheme>& sub) { out.push_back(Scheme::spine(t.head(), sub)); });
        return out;
      }
      case TermKind::LamTm: {
        std::vector<Scheme> out;
        for (auto& b : fill(t.body(), h - 1)) out.push_back(Scheme::lam_tm(t.var(), b));
        return out;
      }
      case TermKind::LamPf: {
        std::vector<Scheme> out;
        for (auto& b : fill(t.body(), h - 1)) out.push_back(Scheme::lam_pf(t.var(), t.annot(), b));
        return out;
      }
    }
    return {};
  };
  lang = [&](int n, int h) -> std::vector<Scheme> {
    auto key = std::make_pair(n, h);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    memo[key] = {};  // a hole directly under itself contributes nothing new
    std::vector<Scheme> out;
    for (const auto& alt : tg.alternatives[n]) {
      auto part = fill(alt, h);
      out.insert(out.end(), part.begin(), part.end());
    }
    canonicalize(out);
    return memo[key] = out;
  };
  return tg.names.empty() ? std::vector<Scheme>{} : lang(0, max_height);
}

/// Human-readable grammar: inlined productions, then the legend.
inline std::string grammar_text(const Grammar& g) {
  std::ostringstream os;
  TemplateGrammar tg = inline_unary_chains(g);
  for (std::size_t i = 0; i < tg.names.size(); ++i)
    for (const auto& alt : tg.alternatives[i]) os << tg.names[i] << " -> " << alt << '\n';
  if (tg.alternatives.empty() || tg.alternatives[0].empty()) os << "(no productive production for S)\n";
  os << "where\n";
  for (std::size_t i = 0; i < tg.names.size(); ++i)
    os << "  " << tg.names[i] << " = " << to_string(g.nonterminals[tg.sources[i]].sequent) << '\n';
  for (const auto& [v, f] : g.canonical) os << "  " << v << " : " << f << '\n';
  return os.str();
}

}  // namespace posproof
