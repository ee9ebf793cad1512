#pragma once

// From schemes to proof-terms: flattenings, partial duplications and the
// expansion functions F (duplication), G (cleaning) and H (schemes).

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "posproof/error.hpp"
#include "posproof/grammar.hpp"
#include "posproof/ljb.hpp"
#include "posproof/ljplus.hpp"
#include "posproof/session.hpp"
#include "posproof/syntax.hpp"
#include "posproof/util.hpp"

namespace posproof {

struct BracketRenaming {
  Path bracket;
  std::string from, to;
};

/// An LJ+ sequent obtained from an LJB sequent by renaming bracket variables
/// apart, erasing brackets and naming every formula.
struct Flattening {
  LJBSequent source;
  LJPlusSequent result;
  /// hypothesis name -> path of its formula in source.context
  std::map<std::string, Path> item_map;
  /// Filled by flatten(); flattenings derived inside H leave it empty.
  std::vector<BracketRenaming> renaming;
};

inline Flattening flatten(Session& session, const LJBSequent& seq) {
  {
    std::set<std::string> names;
    collect_names(seq.context, names);
    for (const auto& n : names) session.reserve(Formula::atom("_", {FoTerm::var(n)}));
    session.reserve(seq.goal);
  }
  Flattening out;
  out.source = seq;
  out.result.goal = seq.goal;
  int next = 0;
  auto walk = [&](auto&& self, const LJBContext& c, const VarMap& env, Path& p) -> void {
    for (std::size_t i = 0; i < c.size(); ++i) {
      p.push_back(static_cast<int>(i));
      const Item& it = c[i];
      if (it.is_formula()) {
        std::string name = "h" + std::to_string(next++);
        out.result.context.push_back({name, rename_free(it.formula, env)});
        out.item_map.emplace(name, p);
      } else {
        VarMap inner = env;
        for (const auto& v : it.binds) {
          inner[v] = session.fresh_term_var(v);
          out.renaming.push_back({p, v, inner[v]});
        }
        self(self, it.inner, inner, p);
      }
      p.pop_back();
    }
  };
  Path p;
  walk(walk, seq.context, VarMap{}, p);
  return out;
}

// ---------------------------------------------------------------------------
// F
// ---------------------------------------------------------------------------

/// How a target sequent duplicates a source sequent: the two renamings and,
/// for each source hypothesis, its copies (copy index 1 or 2, target name).
struct Duplication {
  VarMap sigma1, sigma2;
  std::map<std::string, std::vector<std::pair<int, std::string>>> copies;
  int goal_side = 1;

  const VarMap& sigma(int i) const { return i == 1 ? sigma1 : sigma2; }
};

namespace detail {

inline std::set<std::string> context_names(const NamedContext& ctx) {
  std::set<std::string> out;
  for (const auto& h : ctx) {
    out.insert(h.name);
    auto n = all_var_names(h.formula);
    out.insert(n.begin(), n.end());
  }
  return out;
}

class Duplicator {
 public:
  std::vector<ProofTerm> run(const ProofTerm& u, NamedContext& src, const Formula& a, NamedContext& dst,
                             const Formula& b, const VarMap& s1, const VarMap& s2,
                             std::map<std::string, std::vector<std::pair<int, std::string>>>& copies) {
    std::vector<ProofTerm> out;
    switch (u.kind()) {
      case TermKind::Spine: {
        // copies: the recursion below pushes onto src and dst
        const Hypothesis* hp = find_hyp(src, u.head());
        if (!hp || !is_negative(hp->formula)) return out;
        const Formula hf = hp->formula;
        NegativeShape shape = decompose_negative(hf);
        if (shape.args.size() != u.args().size()) return out;
        auto cit = copies.find(u.head());
        if (cit == copies.end()) return out;
        for (const auto& [i, name] : cit->second) {
          const VarMap& s = i == 1 ? s1 : s2;
          const Hypothesis* d = find_hyp(dst, name);
          if (!d || !alpha_eq(d->formula, rename_free(hf, s)) || !alpha_eq(rename_free(a, s), b)) continue;
          NegativeShape dshape = decompose_negative(d->formula);
          std::vector<std::vector<ProofTerm>> choices;
          for (std::size_t k = 0; k < shape.args.size(); ++k)
            choices.push_back(run(u.args()[k], src, shape.args[k], dst, dshape.args[k], s1, s2, copies));
          if (u.args().empty())
            out.push_back(ProofTerm::spine(name));
          else
            detail::for_each_product(choices, [&](const std::vector<ProofTerm>& args) { out.push_back(ProofTerm::spine(name, args)); });
        }
        break;
      }
      case TermKind::LamTm: {
        if (!a.is_forall() || !b.is_forall()) return out;
        const std::string& y = u.var();
        std::string y2 = y;
        {
          auto avoid = context_names(dst);
          auto bn = all_var_names(b);
          avoid.insert(bn.begin(), bn.end());
          if (avoid.contains(y)) y2 = fresh_name(base_name(y), avoid);
        }
        Formula a1 = subst_var(a.body(), a.var(), y);
        Formula b1 = subst_var(b.body(), b.var(), y2);
        VarMap t1 = s1, t2 = s2;
        t1[y] = y2;
        t2[y] = y2;
        if (!alpha_eq(b1, rename_free(a1, t1)) && !alpha_eq(b1, rename_free(a1, t2))) return out;
        for (auto& t : run(u.body(), src, a1, dst, b1, t1, t2, copies)) out.push_back(ProofTerm::lam_tm(y2, t));
        break;
      }
      case TermKind::LamPf: {
        if (!a.is_impl() || !b.is_impl()) return out;
        std::string al = u.var();
        if (find_hyp(dst, al)) al = fresh_name(base_name(al), context_names(dst));
        std::vector<std::pair<int, std::string>> mine;
        for (int i : {1, 2})
          if (alpha_eq(rename_free(a.lhs(), i == 1 ? s1 : s2), b.lhs())) mine.emplace_back(i, al);
        std::optional<std::vector<std::pair<int, std::string>>> saved;
        if (auto it = copies.find(u.var()); it != copies.end()) saved = it->second;
        copies[u.var()] = mine;
        src.push_back({u.var(), a.lhs()});
        dst.push_back({al, b.lhs()});
        auto body = run(u.body(), src, a.rhs(), dst, b.rhs(), s1, s2, copies);
        src.pop_back();
        dst.pop_back();
        if (saved)
          copies[u.var()] = *saved;
        else
          copies.erase(u.var());
        for (auto& t : body) out.push_back(ProofTerm::lam_pf(al, b.lhs(), t));
        break;
      }
    }
    canonicalize(out);
    return out;
  }
};

}  // namespace detail

/// F: the proofs of the partial duplication `target` induced by the proof u
/// of `source`.
inline std::vector<ProofTerm> funcF(const ProofTerm& u, const LJPlusSequent& source, const LJPlusSequent& target,
                                    const Duplication& d) {
  NamedContext src = source.context, dst = target.context;
  auto copies = d.copies;
  return detail::Duplicator{}.run(u, src, source.goal, dst, target.goal, d.sigma1, d.sigma2, copies);
}

// ---------------------------------------------------------------------------
// G
// ---------------------------------------------------------------------------

namespace detail {

// Pairs the formula occurrences of two contexts with the same rendering,
// bracket by bracket: (path in a, path in b).
inline void align(const std::vector<Item>& a, const std::vector<Item>& b, Path& pa, Path& pb,
                  std::vector<std::pair<Path, Path>>& out) {
  if (a.size() != b.size()) throw InconsistentTrace("aligned contexts differ in size");
  auto order = [](const std::vector<Item>& c) {
    std::vector<std::pair<std::string, int>> keyed;
    for (std::size_t i = 0; i < c.size(); ++i) keyed.emplace_back(to_string(c[i]), static_cast<int>(i));
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return keyed;
  };
  auto ka = order(a), kb = order(b);
  for (std::size_t i = 0; i < ka.size(); ++i) {
    if (ka[i].first != kb[i].first) throw InconsistentTrace("aligned contexts differ: " + ka[i].first + " vs " + kb[i].first);
    pa.push_back(ka[i].second);
    pb.push_back(kb[i].second);
    const Item& x = a[ka[i].second];
    if (x.is_formula())
      out.emplace_back(pa, pb);
    else
      align(x.inner, b[kb[i].second].inner, pa, pb, out);
    pa.pop_back();
    pb.pop_back();
  }
}

inline std::vector<std::pair<Path, Path>> align(const std::vector<Item>& a, const std::vector<Item>& b) {
  std::vector<std::pair<Path, Path>> out;
  Path pa, pb;
  align(a, b, pa, pb, out);
  return out;
}

inline std::vector<std::pair<Path, Path>> align_items(const Item& a, const Item& b) {
  if (to_string(a) != to_string(b)) throw InconsistentTrace("merged items differ");
  if (a.is_formula()) return {{Path{}, Path{}}};
  return align(a.inner, b.inner);
}

// hypothesis name <-> tag of the formula occurrence in `state`
struct TagIndex {
  std::map<std::string, int> tag_of;
  std::map<int, std::string> name_of;
};

inline TagIndex index_tags(const Flattening& f, const LJBContext& state) {
  auto pairs = align(state, f.source.context);
  std::map<Path, int> tag_at;
  for (const auto& [ps, pf] : pairs) tag_at[pf] = item_at(state, ps).tag;
  TagIndex ix;
  for (const auto& [name, p] : f.item_map) {
    auto it = tag_at.find(p);
    if (it == tag_at.end()) throw InconsistentTrace("flattening does not match the context");
    ix.tag_of[name] = it->second;
    ix.name_of[it->second] = name;
  }
  return ix;
}

inline void must_match(FreeVarMatcher& m, const Formula& a, const Formula& b) {
  if (!m.match(a, b)) throw InternalError("flattenings are not alpha-equivalent: " + to_string(a) + " vs " + to_string(b));
}

inline void tags_below(const Item& it, std::vector<int>& out) {
  if (it.is_formula()) {
    out.push_back(it.tag);
    return;
  }
  for (const auto& x : it.inner) tags_below(x, out);
}

inline int tag_at_rel(const Item& root, const Path& rel) {
  if (rel.empty()) return root.tag;
  const Item* cur = &root;
  for (int k : rel) cur = &cur->inner[k];
  return cur->tag;
}

}  // namespace detail

/// G: lifts a proof u of flatTarget (a flattening of the normal form) to
/// proofs of flatSource (a flattening of source), one cleaning step at a time.
inline std::vector<ProofTerm> funcG(Session& session, const ProofTerm& u, const LJBSequent& source,
                                    const CleaningTrace& trace, const Flattening& flatSource,
                                    const Flattening& flatTarget) {
  LJBContext tagged = source.context;
  assign_tags(tagged);
  const std::vector<LJBContext> states = replay(tagged, trace);
  const std::size_t n = trace.size();

  std::vector<Flattening> flat(n + 1);
  flat[0] = flatSource;
  if (n > 0) flat[n] = flatTarget;
  for (std::size_t j = 1; j < n; ++j) flat[j] = flatten(session, {strip_tags(states[j]), source.goal});
  std::vector<detail::TagIndex> ix;
  for (std::size_t j = 0; j <= n; ++j) ix.push_back(detail::index_tags(flat[j], states[j]));

  // renaming between two flattenings whose formulas correspond tag by tag
  auto rename_across = [](const LJPlusSequent& hi, const detail::TagIndex& hix, const LJPlusSequent& lo,
                          const detail::TagIndex& lix, const std::vector<ProofTerm>& ts) {
    detail::FreeVarMatcher m;
    VarMap pmap;
    for (const auto& h : hi.context) {
      const std::string& other = lix.name_of.at(hix.tag_of.at(h.name));
      pmap[h.name] = other;
      detail::must_match(m, h.formula, find_hyp(lo.context, other)->formula);
    }
    detail::must_match(m, hi.goal, lo.goal);
    std::vector<ProofTerm> out;
    for (const auto& t : ts) out.push_back(rename_term(t, pmap, m.fwd));
    return out;
  };

  std::vector<ProofTerm> cur{u};
  if (n == 0) cur = rename_across(flatTarget.result, detail::index_tags(flatTarget, states[0]), flatSource.result, ix[0], cur);
  for (std::size_t j = n; j-- > 0;) {
    const LJPlusSequent& lo = flat[j].result;      // before the step
    const LJPlusSequent& hi = flat[j + 1].result;  // after the step
    const CleaningStep& step = trace[j];
    std::vector<ProofTerm> next;

    if (step.rule != CleaningRule::Merge) {
      next = rename_across(hi, ix[j + 1], lo, ix[j], cur);
    } else {
      const Item& kept = item_at(states[j], step.path);
      const Item& gone = item_at(states[j], step.other);
      std::map<int, int> twin;  // tag in kept -> tag in gone
      for (const auto& [pk, pg] : detail::align_items(kept, gone))
        twin[detail::tag_at_rel(kept, pk)] = detail::tag_at_rel(gone, pg);

      Duplication d;
      detail::FreeVarMatcher m1, m2;
      for (const auto& h : hi.context) {
        int tag = ix[j + 1].tag_of.at(h.name);
        const std::string& c1 = ix[j].name_of.at(tag);
        d.copies[h.name].emplace_back(1, c1);
        detail::must_match(m1, h.formula, find_hyp(lo.context, c1)->formula);
        if (auto tw = twin.find(tag); tw != twin.end()) {
          const std::string& c2 = ix[j].name_of.at(tw->second);
          d.copies[h.name].emplace_back(2, c2);
          detail::must_match(m2, h.formula, find_hyp(lo.context, c2)->formula);
        }
      }
      detail::must_match(m1, hi.goal, lo.goal);
      d.sigma1 = m1.fwd;
      d.sigma2 = m1.fwd;
      for (const auto& [x, y] : m2.fwd) d.sigma2[x] = y;
      for (const auto& t : cur) {
        auto part = funcF(t, hi, lo, d);
        for (const auto& s : part) session.audit("F", term_height(t), term_height(s));
        next.insert(next.end(), part.begin(), part.end());
      }
    }
    canonicalize(next);
    cur = std::move(next);
  }
  for (const auto& t : cur) session.audit("G", term_height(u), term_height(t));
  return cur;
}

// ---------------------------------------------------------------------------
// H
// ---------------------------------------------------------------------------

namespace detail {

inline std::string hyp_at(const Flattening& f, const Path& p) {
  for (const auto& [name, q] : f.item_map)
    if (q == p) return name;
  throw InternalError("no hypothesis for path " + to_string(p));
}

inline std::vector<ProofTerm> lift(Session& session, const std::vector<ProofTerm>& ts, const LJBSequent& source,
                                   const Normalized& r, const Flattening& outer, const Flattening& inner) {
  std::vector<ProofTerm> out;
  for (const auto& t : ts) {
    auto part = funcG(session, t, source, r.trace, outer, inner);
    out.insert(out.end(), part.begin(), part.end());
  }
  canonicalize(out);
  return out;
}

}  // namespace detail

/// H: the proof-terms of flat.result denoted by the scheme pi of seq.
inline std::vector<ProofTerm> funcH(Session& session, const Scheme& pi, const LJBSequent& seq, const Flattening& flat) {
  std::vector<ProofTerm> out;
  const Formula& a = seq.goal;
  const Formula& b = flat.result.goal;
  switch (a.kind()) {
    case FormulaKind::Atom: {
      if (!pi.is_spine()) return out;
      for (const auto& e : expose(seq.context, a)) {
        if (session.find_canonical(e.formula) != pi.head()) continue;
        NegativeShape shape = decompose_negative(e.formula);
        if (shape.args.size() != pi.args().size()) continue;
        Normalized r = normalize(e.restructured);
        LJBContext star = strip_tags(r.normal);
        bool ok = true;
        for (std::size_t k = 0; ok && k < shape.args.size(); ++k)
          ok = scheme_check(session, {star, shape.args[k]}, pi.args()[k]);
        if (!ok) continue;

        std::string head = detail::hyp_at(flat, e.path);
        NegativeShape dshape = decompose_negative(find_hyp(flat.result.context, head)->formula);
        std::map<Path, Path> moved(e.formula_map.begin(), e.formula_map.end());
        std::vector<std::vector<ProofTerm>> choices;
        for (std::size_t k = 0; k < shape.args.size(); ++k) {
          Flattening outer;
          outer.source = {e.restructured, shape.args[k]};
          outer.result = {flat.result.context, dshape.args[k]};
          for (const auto& [name, p] : flat.item_map) outer.item_map[name] = moved.at(p);
          LJBSequent prem{star, shape.args[k]};
          Flattening inner = flatten(session, prem);
          choices.push_back(detail::lift(session, funcH(session, pi.args()[k], prem, inner), outer.source, r, outer, inner));
        }
        if (pi.args().empty())
          out.push_back(ProofTerm::spine(head));
        else
          detail::for_each_product(choices, [&](const std::vector<ProofTerm>& args) { out.push_back(ProofTerm::spine(head, args)); });
      }
      break;
    }
    case FormulaKind::Forall: {
      if (pi.kind() != TermKind::LamTm || !b.is_forall()) return out;
      std::string y = session.fresh_term_var(b.var());
      Flattening outer;
      outer.source = {rforall_context(seq), a.body()};
      outer.result = {flat.result.context, subst_var(b.body(), b.var(), y)};
      for (const auto& [name, p] : flat.item_map) {
        Path q{0};
        q.insert(q.end(), p.begin(), p.end());
        outer.item_map[name] = q;
      }
      Normalized r = normalize(outer.source.context);
      LJBSequent prem{strip_tags(r.normal), a.body()};
      Flattening inner = flatten(session, prem);
      for (auto& t : detail::lift(session, funcH(session, pi.body(), prem, inner), outer.source, r, outer, inner))
        out.push_back(ProofTerm::lam_tm(y, t));
      break;
    }
    case FormulaKind::Impl: {
      if (pi.kind() != TermKind::LamPf || !b.is_impl()) return out;
      std::string al = session.fresh_proof_var();
      Flattening outer;
      outer.source = {rimpl_context(seq), a.rhs()};
      outer.result = flat.result;
      outer.result.context.push_back({al, b.lhs()});
      outer.result.goal = b.rhs();
      outer.item_map = flat.item_map;
      outer.item_map[al] = Path{static_cast<int>(seq.context.size())};
      Normalized r = normalize(outer.source.context);
      LJBSequent prem{strip_tags(r.normal), a.rhs()};
      Flattening inner = flatten(session, prem);
      for (auto& t : detail::lift(session, funcH(session, pi.body(), prem, inner), outer.source, r, outer, inner))
        out.push_back(ProofTerm::lam_pf(al, b.lhs(), t));
      break;
    }
  }
  canonicalize(out);
  return out;
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

/// One representative per alpha class, sorted by printed form.
inline std::vector<ProofTerm> dedup_alpha(const std::vector<ProofTerm>& ts) {
  std::map<std::string, ProofTerm> by_key;
  for (const auto& t : ts) by_key.emplace(alpha_key(t), t);
  std::vector<ProofTerm> out;
  for (auto& [k, t] : by_key) out.push_back(t);
  canonicalize(out);
  return out;
}

struct Expansion {
  Scheme scheme;
  std::vector<ProofTerm> terms;
};

struct Enumeration {
  Grammar grammar;
  std::vector<Expansion> expansions;  // one per scheme, in scheme order
  std::vector<ProofTerm> terms;       // union, one per alpha class
};

/// Expands every scheme of `g` (built with `session`) up to max_height.
inline Enumeration expand_grammar(Session& session, Grammar g, int max_height) {
  Enumeration out;
  const LJBSequent& root = g.nonterminals[g.start].sequent;
  Flattening flat = flatten(session, root);
  std::vector<ProofTerm> all;
  for (const auto& s : enumerate_schemes(g, max_height)) {
    Expansion e{s, funcH(session, s, root, flat)};
    std::erase_if(e.terms, [&](const ProofTerm& t) { return term_height(t) > max_height; });
    all.insert(all.end(), e.terms.begin(), e.terms.end());
    out.expansions.push_back(std::move(e));
  }
  out.terms = dedup_alpha(all);
  out.grammar = std::move(g);
  return out;
}

inline Enumeration enumerate_all(const Formula& goal, int max_height, std::size_t cap = kDefaultNonterminalCap) {
  Session session;
  Grammar g = build_grammar(session, goal, cap);
  return expand_grammar(session, std::move(g), max_height);
}

/// All proof-terms of |- goal with height <= max_height, one per alpha class.
inline std::vector<ProofTerm> enumerate_terms(const Formula& goal, int max_height,
                                              std::size_t cap = kDefaultNonterminalCap) {
  return enumerate_all(goal, max_height, cap).terms;
}

}  // namespace posproof
