#pragma once

// LJB: contexts with brackets, the cleaning rewrite system under a fixed
// normalization strategy, the three deduction rules, and scheme checking.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "posproof/error.hpp"
#include "posproof/ljplus.hpp"
#include "posproof/session.hpp"
#include "posproof/syntax.hpp"

namespace posproof {

/// An item is either a formula or a bracket [inner]_V binding the variables V.
struct Item {
  enum class Kind { Formula, Bracket };

  Kind kind = Kind::Formula;
  Formula formula;
  std::vector<std::string> binds;  // sorted, unique
  std::vector<Item> inner;
  /// Occurrence tag used to follow items through rewriting; ignored by equality.
  int tag = -1;

  static Item fml(Formula f) { return Item{Kind::Formula, std::move(f), {}, {}, -1}; }
  static Item bracket(const std::set<std::string>& v, std::vector<Item> inner) {
    return Item{Kind::Bracket, Formula{}, {v.begin(), v.end()}, std::move(inner), -1};
  }

  bool is_formula() const { return kind == Kind::Formula; }
  bool is_bracket() const { return kind == Kind::Bracket; }
  bool binds_var(const std::string& v) const { return std::binary_search(binds.begin(), binds.end(), v); }
};

/// A finite multiset of items; the vector order is presentation only.
using LJBContext = std::vector<Item>;

/// Position of an item: child indices from the root container downwards.
using Path = std::vector<int>;

struct LJBSequent {
  LJBContext context;
  Formula goal;
};

// ---------------------------------------------------------------------------
// Printing, equality, variables
// ---------------------------------------------------------------------------

std::string to_string(const Item& it);

/// Canonical rendering: items sorted by their own rendering.
inline std::string to_string(const LJBContext& ctx) {
  std::vector<std::string> parts;
  parts.reserve(ctx.size());
  for (const auto& i : ctx) parts.push_back(to_string(i));
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out;
}

inline std::string to_string(const Item& it) {
  if (it.is_formula()) return to_string(it.formula);
  std::string out = "[" + to_string(it.inner) + "]_";
  if (it.binds.size() == 1) return out + it.binds[0];
  out += "{";
  for (std::size_t i = 0; i < it.binds.size(); ++i) out += (i ? "," : "") + it.binds[i];
  return out + "}";
}

inline std::string to_string(const LJBSequent& s) {
  auto c = to_string(s.context);
  return c.empty() ? "|- " + to_string(s.goal) : c + " |- " + to_string(s.goal);
}

inline bool same_item(const Item& a, const Item& b) { return to_string(a) == to_string(b); }
inline bool same_context(const LJBContext& a, const LJBContext& b) { return to_string(a) == to_string(b); }

inline std::set<std::string> free_vars(const Item& it);

inline std::set<std::string> free_vars(const LJBContext& ctx) {
  std::set<std::string> out;
  for (const auto& i : ctx) {
    auto fv = free_vars(i);
    out.insert(fv.begin(), fv.end());
  }
  return out;
}

inline std::set<std::string> free_vars(const Item& it) {
  if (it.is_formula()) return free_vars(it.formula);
  auto fv = free_vars(it.inner);
  for (const auto& v : it.binds) fv.erase(v);
  return fv;
}

/// The formulas of ctx with all brackets erased (no renaming), in presentation order.
inline void erase_brackets(const LJBContext& ctx, std::vector<Formula>& out) {
  for (const auto& i : ctx) {
    if (i.is_formula())
      out.push_back(i.formula);
    else
      erase_brackets(i.inner, out);
  }
}

inline void collect_names(const LJBContext& ctx, std::set<std::string>& out) {
  for (const auto& i : ctx) {
    if (i.is_formula()) {
      auto n = all_var_names(i.formula);
      out.insert(n.begin(), n.end());
    } else {
      out.insert(i.binds.begin(), i.binds.end());
      collect_names(i.inner, out);
    }
  }
}

// ---------------------------------------------------------------------------
// Parsing (tests and CLI convenience)
// ---------------------------------------------------------------------------

namespace detail {

class ContextParser {
 public:
  explicit ContextParser(std::string_view s) : p_(s) {}

  LJBContext items(char close) {
    LJBContext out;
    if (p_.peek() == close) return out;
    out.push_back(item());
    while (p_.peek() == ',') {
      p_.advance();
      out.push_back(item());
    }
    return out;
  }

  LJBContext parse_all() {
    LJBContext c = items('\0');
    if (!p_.at_end()) p_.fail("unexpected trailing input");
    return c;
  }

  LJBSequent parse_sequent() {
    LJBContext c;
    p_.skip_ws();
    if (p_.peek() != '|') c = items('|');
    p_.expect('|');
    p_.expect('-');
    Formula g = p_.parse_impl();
    if (!p_.at_end()) p_.fail("unexpected trailing input");
    return {std::move(c), std::move(g)};
  }

 private:
  Item item() {
    if (p_.peek() == '[') {
      p_.advance();
      LJBContext inner = items(']');
      p_.expect(']');
      p_.expect('_');
      std::set<std::string> v;
      if (p_.peek() == '{') {
        p_.advance();
        v.insert(p_.ident("variable"));
        while (p_.peek() == ',') {
          p_.advance();
          v.insert(p_.ident("variable"));
        }
        p_.expect('}');
      } else {
        v.insert(p_.ident("variable"));
      }
      return Item::bracket(v, std::move(inner));
    }
    return Item::fml(p_.parse_impl());
  }

  FormulaParser p_;
};

}  // namespace detail

/// Parses `A, [B, C]_x, [D]_{x,y}`.
inline LJBContext parse_context(std::string_view text) { return detail::ContextParser(text).parse_all(); }

/// Parses `context |- goal` (context may be empty).
inline LJBSequent parse_ljb_sequent(std::string_view text) { return detail::ContextParser(text).parse_sequent(); }

// ---------------------------------------------------------------------------
// Paths and tags
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<Item>& container_at(LJBContext& root, const Path& p, std::size_t depth) {
  std::vector<Item>* c = &root;
  for (std::size_t i = 0; i < depth; ++i) {
    if (p[i] < 0 || static_cast<std::size_t>(p[i]) >= c->size() || !(*c)[p[i]].is_bracket())
      throw InconsistentTrace("path does not address a bracket");
    c = &(*c)[p[i]].inner;
  }
  return *c;
}

inline Item& item_at(LJBContext& root, const Path& p) {
  if (p.empty()) throw InconsistentTrace("empty path");
  auto& c = container_at(root, p, p.size() - 1);
  if (p.back() < 0 || static_cast<std::size_t>(p.back()) >= c.size()) throw InconsistentTrace("path out of range");
  return c[p.back()];
}

inline bool find_tag(const LJBContext& c, int tag, Path& p) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    p.push_back(static_cast<int>(i));
    if (c[i].tag == tag) return true;
    if (c[i].is_bracket() && find_tag(c[i].inner, tag, p)) return true;
    p.pop_back();
  }
  return false;
}

inline void assign_tags(LJBContext& c, int& next) {
  for (auto& i : c) {
    i.tag = next++;
    if (i.is_bracket()) assign_tags(i.inner, next);
  }
}

inline void clear_tags(LJBContext& c) {
  for (auto& i : c) {
    i.tag = -1;
    if (i.is_bracket()) clear_tags(i.inner);
  }
}

}  // namespace detail

/// Numbers every item of ctx in depth-first order; returns the tag count.
inline int assign_tags(LJBContext& ctx) {
  int next = 0;
  detail::assign_tags(ctx, next);
  return next;
}

inline Path path_of_tag(const LJBContext& ctx, int tag) {
  Path p;
  if (!detail::find_tag(ctx, tag, p)) throw InternalError("unknown item tag " + std::to_string(tag));
  return p;
}

inline const Item& item_at(const LJBContext& ctx, const Path& p) { return detail::item_at(const_cast<LJBContext&>(ctx), p); }

/// Every (path, item) pair of ctx in depth-first order.
inline void for_each_item(const LJBContext& ctx, const auto& fn, Path& prefix) {
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    prefix.push_back(static_cast<int>(i));
    fn(prefix, ctx[i]);
    if (ctx[i].is_bracket()) for_each_item(ctx[i].inner, fn, prefix);
    prefix.pop_back();
  }
}

inline void for_each_item(const LJBContext& ctx, const auto& fn) {
  Path p;
  for_each_item(ctx, fn, p);
}

inline std::string to_string(const Path& p) {
  std::string s = "/";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "/" : "") + std::to_string(p[i]);
  return s;
}

// ---------------------------------------------------------------------------
// Cleaning
// ---------------------------------------------------------------------------

enum class CleaningRule { Split, DropEmpty, Merge };

inline const char* to_string(CleaningRule r) {
  switch (r) {
    case CleaningRule::Split: return "Split";
    case CleaningRule::DropEmpty: return "DropEmpty";
    case CleaningRule::Merge: return "Merge";
  }
  return "?";
}

/// One rewrite. Split: `path` is the item leaving its bracket; it is placed
/// right after that bracket. DropEmpty: `path` is the empty bracket. Merge:
/// `path` is the occurrence kept, `other` the identical occurrence removed.
struct CleaningStep {
  CleaningRule rule;
  Path path;
  Path other;

  friend bool operator==(const CleaningStep&, const CleaningStep&) = default;
};

using CleaningTrace = std::vector<CleaningStep>;

inline constexpr std::size_t kCleaningStepCap = 1'000'000;

/// Applies one step in place. Throws InconsistentTrace if the step is not a
/// legal rewrite of ctx.
inline void apply_step(LJBContext& ctx, const CleaningStep& s) {
  switch (s.rule) {
    case CleaningRule::Split: {
      if (s.path.size() < 2) throw InconsistentTrace("Split needs an item inside a bracket");
      Path bp(s.path.begin(), s.path.end() - 1);
      Item& br = detail::item_at(ctx, bp);
      if (!br.is_bracket()) throw InconsistentTrace("Split parent is not a bracket");
      auto k = static_cast<std::size_t>(s.path.back());
      if (k >= br.inner.size()) throw InconsistentTrace("Split path out of range");
      for (const auto& v : free_vars(br.inner[k]))
        if (br.binds_var(v)) throw InconsistentTrace("Split of an item with a variable bound by the bracket");
      Item moved = std::move(br.inner[k]);
      br.inner.erase(br.inner.begin() + static_cast<std::ptrdiff_t>(k));
      auto& parent = detail::container_at(ctx, bp, bp.size() - 1);
      parent.insert(parent.begin() + bp.back() + 1, std::move(moved));
      return;
    }
    case CleaningRule::DropEmpty: {
      Item& br = detail::item_at(ctx, s.path);
      if (!br.is_bracket() || !br.inner.empty()) throw InconsistentTrace("DropEmpty on a non-empty item");
      auto& parent = detail::container_at(ctx, s.path, s.path.size() - 1);
      parent.erase(parent.begin() + s.path.back());
      return;
    }
    case CleaningRule::Merge: {
      if (s.path.size() != s.other.size() || s.path == s.other ||
          !std::equal(s.path.begin(), s.path.end() - 1, s.other.begin()))
        throw InconsistentTrace("Merge of items from different containers");
      if (!same_item(detail::item_at(ctx, s.path), detail::item_at(ctx, s.other)))
        throw InconsistentTrace("Merge of different items");
      auto& parent = detail::container_at(ctx, s.other, s.other.size() - 1);
      parent.erase(parent.begin() + s.other.back());
      return;
    }
  }
}

/// The contexts visited when replaying trace from ctx: result[0] = ctx,
/// result[i+1] = result[i] after trace[i].
inline std::vector<LJBContext> replay(const LJBContext& ctx, const CleaningTrace& trace) {
  std::vector<LJBContext> out{ctx};
  out.reserve(trace.size() + 1);
  for (const auto& s : trace) {
    LJBContext next = out.back();
    apply_step(next, s);
    out.push_back(std::move(next));
  }
  return out;
}

struct Normalized {
  LJBContext normal;
  CleaningTrace trace;
};

namespace detail {

class Normalizer {
 public:
  explicit Normalizer(LJBContext ctx) : root_(std::move(ctx)) {}

  Normalized run() {
    std::vector<int> top;
    for (const auto& i : root_) top.push_back(i.tag);
    seq(top);
    return {std::move(root_), std::move(trace_)};
  }

 private:
  Item& get(int tag) { return item_at(root_, path_of_tag(root_, tag)); }

  void step(CleaningStep s) {
    if (trace_.size() >= kCleaningStepCap) throw InternalError("cleaning exceeded the step cap");
    apply_step(root_, s);
    trace_.push_back(std::move(s));
  }

  void merge(int keep, int remove) { step({CleaningRule::Merge, path_of_tag(root_, keep), path_of_tag(root_, remove)}); }

  // Normalizes the items `tags` of one container: the first item in canonical
  // order, then the rest, then the first item's normal form is merged in.
  std::vector<int> seq(std::vector<int> tags) {
    std::vector<std::pair<std::string, int>> keyed;
    for (int t : tags) keyed.emplace_back(to_string(get(t)), t);
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<std::vector<int>> normal;
    for (const auto& [k, t] : keyed) normal.push_back(item(t));

    std::vector<int> acc;
    for (std::size_t i = normal.size(); i-- > 0;) {
      std::vector<int> kept;
      for (int x : normal[i]) {
        auto hit = std::find_if(acc.begin(), acc.end(), [&](int r) { return same_item(get(r), get(x)); });
        if (hit != acc.end())
          merge(*hit, x);
        else
          kept.push_back(x);
      }
      acc.insert(acc.begin(), kept.begin(), kept.end());
    }
    return acc;
  }

  // Normal form of one item, as the list of items it became.
  std::vector<int> item(int tag) {
    if (get(tag).is_formula()) return {tag};
    std::vector<int> inner_tags;
    for (const auto& i : get(tag).inner) inner_tags.push_back(i.tag);
    std::vector<int> inner = seq(inner_tags);

    std::vector<int> out;
    for (int t : inner) {
      bool depends = false;
      const Item& br = get(tag);
      for (const auto& v : free_vars(get(t)))
        if (br.binds_var(v)) depends = true;
      if (depends) continue;
      step({CleaningRule::Split, path_of_tag(root_, t), {}});
      out.push_back(t);
    }
    if (get(tag).inner.empty()) {
      step({CleaningRule::DropEmpty, path_of_tag(root_, tag), {}});
      return out;
    }
    auto hit = std::find_if(out.begin(), out.end(), [&](int s) { return same_item(get(s), get(tag)); });
    if (hit != out.end()) {
      merge(*hit, tag);
      return out;
    }
    out.insert(out.begin(), tag);
    return out;
  }

  LJBContext root_;
  CleaningTrace trace_;
};

}  // namespace detail

/// Normal form of ctx under the cleaning rules, with the single steps taken.
/// Items of the result carry the depth-first tags of the input's items.
inline Normalized normalize(const LJBContext& ctx) {
  LJBContext work = ctx;
  assign_tags(work);
  return detail::Normalizer(std::move(work)).run();
}

inline bool is_normal(const LJBContext& ctx) { return normalize(ctx).trace.empty(); }

// ---------------------------------------------------------------------------
// Deduction rules
// ---------------------------------------------------------------------------

/// One way to bring a formula with the goal atom as head to the surface.
struct Exposure {
  int occurrence = 0;
  Path path;                 // of the exposed formula in the original context
  LJBContext restructured;   // the context with brackets flipped along the path
  Formula formula;
  /// (path in the original context, path in `restructured`) for every formula.
  std::vector<std::pair<Path, Path>> formula_map;
};

namespace detail {

inline LJBContext restructure(const LJBContext& tagged, const Path& p) {
  // containers along the path: level j holds the items of the bracket at p[0..j-1]
  std::vector<const std::vector<Item>*> level{&tagged};
  for (std::size_t j = 0; j + 1 < p.size(); ++j) level.push_back(&(*level.back())[p[j]].inner);

  auto without = [](const std::vector<Item>& c, int skip) {
    std::vector<Item> out;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (static_cast<int>(i) != skip) out.push_back(c[i]);
    return out;
  };

  const std::size_t depth = p.size();  // formula lives in level[depth-1]
  if (depth == 1) return tagged;
  // X1 = [G1]_V1, Xj = [X(j-1), Gj]_Vj
  std::vector<Item> acc = without(*level[0], p[0]);
  for (std::size_t j = 1; j < depth; ++j) {
    const Item& br = (*level[j - 1])[p[j - 1]];
    Item x = Item::bracket({br.binds.begin(), br.binds.end()}, std::move(acc));
    x.tag = br.tag;
    acc.clear();
    acc.push_back(std::move(x));
    if (j + 1 < depth) {
      auto g = without(*level[j], p[j]);
      acc.insert(acc.end(), g.begin(), g.end());
    }
  }
  auto last = without(*level[depth - 1], p[depth - 1]);
  acc.insert(acc.end(), last.begin(), last.end());
  acc.push_back((*level[depth - 1])[p[depth - 1]]);
  return acc;
}

}  // namespace detail

/// Every occurrence of a formula A1 -> ... -> An -> P, with P equal to
/// goal_atom, that the L-> rule can use, together with the restructured
/// context. Occurrences are numbered in depth-first order.
inline std::vector<Exposure> expose(const LJBContext& ctx, const Formula& goal_atom) {
  std::vector<Exposure> out;
  if (!goal_atom.is_atom()) return out;
  LJBContext tagged = ctx;
  assign_tags(tagged);
  const auto goal_fv = free_vars(goal_atom);

  std::vector<const Item*> open;  // brackets enclosing the current position
  auto visit = [&](auto&& self, const std::vector<Item>& c, Path& p) -> void {
    for (std::size_t i = 0; i < c.size(); ++i) {
      p.push_back(static_cast<int>(i));
      const Item& it = c[i];
      if (it.is_bracket()) {
        bool crosses = std::any_of(it.binds.begin(), it.binds.end(), [&](const std::string& v) { return goal_fv.contains(v); });
        if (!crosses) {
          open.push_back(&it);
          self(self, it.inner, p);
          open.pop_back();
        }
      } else if (is_negative(it.formula) && decompose_negative(it.formula).head == goal_atom) {
        Exposure e;
        e.occurrence = static_cast<int>(out.size());
        e.path = p;
        e.formula = it.formula;
        LJBContext re = detail::restructure(tagged, p);
        for_each_item(tagged, [&](const Path& from, const Item& x) {
          if (x.is_formula()) e.formula_map.emplace_back(from, path_of_tag(re, x.tag));
        });
        detail::clear_tags(re);
        e.restructured = std::move(re);
        out.push_back(std::move(e));
      }
      p.pop_back();
    }
  };
  Path p;
  visit(visit, tagged, p);
  return out;
}

inline LJBContext strip_tags(LJBContext c) {
  detail::clear_tags(c);
  return c;
}

/// Premise context of R-forall before cleaning: [ctx]_V with V the variables
/// bound in the goal.
inline LJBContext rforall_context(const LJBSequent& s) {
  if (!s.goal.is_forall()) throw GoalShapeError("R-forall needs a universally quantified goal: " + to_string(s.goal));
  auto v = bound_vars(s.goal);
  return {Item::bracket(v, s.context)};
}

/// Premise context of R-> before cleaning: ctx followed by the goal's antecedent.
inline LJBContext rimpl_context(const LJBSequent& s) {
  if (!s.goal.is_impl()) throw GoalShapeError("R-> needs an implication goal: " + to_string(s.goal));
  LJBContext c = s.context;
  c.push_back(Item::fml(s.goal.lhs()));
  return c;
}

inline LJBSequent apply_rforall(const LJBSequent& s) {
  return {strip_tags(normalize(rforall_context(s)).normal), s.goal.body()};
}

inline LJBSequent apply_rimpl(const LJBSequent& s) {
  return {strip_tags(normalize(rimpl_context(s)).normal), s.goal.rhs()};
}

/// Premises of L-> for one exposure: the cleaned restructured context against
/// each antecedent of the exposed formula.
inline std::vector<LJBSequent> lhs_premises(const Exposure& e) {
  LJBContext c = strip_tags(normalize(e.restructured).normal);
  std::vector<LJBSequent> out;
  for (const auto& a : decompose_negative(e.formula).args) out.push_back({c, a});
  return out;
}

// ---------------------------------------------------------------------------
// Schemes
// ---------------------------------------------------------------------------

/// Schemes are proof-terms whose proof variables are canonical variables.
using Scheme = ProofTerm;

/// True iff s |- pi : goal is derivable in LJB with schemes, using the
/// canonical variables registered in session.
inline bool scheme_check(const Session& session, const LJBSequent& s, const Scheme& pi) {
  const Formula& g = s.goal;
  switch (g.kind()) {
    case FormulaKind::Atom: {
      if (!pi.is_spine()) return false;
      for (const auto& e : expose(s.context, g)) {
        if (session.find_canonical(e.formula) != pi.head()) continue;
        auto prem = lhs_premises(e);
        if (prem.size() != pi.args().size()) continue;
        bool ok = true;
        for (std::size_t i = 0; ok && i < prem.size(); ++i) ok = scheme_check(session, prem[i], pi.args()[i]);
        if (ok) return true;
      }
      return false;
    }
    case FormulaKind::Forall:
      if (pi.kind() != TermKind::LamTm || pi.var() != g.var()) return false;
      return scheme_check(session, apply_rforall(s), pi.body());
    case FormulaKind::Impl:
      if (pi.kind() != TermKind::LamPf || !(pi.annot() == g.lhs()) || session.find_canonical(g.lhs()) != pi.var())
        return false;
      return scheme_check(session, apply_rimpl(s), pi.body());
  }
  return false;
}

}  // namespace posproof
