#pragma once

// First-order terms and formulas of minimal predicate logic (-> and forall),
// with polarity analysis, capture-avoiding renaming and alpha-equivalence.

#include <cctype>
#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "posproof/error.hpp"

namespace posproof {

using VarMap = std::map<std::string, std::string>;

// ---------------------------------------------------------------------------
// FoTerm
// ---------------------------------------------------------------------------

struct FoTerm {
  bool is_var = true;
  std::string name;  // variable name or function symbol
  std::vector<FoTerm> args;

  static FoTerm var(std::string n) { return FoTerm{true, std::move(n), {}}; }
  static FoTerm app(std::string f, std::vector<FoTerm> a) { return FoTerm{false, std::move(f), std::move(a)}; }

  friend bool operator==(const FoTerm&, const FoTerm&) = default;
  friend std::strong_ordering operator<=>(const FoTerm& a, const FoTerm& b) {
    if (auto c = a.is_var <=> b.is_var; c != 0) return c;
    if (auto c = a.name <=> b.name; c != 0) return c;
    return std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(), b.args.end());
  }
};

inline void print(std::ostream& os, const FoTerm& t) {
  os << t.name;
  if (!t.is_var) {
    os << '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) os << ',';
      print(os, t.args[i]);
    }
    os << ')';
  }
}

inline void collect_vars(const FoTerm& t, std::set<std::string>& out) {
  if (t.is_var) {
    out.insert(t.name);
    return;
  }
  for (const auto& a : t.args) collect_vars(a, out);
}

inline FoTerm rename_vars(const FoTerm& t, const VarMap& m) {
  if (t.is_var) {
    auto it = m.find(t.name);
    return it == m.end() ? t : FoTerm::var(it->second);
  }
  FoTerm r{false, t.name, {}};
  r.args.reserve(t.args.size());
  for (const auto& a : t.args) r.args.push_back(rename_vars(a, m));
  return r;
}

// ---------------------------------------------------------------------------
// Formula
// ---------------------------------------------------------------------------

enum class FormulaKind { Atom, Impl, Forall };

class Formula {
 public:
  struct Node {
    FormulaKind kind;
    std::string name;           // predicate (Atom) or bound variable (Forall)
    std::vector<FoTerm> terms;  // Atom arguments
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;  // Impl rhs, Forall body
  };

  Formula() : Formula(atom("?")) {}

  static Formula atom(std::string pred, std::vector<FoTerm> args = {}) {
    return Formula(std::make_shared<const Node>(Node{FormulaKind::Atom, std::move(pred), std::move(args), nullptr, nullptr}));
  }
  static Formula impl(const Formula& a, const Formula& b) {
    return Formula(std::make_shared<const Node>(Node{FormulaKind::Impl, {}, {}, a.node_, b.node_}));
  }
  static Formula forall(std::string var, const Formula& body) {
    return Formula(std::make_shared<const Node>(Node{FormulaKind::Forall, std::move(var), {}, nullptr, body.node_}));
  }

  FormulaKind kind() const { return node_->kind; }
  bool is_atom() const { return kind() == FormulaKind::Atom; }
  bool is_impl() const { return kind() == FormulaKind::Impl; }
  bool is_forall() const { return kind() == FormulaKind::Forall; }

  const std::string& predicate() const { return node_->name; }
  const std::vector<FoTerm>& args() const { return node_->terms; }
  Formula lhs() const { return Formula(node_->lhs); }
  Formula rhs() const { return Formula(node_->rhs); }
  const std::string& var() const { return node_->name; }
  Formula body() const { return Formula(node_->rhs); }

  friend bool operator==(const Formula& a, const Formula& b) { return compare(a, b) == 0; }
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) { return compare(a, b) <=> 0; }

  static int compare(const Formula& a, const Formula& b) { return compare_nodes(a.node_.get(), b.node_.get()); }

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static int compare_nodes(const Node* a, const Node* b) {
    if (a == b) return 0;
    if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
    switch (a->kind) {
      case FormulaKind::Atom: {
        if (auto c = a->name.compare(b->name); c != 0) return c < 0 ? -1 : 1;
        auto c = std::lexicographical_compare_three_way(a->terms.begin(), a->terms.end(), b->terms.begin(),
                                                        b->terms.end());
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
      }
      case FormulaKind::Impl:
        if (int c = compare_nodes(a->lhs.get(), b->lhs.get()); c != 0) return c;
        return compare_nodes(a->rhs.get(), b->rhs.get());
      case FormulaKind::Forall:
        if (auto c = a->name.compare(b->name); c != 0) return c < 0 ? -1 : 1;
        return compare_nodes(a->rhs.get(), b->rhs.get());
    }
    return 0;
  }

  std::shared_ptr<const Node> node_;
};

inline void print(std::ostream& os, const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      os << f.predicate();
      if (!f.args().empty()) {
        os << '(';
        for (std::size_t i = 0; i < f.args().size(); ++i) {
          if (i) os << ',';
          print(os, f.args()[i]);
        }
        os << ')';
      }
      return;
    case FormulaKind::Impl: {
      Formula l = f.lhs();
      if (l.is_atom()) {
        print(os, l);
      } else {
        os << '(';
        print(os, l);
        os << ')';
      }
      os << " -> ";
      print(os, f.rhs());
      return;
    }
    case FormulaKind::Forall:
      os << "forall " << f.var() << ". ";
      print(os, f.body());
      return;
  }
}

inline std::string to_string(const Formula& f) {
  std::ostringstream os;
  print(os, f);
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Formula& f) {
  print(os, f);
  return os;
}

inline std::size_t formula_size(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom: return 1;
    case FormulaKind::Impl: return 1 + formula_size(f.lhs()) + formula_size(f.rhs());
    case FormulaKind::Forall: return 1 + formula_size(f.body());
  }
  return 1;
}

// ---------------------------------------------------------------------------
// Variables
// ---------------------------------------------------------------------------

namespace detail {

inline void free_vars_into(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind()) {
    case FormulaKind::Atom: {
      std::set<std::string> vs;
      for (const auto& t : f.args()) collect_vars(t, vs);
      for (const auto& v : vs)
        if (!bound.contains(v)) out.insert(v);
      return;
    }
    case FormulaKind::Impl:
      free_vars_into(f.lhs(), bound, out);
      free_vars_into(f.rhs(), bound, out);
      return;
    case FormulaKind::Forall: {
      bool fresh = bound.insert(f.var()).second;
      free_vars_into(f.body(), bound, out);
      if (fresh) bound.erase(f.var());
      return;
    }
  }
}

inline void names_into(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      for (const auto& t : f.args()) collect_vars(t, out);
      return;
    case FormulaKind::Impl:
      names_into(f.lhs(), out);
      names_into(f.rhs(), out);
      return;
    case FormulaKind::Forall:
      out.insert(f.var());
      names_into(f.body(), out);
      return;
  }
}

inline void binders_into(const Formula& f, std::vector<std::string>& out) {
  switch (f.kind()) {
    case FormulaKind::Atom: return;
    case FormulaKind::Impl:
      binders_into(f.lhs(), out);
      binders_into(f.rhs(), out);
      return;
    case FormulaKind::Forall:
      out.push_back(f.var());
      binders_into(f.body(), out);
      return;
  }
}

}  // namespace detail

inline std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  detail::free_vars_into(f, bound, out);
  return out;
}

/// Every variable name occurring in f, free or bound.
inline std::set<std::string> all_var_names(const Formula& f) {
  std::set<std::string> out;
  detail::names_into(f, out);
  return out;
}

/// Binder names of f in left-to-right order (with repetitions).
inline std::vector<std::string> binder_list(const Formula& f) {
  std::vector<std::string> out;
  detail::binders_into(f, out);
  return out;
}

inline std::set<std::string> bound_vars(const Formula& f) {
  auto l = binder_list(f);
  return {l.begin(), l.end()};
}

/// `base` followed by the smallest numeric suffix >= `from` not in `avoid`.
inline std::string fresh_name(const std::string& base, const std::set<std::string>& avoid, int from = 1) {
  for (int i = from;; ++i) {
    std::string n = base + std::to_string(i);
    if (!avoid.contains(n)) return n;
  }
}

/// Strips a trailing run of digits: "y12" -> "y". Keeps the name if it is all digits.
inline std::string base_name(const std::string& n) {
  std::size_t e = n.size();
  while (e > 0 && std::isdigit(static_cast<unsigned char>(n[e - 1]))) --e;
  return e == 0 ? n : n.substr(0, e);
}

/// Capture-avoiding simultaneous renaming of free variables.
inline Formula rename_free(const Formula& f, const VarMap& m) {
  if (m.empty()) return f;
  switch (f.kind()) {
    case FormulaKind::Atom: {
      std::vector<FoTerm> args;
      args.reserve(f.args().size());
      for (const auto& t : f.args()) args.push_back(rename_vars(t, m));
      return Formula::atom(f.predicate(), std::move(args));
    }
    case FormulaKind::Impl: return Formula::impl(rename_free(f.lhs(), m), rename_free(f.rhs(), m));
    case FormulaKind::Forall: {
      VarMap inner = m;
      inner.erase(f.var());
      if (inner.empty()) return f;
      auto body_free = free_vars(f.body());
      bool captured = false;
      for (const auto& [from, to] : inner)
        if (to == f.var() && body_free.contains(from)) captured = true;
      if (!captured) return Formula::forall(f.var(), rename_free(f.body(), inner));
      std::set<std::string> avoid = all_var_names(f);
      for (const auto& [from, to] : inner) {
        avoid.insert(from);
        avoid.insert(to);
      }
      std::string nv = fresh_name(base_name(f.var()), avoid);
      inner[f.var()] = nv;
      return Formula::forall(nv, rename_free(f.body(), inner));
    }
  }
  return f;
}

inline Formula subst_var(const Formula& f, const std::string& from, const std::string& to) {
  if (from == to) return f;
  return rename_free(f, VarMap{{from, to}});
}

/// Printed form with bound variables replaced by binding depth; equal iff alpha-equivalent.
inline std::string alpha_key(const Formula& f) {
  std::ostringstream os;
  std::vector<std::string> scope;
  auto term = [&](auto&& self, const FoTerm& t) -> void {
    if (t.is_var) {
      for (std::size_t i = scope.size(); i-- > 0;)
        if (scope[i] == t.name) {
          os << '#' << i;
          return;
        }
      os << t.name;
      return;
    }
    os << t.name << '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) os << ',';
      self(self, t.args[i]);
    }
    os << ')';
  };
  auto go = [&](auto&& self, const Formula& g) -> void {
    switch (g.kind()) {
      case FormulaKind::Atom:
        os << g.predicate();
        if (!g.args().empty()) {
          os << '(';
          for (std::size_t i = 0; i < g.args().size(); ++i) {
            if (i) os << ',';
            term(term, g.args()[i]);
          }
          os << ')';
        }
        return;
      case FormulaKind::Impl:
        os << '(';
        self(self, g.lhs());
        os << ">";
        self(self, g.rhs());
        os << ')';
        return;
      case FormulaKind::Forall:
        scope.push_back(g.var());
        os << "(A.";
        self(self, g.body());
        os << ')';
        scope.pop_back();
        return;
    }
  };
  go(go, f);
  return os.str();
}

inline bool alpha_eq(const Formula& a, const Formula& b) { return a == b || alpha_key(a) == alpha_key(b); }

// ---------------------------------------------------------------------------
// Polarity
// ---------------------------------------------------------------------------

enum class Polarity { PositiveOnly, NegativeOnly, Both, Neither };

inline std::pair<bool, bool> polarity_flags(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom: return {true, true};
    case FormulaKind::Impl: {
      auto [lp, ln] = polarity_flags(f.lhs());
      auto [rp, rn] = polarity_flags(f.rhs());
      return {ln && rp, lp && rn};
    }
    case FormulaKind::Forall: return {polarity_flags(f.body()).first, false};
  }
  return {false, false};
}

inline Polarity polarity(const Formula& f) {
  auto [p, n] = polarity_flags(f);
  if (p && n) return Polarity::Both;
  if (p) return Polarity::PositiveOnly;
  if (n) return Polarity::NegativeOnly;
  return Polarity::Neither;
}

inline bool is_positive(const Formula& f) { return polarity_flags(f).first; }
inline bool is_negative(const Formula& f) { return polarity_flags(f).second; }

inline const char* to_string(Polarity p) {
  switch (p) {
    case Polarity::PositiveOnly: return "positive";
    case Polarity::NegativeOnly: return "negative";
    case Polarity::Both: return "both";
    case Polarity::Neither: return "neither";
  }
  return "?";
}

/// A negative formula A1 -> ... -> An -> P.
struct NegativeShape {
  std::vector<Formula> args;
  Formula head;
};

inline NegativeShape decompose_negative(const Formula& f) {
  if (!is_negative(f)) throw NotNegative("not a negative formula: " + to_string(f));
  NegativeShape s;
  Formula cur = f;
  while (cur.is_impl()) {
    s.args.push_back(cur.lhs());
    cur = cur.rhs();
  }
  s.head = cur;
  return s;
}

inline Formula fold_negative(const std::vector<Formula>& args, const Formula& head) {
  Formula r = head;
  for (std::size_t i = args.size(); i-- > 0;) r = Formula::impl(args[i], r);
  return r;
}

// ---------------------------------------------------------------------------
// Barendregt form
// ---------------------------------------------------------------------------

/// Renames binders that clash with another binder or with a free variable.
/// Fresh names are base + numeric suffix, assigned left to right.
inline Formula ensure_distinct_binders(const Formula& f) {
  auto binders = binder_list(f);
  std::map<std::string, int> count;
  for (const auto& b : binders) ++count[b];
  auto fv = free_vars(f);
  std::set<std::string> clashing;
  for (const auto& [b, n] : count)
    if (n > 1 || fv.contains(b)) clashing.insert(b);
  if (clashing.empty()) return f;

  std::set<std::string> used = all_var_names(f);
  std::map<std::string, int> next;
  auto go = [&](auto&& self, const Formula& g, const VarMap& scope) -> Formula {
    switch (g.kind()) {
      case FormulaKind::Atom: {
        std::vector<FoTerm> args;
        for (const auto& t : g.args()) args.push_back(rename_vars(t, scope));
        return Formula::atom(g.predicate(), std::move(args));
      }
      case FormulaKind::Impl: {
        Formula l = self(self, g.lhs(), scope);  // sequenced: names are handed out left to right
        return Formula::impl(l, self(self, g.rhs(), scope));
      }
      case FormulaKind::Forall: {
        VarMap inner = scope;
        std::string nv = g.var();
        if (clashing.contains(g.var())) {
          int& k = next[g.var()];
          if (k == 0) k = 1;
          while (used.contains(g.var() + std::to_string(k))) ++k;
          nv = g.var() + std::to_string(k);
          used.insert(nv);
          ++k;
        }
        if (nv == g.var())
          inner.erase(g.var());
        else
          inner[g.var()] = nv;
        return Formula::forall(nv, self(self, g.body(), inner));
      }
    }
    return g;
  };
  return go(go, f, VarMap{});
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view s) : s_(s) {}

  Formula parse_all() {
    Formula f = parse_impl();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return f;
  }

  Formula parse_impl() {
    Formula lhs = parse_unary();
    skip_ws();
    if (s_.substr(pos_, 2) == "->") {
      pos_ += 2;
      return Formula::impl(lhs, parse_impl());
    }
    return lhs;
  }

  Formula parse_unary() {
    skip_ws();
    if (peek_keyword("forall")) {
      pos_ += 6;
      std::string v = ident("variable");
      skip_ws();
      if (pos_ >= s_.size() || s_[pos_] != '.') fail("expected '.' after bound variable");
      ++pos_;
      return Formula::forall(std::move(v), parse_impl());
    }
    return parse_primary();
  }

  Formula parse_primary() {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      Formula f = parse_impl();
      expect(')');
      return f;
    }
    std::string p = ident("formula");
    std::vector<FoTerm> args;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '(') args = term_list();
    return Formula::atom(std::move(p), std::move(args));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::size_t pos() const { return pos_; }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string ident(const char* what) {
    skip_ws();
    std::size_t b = pos_;
    if (pos_ >= s_.size() || !(std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      fail(std::string("expected ") + what);
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '\''))
      ++pos_;
    return std::string(s_.substr(b, pos_ - b));
  }

  bool peek_keyword(std::string_view kw) const {
    if (s_.substr(pos_, kw.size()) != kw) return false;
    std::size_t e = pos_ + kw.size();
    return e >= s_.size() || !(std::isalnum(static_cast<unsigned char>(s_[e])) || s_[e] == '_');
  }

  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  void advance(std::size_t n = 1) { pos_ += n; }

 private:
  std::vector<FoTerm> term_list() {
    expect('(');
    std::vector<FoTerm> out;
    out.push_back(term());
    skip_ws();
    while (pos_ < s_.size() && s_[pos_] == ',') {
      ++pos_;
      out.push_back(term());
      skip_ws();
    }
    expect(')');
    return out;
  }

  FoTerm term() {
    std::string n = ident("term");
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '(') return FoTerm::app(std::move(n), term_list());
    return FoTerm::var(std::move(n));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses `forall x. A`, `A -> B` (right-associative), `P` and `P(t1,...,tn)`.
inline Formula parse_formula(std::string_view text) { return detail::FormulaParser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Sequents and alpha-equivalence
// ---------------------------------------------------------------------------

struct Sequent {
  std::vector<Formula> hyps;
  Formula goal;
};

namespace detail {

/// Parallel walk extending an injective free-variable renaming fwd (a -> b).
class FreeVarMatcher {
 public:
  VarMap fwd, bwd;

  bool match(const Formula& a, const Formula& b) {
    std::vector<std::pair<std::string, std::string>> scope;
    return go(a, b, scope);
  }

  bool bind(const std::string& x, const std::string& y) {
    auto i = fwd.find(x);
    auto j = bwd.find(y);
    if (i != fwd.end() || j != bwd.end()) return i != fwd.end() && j != bwd.end() && i->second == y && j->second == x;
    fwd.emplace(x, y);
    bwd.emplace(y, x);
    return true;
  }

 private:
  using Scope = std::vector<std::pair<std::string, std::string>>;

  bool var(const std::string& x, const std::string& y, const Scope& scope) {
    for (std::size_t i = scope.size(); i-- > 0;) {
      bool bx = scope[i].first == x, by = scope[i].second == y;
      if (bx || by) return bx && by;
    }
    return bind(x, y);
  }

  bool term(const FoTerm& s, const FoTerm& t, const Scope& scope) {
    if (s.is_var != t.is_var) return false;
    if (s.is_var) return var(s.name, t.name, scope);
    if (s.name != t.name || s.args.size() != t.args.size()) return false;
    for (std::size_t i = 0; i < s.args.size(); ++i)
      if (!term(s.args[i], t.args[i], scope)) return false;
    return true;
  }

  bool go(const Formula& a, const Formula& b, Scope& scope) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case FormulaKind::Atom:
        if (a.predicate() != b.predicate() || a.args().size() != b.args().size()) return false;
        for (std::size_t i = 0; i < a.args().size(); ++i)
          if (!term(a.args()[i], b.args()[i], scope)) return false;
        return true;
      case FormulaKind::Impl: return go(a.lhs(), b.lhs(), scope) && go(a.rhs(), b.rhs(), scope);
      case FormulaKind::Forall: {
        scope.emplace_back(a.var(), b.var());
        bool ok = go(a.body(), b.body(), scope);
        scope.pop_back();
        return ok;
      }
    }
    return false;
  }
};

inline bool match_hyps(const std::vector<Formula>& a, const std::vector<Formula>& b, std::size_t i,
                       std::vector<bool>& used, const FreeVarMatcher& m) {
  if (i == a.size()) return true;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (used[j]) continue;
    FreeVarMatcher next = m;
    if (!next.match(a[i], b[j])) continue;
    used[j] = true;
    if (match_hyps(a, b, i + 1, used, next)) return true;
    used[j] = false;
  }
  return false;
}

}  // namespace detail

/// True iff an injective renaming of free term variables makes the two
/// sequents equal up to alpha-equivalence, with hypotheses as a multiset.
inline bool alpha_eq_sequent(const Sequent& s1, const Sequent& s2) {
  if (s1.hyps.size() != s2.hyps.size()) return false;
  detail::FreeVarMatcher m;
  if (!m.match(s1.goal, s2.goal)) return false;
  std::vector<bool> used(s2.hyps.size(), false);
  return detail::match_hyps(s1.hyps, s2.hyps, 0, used, m);
}

inline std::string to_string(const Sequent& s) {
  std::ostringstream os;
  for (std::size_t i = 0; i < s.hyps.size(); ++i) os << (i ? ", " : "") << s.hyps[i];
  os << (s.hyps.empty() ? "|- " : " |- ") << s.goal;
  return os.str();
}

}  // namespace posproof
