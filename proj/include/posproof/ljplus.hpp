#pragma once

// The LJ+ kernel: named contexts, beta-normal eta-long proof-terms, the
// derivation checker, and a brute-force bounded-height enumerator.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "posproof/error.hpp"
#include "posproof/syntax.hpp"
#include "posproof/util.hpp"

namespace posproof {

struct Hypothesis {
  std::string name;
  Formula formula;

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

using NamedContext = std::vector<Hypothesis>;

struct LJPlusSequent {
  NamedContext context;
  Formula goal;
};

inline const Hypothesis* find_hyp(const NamedContext& ctx, std::string_view name) {
  for (std::size_t i = ctx.size(); i-- > 0;)
    if (ctx[i].name == name) return &ctx[i];
  return nullptr;
}

inline std::string to_string(const LJPlusSequent& s) {
  std::ostringstream os;
  for (std::size_t i = 0; i < s.context.size(); ++i)
    os << (i ? ", " : "") << s.context[i].name << ':' << s.context[i].formula;
  os << (s.context.empty() ? "|- " : " |- ") << s.goal;
  return os.str();
}

inline Sequent erase_names(const LJPlusSequent& s) {
  Sequent out{{}, s.goal};
  for (const auto& h : s.context) out.hyps.push_back(h.formula);
  return out;
}

/// Proof variables are used once each, so renaming them is the bijection
/// induced by matching hypotheses; the check reduces to the unnamed case.
inline bool alpha_eq_sequent(const LJPlusSequent& a, const LJPlusSequent& b) {
  return alpha_eq_sequent(erase_names(a), erase_names(b));
}

// ---------------------------------------------------------------------------
// ProofTerm
// ---------------------------------------------------------------------------

enum class TermKind { Spine, LamTm, LamPf };

class ProofTerm {
 public:
  struct Node {
    TermKind kind;
    std::string name;  // head (Spine) or bound variable
    std::vector<ProofTerm> args;
    Formula annot;
    std::shared_ptr<const Node> body;
  };

  ProofTerm() : ProofTerm(spine("?")) {}

  static ProofTerm spine(std::string head, std::vector<ProofTerm> args = {}) {
    return ProofTerm(std::make_shared<const Node>(Node{TermKind::Spine, std::move(head), std::move(args), {}, nullptr}));
  }
  static ProofTerm lam_tm(std::string var, const ProofTerm& body) {
    return ProofTerm(std::make_shared<const Node>(Node{TermKind::LamTm, std::move(var), {}, {}, body.node_}));
  }
  static ProofTerm lam_pf(std::string var, Formula annot, const ProofTerm& body) {
    return ProofTerm(
        std::make_shared<const Node>(Node{TermKind::LamPf, std::move(var), {}, std::move(annot), body.node_}));
  }

  TermKind kind() const { return node_->kind; }
  bool is_spine() const { return kind() == TermKind::Spine; }
  const std::string& head() const { return node_->name; }
  const std::string& var() const { return node_->name; }
  const std::vector<ProofTerm>& args() const { return node_->args; }
  const Formula& annot() const { return node_->annot; }
  ProofTerm body() const { return ProofTerm(node_->body); }

  friend bool operator==(const ProofTerm& a, const ProofTerm& b) { return equal(a.node_.get(), b.node_.get()); }

 private:
  explicit ProofTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static bool equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (a->kind != b->kind || a->name != b->name) return false;
    switch (a->kind) {
      case TermKind::Spine:
        if (a->args.size() != b->args.size()) return false;
        for (std::size_t i = 0; i < a->args.size(); ++i)
          if (!(a->args[i] == b->args[i])) return false;
        return true;
      case TermKind::LamTm: return equal(a->body.get(), b->body.get());
      case TermKind::LamPf: return a->annot == b->annot && equal(a->body.get(), b->body.get());
    }
    return false;
  }

  std::shared_ptr<const Node> node_;
};

namespace detail {

inline void print_annot(std::ostream& os, const Formula& f) {
  if (f.is_atom()) {
    os << f;
  } else {
    os << '(' << f << ')';
  }
}

}  // namespace detail

/// `\a:T. t`, `\x. t`, `(h t1 ... tn)`; a head without arguments prints bare.
inline void print(std::ostream& os, const ProofTerm& t) {
  switch (t.kind()) {
    case TermKind::Spine:
      if (t.args().empty()) {
        os << t.head();
        return;
      }
      os << '(' << t.head();
      for (const auto& a : t.args()) {
        os << ' ';
        if (a.is_spine()) {
          print(os, a);
        } else {
          os << '(';
          print(os, a);
          os << ')';
        }
      }
      os << ')';
      return;
    case TermKind::LamTm:
      os << '\\' << t.var() << ". ";
      print(os, t.body());
      return;
    case TermKind::LamPf:
      os << '\\' << t.var() << ':';
      detail::print_annot(os, t.annot());
      os << ". ";
      print(os, t.body());
      return;
  }
}

inline std::string to_string(const ProofTerm& t) {
  std::ostringstream os;
  print(os, t);
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const ProofTerm& t) {
  print(os, t);
  return os;
}

namespace detail {

class TermParser {
 public:
  explicit TermParser(std::string_view s) : p_(s) {}

  ProofTerm parse_all() {
    ProofTerm t = term();
    if (!p_.at_end()) p_.fail("unexpected trailing input");
    return t;
  }

 private:
  ProofTerm term() {
    if (p_.peek() == '\\') {
      p_.advance();
      std::string v = p_.ident("binder");
      if (p_.peek() == ':') {
        p_.advance();
        Formula annot = p_.parse_primary();
        p_.expect('.');
        return ProofTerm::lam_pf(std::move(v), std::move(annot), term());
      }
      p_.expect('.');
      return ProofTerm::lam_tm(std::move(v), term());
    }
    return atom_or_spine();
  }

  ProofTerm atom_or_spine() {
    if (p_.peek() == '(') {
      p_.advance();
      if (p_.peek() == '\\') {
        ProofTerm t = term();
        p_.expect(')');
        return t;
      }
      std::string h = p_.ident("head");
      std::vector<ProofTerm> args;
      while (p_.peek() != ')') {
        if (p_.at_end()) p_.fail("expected ')'");
        args.push_back(argument());
      }
      p_.expect(')');
      return ProofTerm::spine(std::move(h), std::move(args));
    }
    return ProofTerm::spine(p_.ident("term"));
  }

  // an unbracketed lambda runs to the closing paren, so it must come last
  ProofTerm argument() {
    if (p_.peek() == '(') return atom_or_spine();
    if (p_.peek() == '\\') {
      ProofTerm t = term();
      if (p_.peek() != ')') p_.fail("expected ')' after lambda argument");
      return t;
    }
    return ProofTerm::spine(p_.ident("argument"));
  }

  FormulaParser p_;
};

}  // namespace detail

inline ProofTerm parse_term(std::string_view text) { return detail::TermParser(text).parse_all(); }

/// 1 for a head without arguments, otherwise 1 + the height of the tallest child.
inline int term_height(const ProofTerm& t) {
  switch (t.kind()) {
    case TermKind::Spine: {
      int m = 0;
      for (const auto& a : t.args()) m = std::max(m, term_height(a));
      return 1 + m;
    }
    case TermKind::LamTm:
    case TermKind::LamPf: return 1 + term_height(t.body());
  }
  return 1;
}

inline std::size_t term_size(const ProofTerm& t) {
  switch (t.kind()) {
    case TermKind::Spine: {
      std::size_t n = 1;
      for (const auto& a : t.args()) n += term_size(a);
      return n;
    }
    default: return 1 + term_size(t.body());
  }
}

/// Simultaneous renaming of free proof variables and free term variables.
inline ProofTerm rename_term(const ProofTerm& t, const VarMap& proof_vars, const VarMap& term_vars) {
  if (proof_vars.empty() && term_vars.empty()) return t;
  switch (t.kind()) {
    case TermKind::Spine: {
      std::vector<ProofTerm> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(rename_term(a, proof_vars, term_vars));
      auto it = proof_vars.find(t.head());
      return ProofTerm::spine(it == proof_vars.end() ? t.head() : it->second, std::move(args));
    }
    case TermKind::LamTm: {
      VarMap inner = term_vars;
      inner.erase(t.var());
      return ProofTerm::lam_tm(t.var(), rename_term(t.body(), proof_vars, inner));
    }
    case TermKind::LamPf: {
      VarMap inner = proof_vars;
      inner.erase(t.var());
      return ProofTerm::lam_pf(t.var(), rename_free(t.annot(), term_vars), rename_term(t.body(), inner, term_vars));
    }
  }
  return t;
}

/// Printed form with binders renamed canonically; equal iff alpha-equivalent.
inline std::string alpha_key(const ProofTerm& t) {
  std::ostringstream os;
  int tm = 0, pf = 0;
  auto go = [&](auto&& self, const ProofTerm& u, const VarMap& tvars, const VarMap& pvars) -> void {
    switch (u.kind()) {
      case TermKind::Spine: {
        auto it = pvars.find(u.head());
        os << '(' << (it == pvars.end() ? u.head() : it->second);
        for (const auto& a : u.args()) {
          os << ' ';
          self(self, a, tvars, pvars);
        }
        os << ')';
        return;
      }
      case TermKind::LamTm: {
        VarMap inner = tvars;
        std::string n = "$x" + std::to_string(tm++);
        inner[u.var()] = n;
        os << "\\" << n << '.';
        self(self, u.body(), inner, pvars);
        return;
      }
      case TermKind::LamPf: {
        VarMap inner = pvars;
        std::string n = "$p" + std::to_string(pf++);
        inner[u.var()] = n;
        os << "\\" << n << ':' << alpha_key(rename_free(u.annot(), tvars)) << '.';
        self(self, u.body(), tvars, inner);
        return;
      }
    }
  };
  go(go, t, {}, {});
  return os.str();
}

/// Sorts by printed form and removes exact duplicates.
inline void canonicalize(std::vector<ProofTerm>& ts) {
  std::vector<std::pair<std::string, ProofTerm>> keyed;
  keyed.reserve(ts.size());
  for (auto& t : ts) keyed.emplace_back(to_string(t), std::move(t));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  ts.clear();
  for (auto& [k, t] : keyed) ts.push_back(std::move(t));
}

/// The set of alpha-equivalence classes of ts, as sorted keys.
inline std::vector<std::string> alpha_classes(const std::vector<ProofTerm>& ts) {
  std::vector<std::string> keys;
  keys.reserve(ts.size());
  for (const auto& t : ts) keys.push_back(alpha_key(t));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

// ---------------------------------------------------------------------------
// Checking
// ---------------------------------------------------------------------------

enum class Verdict { Proves, Fails, IllFormed };

namespace detail {

inline std::set<std::string> context_free_vars(const NamedContext& ctx) {
  std::set<std::string> out;
  for (const auto& h : ctx) {
    auto fv = free_vars(h.formula);
    out.insert(fv.begin(), fv.end());
  }
  return out;
}

inline Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::IllFormed || b == Verdict::IllFormed) return Verdict::IllFormed;
  if (a == Verdict::Fails || b == Verdict::Fails) return Verdict::Fails;
  return Verdict::Proves;
}

inline Verdict classify(NamedContext& ctx, const ProofTerm& t, const Formula& goal, std::string& why) {
  switch (goal.kind()) {
    case FormulaKind::Atom: {
      if (!t.is_spine()) {
        why = "abstraction at atomic goal " + to_string(goal);
        return Verdict::IllFormed;
      }
      const Hypothesis* h = find_hyp(ctx, t.head());
      if (!h || !is_negative(h->formula)) {
        why = "unbound or non-negative head " + t.head();
        return Verdict::Fails;
      }
      NegativeShape s = decompose_negative(h->formula);
      if (s.args.size() != t.args().size()) {
        why = "head " + t.head() + " is not fully applied";
        return Verdict::IllFormed;
      }
      Verdict v = s.head == goal ? Verdict::Proves : Verdict::Fails;
      if (v == Verdict::Fails) why = "head " + t.head() + " does not conclude " + to_string(goal);
      for (std::size_t i = 0; i < s.args.size(); ++i) v = combine(v, classify(ctx, t.args()[i], s.args[i], why));
      return v;
    }
    case FormulaKind::Forall: {
      if (t.kind() != TermKind::LamTm) {
        why = "expected term abstraction at " + to_string(goal);
        return Verdict::IllFormed;
      }
      const std::string& y = t.var();
      if (context_free_vars(ctx).contains(y) || (y != goal.var() && free_vars(goal).contains(y))) {
        why = "eigenvariable " + y + " is not fresh";
        return Verdict::Fails;
      }
      return classify(ctx, t.body(), subst_var(goal.body(), goal.var(), y), why);
    }
    case FormulaKind::Impl: {
      if (t.kind() != TermKind::LamPf) {
        why = "expected proof abstraction at " + to_string(goal);
        return Verdict::IllFormed;
      }
      if (find_hyp(ctx, t.var())) {
        why = "proof variable " + t.var() + " declared twice";
        return Verdict::IllFormed;
      }
      Verdict v = alpha_eq(t.annot(), goal.lhs()) ? Verdict::Proves : Verdict::Fails;
      if (v == Verdict::Fails) why = "annotation mismatch on " + t.var();
      ctx.push_back({t.var(), goal.lhs()});
      v = combine(v, classify(ctx, t.body(), goal.rhs(), why));
      ctx.pop_back();
      return v;
    }
  }
  return Verdict::Fails;
}

}  // namespace detail

/// Checks ctx |- t : goal against the rules L->, R-forall and R->.
inline Verdict classify_proof(const NamedContext& ctx, const ProofTerm& t, const Formula& goal) {
  NamedContext work = ctx;
  std::string why;
  return detail::classify(work, t, goal, why);
}

/// True iff t is a proof of ctx |- goal. Throws IllFormedTerm when t is not
/// beta-normal eta-long for goal.
inline bool check_proof(const NamedContext& ctx, const ProofTerm& t, const Formula& goal) {
  NamedContext work = ctx;
  std::string why;
  Verdict v = detail::classify(work, t, goal, why);
  if (v == Verdict::IllFormed) throw IllFormedTerm(why);
  return v == Verdict::Proves;
}

inline bool is_eta_long(const NamedContext& ctx, const ProofTerm& t, const Formula& goal) {
  return classify_proof(ctx, t, goal) != Verdict::IllFormed;
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

namespace detail {

class OracleSearch {
 public:
  std::vector<ProofTerm> run(const NamedContext& ctx, const Formula& goal, int h) {
    if (h < 1) return {};
    std::ostringstream key;
    for (const auto& x : ctx) key << x.name << ':' << x.formula << ';';
    key << '|' << goal << '|' << h;
    auto k = key.str();
    if (auto it = memo_.find(k); it != memo_.end()) return it->second;

    std::vector<ProofTerm> out;
    switch (goal.kind()) {
      case FormulaKind::Forall: {
        std::set<std::string> avoid = all_var_names(goal);
        for (const auto& x : ctx) {
          auto n = all_var_names(x.formula);
          avoid.insert(n.begin(), n.end());
        }
        std::string y = fresh_name(base_name(goal.var()), avoid);
        for (auto& b : run(ctx, subst_var(goal.body(), goal.var(), y), h - 1)) out.push_back(ProofTerm::lam_tm(y, b));
        break;
      }
      case FormulaKind::Impl: {
        std::string a;
        for (int i = 0;; ++i) {
          a = "p" + std::to_string(i);
          if (!find_hyp(ctx, a)) break;
        }
        NamedContext next = ctx;
        next.push_back({a, goal.lhs()});
        for (auto& b : run(next, goal.rhs(), h - 1)) out.push_back(ProofTerm::lam_pf(a, goal.lhs(), b));
        break;
      }
      case FormulaKind::Atom:
        for (const auto& hyp : ctx) {
          if (!is_negative(hyp.formula)) continue;
          NegativeShape s = decompose_negative(hyp.formula);
          if (!(s.head == goal)) continue;
          if (s.args.empty()) {
            out.push_back(ProofTerm::spine(hyp.name));
            continue;
          }
          if (h < 2) continue;
          std::vector<std::vector<ProofTerm>> choices;
          bool empty = false;
          for (const auto& a : s.args) {
            choices.push_back(run(ctx, a, h - 1));
            if (choices.back().empty()) {
              empty = true;
              break;
            }
          }
          if (empty) continue;
          for_each_product(choices, [&](const std::vector<ProofTerm>& args) {
            out.push_back(ProofTerm::spine(hyp.name, args));
          });
        }
        break;
    }
    canonicalize(out);
    memo_.emplace(k, out);
    return out;
  }

 private:
  std::unordered_map<std::string, std::vector<ProofTerm>> memo_;
};

}  // namespace detail

/// All beta-normal eta-long proof-terms of seq of height <= max_height, by
/// backward application of the LJ+ rules. Sorted by printed form.
inline std::vector<ProofTerm> oracle_enumerate(const LJPlusSequent& seq, int max_height) {
  detail::OracleSearch s;
  return s.run(seq.context, seq.goal, max_height);
}

}  // namespace posproof
