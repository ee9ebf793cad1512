#pragma once

// Positive System F types, their translation into formulas over the single
// unary predicate eps, and System F style rendering of proof-terms.

#include <cctype>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "posproof/error.hpp"
#include "posproof/ljplus.hpp"
#include "posproof/syntax.hpp"

namespace posproof {

inline constexpr const char* kEps = "eps";

class FType {
 public:
  enum class Kind { Var, Arrow, Forall };

  FType() : FType(var("X")) {}

  static FType var(std::string n) { return FType(std::make_shared<Node>(Node{Kind::Var, std::move(n), {}, {}})); }
  static FType arrow(const FType& a, const FType& b) { return FType(std::make_shared<Node>(Node{Kind::Arrow, {}, a.n_, b.n_})); }
  static FType forall(std::string v, const FType& body) {
    return FType(std::make_shared<Node>(Node{Kind::Forall, std::move(v), {}, body.n_}));
  }

  Kind kind() const { return n_->kind; }
  const std::string& name() const { return n_->name; }  // variable or binder
  FType lhs() const { return FType(n_->lhs); }
  FType rhs() const { return FType(n_->rhs); }
  FType body() const { return FType(n_->rhs); }

  friend bool operator==(const FType& a, const FType& b) {
    if (a.n_ == b.n_) return true;
    if (a.kind() != b.kind() || a.name() != b.name()) return false;
    switch (a.kind()) {
      case Kind::Var: return true;
      case Kind::Arrow: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
      case Kind::Forall: return a.body() == b.body();
    }
    return false;
  }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::shared_ptr<const Node> lhs, rhs;
  };
  explicit FType(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

inline void print(std::ostream& os, const FType& t) {
  switch (t.kind()) {
    case FType::Kind::Var: os << t.name(); return;
    case FType::Kind::Arrow:
      if (t.lhs().kind() == FType::Kind::Var) {
        print(os, t.lhs());
      } else {
        os << '(';
        print(os, t.lhs());
        os << ')';
      }
      os << " -> ";
      print(os, t.rhs());
      return;
    case FType::Kind::Forall:
      os << "forall " << t.name() << ". ";
      print(os, t.body());
      return;
  }
}

inline std::string to_string(const FType& t) {
  std::ostringstream os;
  print(os, t);
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const FType& t) {
  print(os, t);
  return os;
}

/// Phi: X -> eps(X), arrows and quantifiers unchanged.
inline Formula phi(const FType& t) {
  switch (t.kind()) {
    case FType::Kind::Var: return Formula::atom(kEps, {FoTerm::var(t.name())});
    case FType::Kind::Arrow: return Formula::impl(phi(t.lhs()), phi(t.rhs()));
    case FType::Kind::Forall: return Formula::forall(t.name(), phi(t.body()));
  }
  throw InternalError("unknown type kind");
}

/// Inverse of phi on its image.
inline FType unphi(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      if (f.predicate() != kEps || f.args().size() != 1 || !f.args()[0].is_var)
        throw Error("not the image of a System F type: " + to_string(f));
      return FType::var(f.args()[0].name);
    case FormulaKind::Impl: return FType::arrow(unphi(f.lhs()), unphi(f.rhs()));
    case FormulaKind::Forall: return FType::forall(f.var(), unphi(f.body()));
  }
  throw InternalError("unknown formula kind");
}

namespace detail {

inline FType from_formula(const Formula& f, std::size_t at) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      if (!f.args().empty()) throw ParseError(at, "type variables take no arguments");
      return FType::var(f.predicate());
    case FormulaKind::Impl: return FType::arrow(from_formula(f.lhs(), at), from_formula(f.rhs(), at));
    case FormulaKind::Forall: return FType::forall(f.var(), from_formula(f.body(), at));
  }
  throw InternalError("unknown formula kind");
}

}  // namespace detail

/// `forall X. T`, `->` right-associative. The formula grammar is reused; a
/// type variable is an atom without arguments.
inline FType parse_ftype(std::string_view text) {
  Formula f = parse_formula(text);
  return detail::from_formula(f, 0);
}

inline bool is_positive_type(const FType& t) { return is_positive(phi(t)); }

struct SysFRenderOptions {
  bool annotations = true;
};

namespace detail {

inline constexpr const char* kProofLetters[] = {"a", "b", "g", "d", "e", "z", "h", "q", "i", "k", "l", "m",
                                                "n", "x", "o", "p", "r", "s", "t", "u", "f", "c", "y", "w"};

inline std::string upper_first(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

class SysFRenderer {
 public:
  SysFRenderer(const ProofTerm& t, SysFRenderOptions opt) : opt_(opt) {
    collect(t, VarMap{});
    // type variables: base name, indexed when the base is bound more than once
    std::map<std::string, int> seen;
    for (const auto& v : tvars_) {
      std::string b = upper_first(base_name(v));
      tname_[v] = tcount_[b] > 1 ? b + std::to_string(++seen[b]) : b;
    }
    std::map<std::string, int> cseen;
    for (const auto& [var, cls] : pvars_) {
      const std::string& letter = letter_[cls];
      pname_[var] = ccount_[cls] > 1 ? letter + std::to_string(++cseen[cls]) : letter;
    }
  }

  std::string render(const ProofTerm& t) {
    std::ostringstream os;
    go(os, t, false);
    return os.str();
  }

 private:
  void collect(const ProofTerm& t, const VarMap& base) {
    switch (t.kind()) {
      case TermKind::Spine:
        for (const auto& a : t.args()) collect(a, base);
        return;
      case TermKind::LamTm: {
        tvars_.push_back(t.var());
        ++tcount_[upper_first(base_name(t.var()))];
        VarMap inner = base;
        inner[t.var()] = base_name(t.var());
        collect(t.body(), inner);
        return;
      }
      case TermKind::LamPf: {
        std::string cls = type_text(t.annot(), base, true);
        if (!letter_.contains(cls)) {
          std::size_t k = letter_.size();
          constexpr std::size_t n = std::size(kProofLetters);
          letter_[cls] = k < n ? kProofLetters[k] : "v" + std::to_string(k - n);
        }
        ++ccount_[cls];
        pvars_.emplace_back(t.var(), cls);
        collect(t.body(), base);
        return;
      }
    }
  }

  static std::string type_text(const Formula& annot, const VarMap& names, bool upper) {
    FType ty = unphi(rename_free(annot, names));
    return upper ? to_string(uppercase(ty)) : to_string(ty);
  }

  static FType uppercase(const FType& t) {
    switch (t.kind()) {
      case FType::Kind::Var: return FType::var(upper_first(t.name()));
      case FType::Kind::Arrow: return FType::arrow(uppercase(t.lhs()), uppercase(t.rhs()));
      case FType::Kind::Forall: return FType::forall(upper_first(t.name()), uppercase(t.body()));
    }
    return t;
  }

  void go(std::ostream& os, const ProofTerm& t, bool paren_lambda) {
    switch (t.kind()) {
      case TermKind::Spine: {
        const std::string& h = pname_.contains(t.head()) ? pname_[t.head()] : t.head();
        if (t.args().empty()) {
          os << h;
          return;
        }
        os << '(' << h;
        for (std::size_t i = 0; i < t.args().size(); ++i) {
          os << ' ';
          go(os, t.args()[i], i + 1 < t.args().size());
        }
        os << ')';
        return;
      }
      case TermKind::LamTm:
      case TermKind::LamPf: {
        if (paren_lambda) os << '(';
        if (t.kind() == TermKind::LamTm) {
          os << '\\' << tname_[t.var()] << ". ";
        } else {
          os << '\\' << pname_[t.var()];
          if (opt_.annotations) {
            FType ty = uppercase(unphi(rename_free(t.annot(), tname_)));
            if (ty.kind() == FType::Kind::Var)
              os << ':' << ty;
            else
              os << ":(" << ty << ')';
          }
          os << ". ";
        }
        go(os, t.body(), false);
        if (paren_lambda) os << ')';
        return;
      }
    }
  }

  SysFRenderOptions opt_;
  std::vector<std::string> tvars_;
  std::map<std::string, int> tcount_;
  VarMap tname_;
  std::vector<std::pair<std::string, std::string>> pvars_;  // (variable, class) in order
  std::map<std::string, std::string> letter_;
  std::map<std::string, int> ccount_;
  VarMap pname_;
};

}  // namespace detail

/// Renders a proof-term of phi(T) as a System F term: term abstractions over
/// eigenvariables become type abstractions, proof variables get short names
/// chosen by type (a, b, g, d, ...), numbered when one type has several.
inline std::string render_sysf_term(const ProofTerm& t, SysFRenderOptions opt = {}) {
  return detail::SysFRenderer(t, opt).render(t);
}

}  // namespace posproof
