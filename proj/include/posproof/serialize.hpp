#pragma once

// JSON forms of proof-terms, grammars and term lists.

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "posproof/error.hpp"
#include "posproof/grammar.hpp"
#include "posproof/ljplus.hpp"
#include "posproof/syntax.hpp"

namespace posproof {

using Json = nlohmann::ordered_json;

inline Json to_json(const ProofTerm& t) {
  switch (t.kind()) {
    case TermKind::Spine: {
      Json args = Json::array();
      for (const auto& a : t.args()) args.push_back(to_json(a));
      return {{"kind", "spine"}, {"head", t.head()}, {"args", std::move(args)}};
    }
    case TermKind::LamTm: return {{"kind", "lam_tm"}, {"var", t.var()}, {"body", to_json(t.body())}};
    case TermKind::LamPf:
      return {{"kind", "lam_pf"}, {"var", t.var()}, {"annot", to_string(t.annot())}, {"body", to_json(t.body())}};
  }
  return {};
}

inline ProofTerm proof_term_from_json(const Json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "spine") {
      std::vector<ProofTerm> args;
      for (const auto& a : j.at("args")) args.push_back(proof_term_from_json(a));
      return ProofTerm::spine(j.at("head").get<std::string>(), std::move(args));
    }
    if (kind == "lam_tm") return ProofTerm::lam_tm(j.at("var").get<std::string>(), proof_term_from_json(j.at("body")));
    if (kind == "lam_pf")
      return ProofTerm::lam_pf(j.at("var").get<std::string>(), parse_formula(j.at("annot").get<std::string>()),
                               proof_term_from_json(j.at("body")));
    throw Error("unknown term kind '" + kind + "'");
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed term JSON: ") + e.what());
  }
}

inline Json to_json(const Grammar& g) {
  Json nts = Json::array();
  for (const auto& n : g.nonterminals) nts.push_back({{"id", n.id}, {"sequent", to_string(n.sequent)}});
  Json prods = Json::array();
  for (const auto& p : g.productions) {
    Json j{{"lhs", p.lhs}, {"kind", to_string(p.kind)}};
    if (p.kind == ProductionKind::Forall)
      j["var"] = p.head;
    else
      j["head"] = p.head;
    if (p.kind == ProductionKind::Impl) j["annot"] = to_string(p.annot);
    j["premises"] = p.premises;
    if (p.kind == ProductionKind::Spine) j["occurrenceId"] = p.occurrence;
    prods.push_back(std::move(j));
  }
  Json canon = Json::object();
  for (const auto& [v, f] : g.canonical) canon[v] = to_string(f);
  return {{"start", g.start}, {"nonterminals", std::move(nts)}, {"productions", std::move(prods)}, {"canonical", std::move(canon)}};
}

/// {goal, max_height, <key>: [{height, term, text}]}
inline Json term_list_json(const Formula& goal, int max_height, const std::vector<ProofTerm>& ts,
                           const char* key = "terms") {
  Json list = Json::array();
  for (const auto& t : ts) list.push_back({{"height", term_height(t)}, {"term", to_json(t)}, {"text", to_string(t)}});
  return {{"goal", to_string(goal)}, {"max_height", max_height}, {key, std::move(list)}};
}

struct TermList {
  Formula goal;
  int max_height = 0;
  std::vector<ProofTerm> terms;
};

inline TermList parse_term_list(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("goal") || !j.contains("terms"))
    throw Error("terms JSON must be an object with 'goal' and 'terms'");
  TermList out;
  out.goal = parse_formula(j["goal"].get<std::string>());
  out.max_height = j.value("max_height", 0);
  for (const auto& e : j["terms"]) out.terms.push_back(proof_term_from_json(e.at("term")));
  return out;
}

}  // namespace posproof
