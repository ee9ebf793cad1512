#pragma once

// The command surface behind tools/posproof_cli, callable in-process.

#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "posproof/error.hpp"
#include "posproof/expand.hpp"
#include "posproof/grammar.hpp"
#include "posproof/serialize.hpp"
#include "posproof/sysf.hpp"
#include "posproof/syntax.hpp"

namespace posproof::cli {

enum class Format { Text, Json };

struct Invocation {
  std::string command;  // check | grammar | schemes | terms | verify
  std::string input;    // formula or type text; "-" reads stdin
  bool sysf = false;
  int max_height = 8;
  Format format = Format::Text;
  std::size_t cap = kDefaultNonterminalCap;
};

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

namespace detail {

inline std::string slurp(std::istream& in) { return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}; }

struct Goal {
  Formula formula;
  bool positive = false;
};

inline Goal read_goal(const Invocation& inv, std::istream& in) {
  std::string text = inv.input == "-" ? slurp(in) : inv.input;
  Formula f = inv.sysf ? phi(parse_ftype(text)) : parse_formula(text);
  return {f, is_positive(f)};
}

inline Outcome verify(const Invocation& inv, std::istream& in) {
  TermList list = parse_term_list(slurp(in));
  Outcome o;
  std::size_t bad = 0;
  Json failures = Json::array();
  for (const auto& t : list.terms) {
    Verdict v = classify_proof({}, t, list.goal);
    if (v == Verdict::Proves) continue;
    ++bad;
    failures.push_back({{"text", to_string(t)}, {"verdict", v == Verdict::IllFormed ? "ill-formed" : "fails"}});
  }
  if (inv.format == Format::Json) {
    o.out = Json{{"goal", to_string(list.goal)}, {"checked", list.terms.size()}, {"failures", failures}}.dump(2) + "\n";
  } else {
    std::ostringstream os;
    for (const auto& f : failures) os << f["verdict"].get<std::string>() << ": " << f["text"].get<std::string>() << '\n';
    os << "verified " << list.terms.size() - bad << " of " << list.terms.size() << " terms\n";
    o.out = os.str();
  }
  o.code = bad == 0 ? 0 : 1;
  return o;
}

}  // namespace detail

/// Exit codes: 0 success (check: inhabited), 1 check uninhabited or verify
/// failure, 2 input error, 3 cap exceeded.
inline Outcome run(const Invocation& inv, std::istream& in = std::cin) {
  Outcome o;
  try {
    if (inv.max_height < 1) throw Error("--max-height must be at least 1");
    if (inv.command == "verify") return detail::verify(inv, in);

    detail::Goal goal = detail::read_goal(inv, in);
    const bool json = inv.format == Format::Json;
    if (!goal.positive) {
      if (inv.command == "check")
        o.out = json ? Json{{"positive", false}, {"polarity", to_string(polarity(goal.formula))}}.dump(2) + "\n"
                     : "positive: no\n";
      o.err = "error: " + to_string(goal.formula) + " is not positive (" + to_string(polarity(goal.formula)) + ")\n";
      o.code = 2;
      return o;
    }

    Session session;
    Grammar g = build_grammar(session, goal.formula, inv.cap);
    std::ostringstream os;
    if (inv.command == "check") {
      bool inh = is_inhabited(g);
      if (json)
        os << Json{{"positive", true}, {"inhabited", inh}, {"nonterminals", g.nonterminals.size()}}.dump(2) << '\n';
      else
        os << "positive: yes, inhabited: " << (inh ? "yes" : "no") << '\n';
      o.code = inh ? 0 : 1;
    } else if (inv.command == "grammar") {
      if (json)
        os << to_json(g).dump(2) << '\n';
      else
        os << grammar_text(g);
    } else if (inv.command == "schemes") {
      auto schemes = enumerate_schemes(g, inv.max_height);
      if (json)
        os << term_list_json(goal.formula, inv.max_height, schemes, "schemes").dump(2) << '\n';
      else
        for (const auto& s : schemes) os << s << '\n';
    } else if (inv.command == "terms") {
      Enumeration e = expand_grammar(session, std::move(g), inv.max_height);
      if (json) {
        Json j = term_list_json(goal.formula, inv.max_height, e.terms);
        if (inv.sysf)
          for (std::size_t i = 0; i < e.terms.size(); ++i) j["terms"][i]["sysf"] = render_sysf_term(e.terms[i]);
        os << j.dump(2) << '\n';
      } else {
        for (const auto& t : e.terms) os << (inv.sysf ? render_sysf_term(t) : to_string(t)) << '\n';
      }
    } else {
      throw Error("unknown command '" + inv.command + "'");
    }
    o.out = os.str();
    return o;
  } catch (const CapExceeded& e) {
    o.code = 3;
    o.err = std::string("error: ") + e.what() + "\n";
  } catch (const InternalError& e) {
    o.code = 3;
    o.err = std::string("internal error: ") + e.what() + "\n";
  } catch (const Error& e) {
    o.code = 2;
    o.err = std::string("error: ") + e.what() + "\n";
  }
  o.out.clear();
  return o;
}

}  // namespace posproof::cli
