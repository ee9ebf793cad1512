#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "posproof/cli.hpp"

namespace cli = posproof::cli;

int main(int argc, char** argv) {
  CLI::App app{"Enumerate the proofs of positive formulas of minimal predicate logic"};
  app.require_subcommand(1);

  cli::Invocation inv;
  std::string format = "text";
  const std::map<std::string, cli::Format> formats{{"text", cli::Format::Text}, {"json", cli::Format::Json}};

  auto add_common = [&](CLI::App* sub, bool takes_input) {
    if (takes_input) {
      sub->add_option("input", inv.input, "formula (or type with --sysf); '-' reads stdin")->required();
      sub->add_flag("--sysf", inv.sysf, "input is a System F type");
      sub->add_option("--cap", inv.cap, "maximum number of grammar nonterminals")->check(CLI::PositiveNumber);
    }
    sub->add_option("--max-height", inv.max_height, "height bound for schemes and terms")->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  };
  add_common(app.add_subcommand("check", "report positivity and inhabitation"), true);
  add_common(app.add_subcommand("grammar", "print the scheme grammar"), true);
  add_common(app.add_subcommand("schemes", "list schemes up to --max-height"), true);
  add_common(app.add_subcommand("terms", "list proof-terms up to --max-height"), true);
  add_common(app.add_subcommand("verify", "re-check a terms JSON document read from stdin"), false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  inv.command = app.get_subcommands().front()->get_name();
  inv.format = formats.at(format);

  cli::Outcome o = cli::run(inv, std::cin);
  std::cout << o.out << std::flush;
  std::cerr << o.err;
  return o.code;
}
