#include "tableaux/cli.hpp"

#include <iostream>
#include <iterator>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "tableaux/dnf.hpp"
#include "tableaux/render.hpp"
#include "tableaux/semantics.hpp"
#include "tableaux/service.hpp"
#include "tableaux/session.hpp"
#include "tableaux/tableau.hpp"

namespace tableaux {

namespace {

constexpr int kHolds = 0;
constexpr int kFails = 1;
constexpr int kUsage = 2;

std::string readInput(const std::string& arg, std::istream& in) {
  if (arg != "-") return arg;
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  return text;
}

std::string modelLine(const Model& m) {
  std::string out = "𝒰=" + formatStateSet(m.universe());
  for (const auto& [atom, states] : m.valuation())
    out += ", v(" + atom + ")=" + formatStateSet(states);
  return out;
}

void printCounterModel(std::ostream& out, const Model& m) {
  out << "counter-model: " << modelLine(m) << '\n';
  std::vector<std::string> names;
  for (const auto& [atom, states] : m.valuation()) names.push_back(atom);
  for (StateId s : m.universe()) {
    out << "state " << s << ':';
    const StandardValuation v = valuationFromState(m, s, names);
    for (const auto& [atom, value] : v.assignment())
      out << ' ' << atom << '=' << (value ? 1 : 0);
    out << '\n';
  }
}

std::string literalSet(const std::vector<Literal>& lits) {
  std::string out = "{";
  for (std::size_t i = 0; i < lits.size(); ++i) out += (i ? ", " : "") + toString(lits[i]);
  return out + "}";
}

void printJson(std::ostream& out, const nlohmann::json& j) {
  out << j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
}

/// Points at the offending column under the echoed input.
void reportParseError(std::ostream& err, const ParseError& e, const std::string& text) {
  err << "error: " << e.what() << '\n';
  if (text.find('\n') != std::string::npos) return;
  err << "  " << text << '\n' << "  " << std::string(e.position() - 1, ' ') << "^\n";
}

struct Options {
  std::string formula;
  std::vector<std::string> premises;
  std::string conclusion;
  bool json = false;
  bool complete = false;
  bool trace = false;
  bool csv = false;
  bool dot = false;
  bool ascii = false;
  bool negated = false;
  std::string host;
  int port = 0;
  std::string uiDir;
  std::string corsOrigin;
  std::string snapshotDir;
};

int cmdSat(const Options& o, std::ostream& out) {
  Formula f = parse(o.formula);
  if (o.json) {
    auto j = runCheck({"sat", {o.formula}});
    printJson(out, j);
    return j["satisfiable"].get<bool>() ? kHolds : kFails;
  }
  auto r = checkSatisfiable({f});
  if (!r.satisfiable) {
    out << "unsatisfiable\nDNF: ⊥\n";
    return kFails;
  }
  out << "satisfiable\n";
  out << "open branches:";
  const auto branches = openBranches(r.tableau);
  for (std::size_t i = 0; i < branches.size(); ++i)
    out << (i ? "; " : " ") << branches[i].number << ' ' << literalSet(branches[i].literals);
  out << '\n';
  out << "model: " << modelLine(*r.model) << '\n';
  out << "DNF: " << toString(dnfFromTableau(r.tableau)) << '\n';
  return kHolds;
}

int cmdValid(const Options& o, std::ostream& out) {
  Formula f = parse(o.formula);
  if (o.json) {
    auto j = runCheck({"valid", {o.formula}});
    printJson(out, j);
    return j["valid"].get<bool>() ? kHolds : kFails;
  }
  auto r = checkValid(f);
  if (r.valid) {
    out << "valid\n";
    return kHolds;
  }
  out << "not valid\n";
  printCounterModel(out, *r.counterModel);
  return kFails;
}

int cmdEntails(const Options& o, std::ostream& out) {
  std::vector<std::string> texts = o.premises;
  texts.push_back(o.conclusion);
  auto j = runCheck({"entails", texts});
  const bool holds = j["entails"].get<bool>();
  if (o.json) {
    printJson(out, j);
  } else if (holds) {
    out << "entails\n";
  } else {
    out << "does not entail\n";
    printCounterModel(out, modelFromJson(j["counterModel"]));
  }
  return holds ? kHolds : kFails;
}

int cmdDnf(const Options& o, std::ostream& out) {
  Formula f = parse(o.formula);
  const std::string method = o.trace ? "rewrite" : o.complete ? "complete" : "tableau";
  if (o.json) {
    printJson(out, runCheck({"dnf", {o.formula}, method}));
    return kHolds;
  }
  if (method == "rewrite") {
    auto r = rewriteToDnf(f);
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      const auto& s = r.trace[i];
      out << i + 1 << ". " << s.rule << ": " << print(s.before) << "  ⟹  " << print(s.after)
          << '\n';
    }
    for (const auto& c : r.dropped) out << "dropped inconsistent clause: " << toString(c) << '\n';
    out << "DNF: " << toString(r.dnf) << '\n';
    return kHolds;
  }
  Dnf dnf = method == "complete" ? completeDnf(f) : dnfFromTableau(buildTableau({f}));
  out << toString(dnf) << '\n';
  return kHolds;
}

int cmdTruthTable(const Options& o, std::ostream& out) {
  Formula f = parse(o.formula);
  if (o.json) {
    printJson(out, runCheck({"truthtable", {o.formula}}));
    return kHolds;
  }
  TruthTable table = truthTable(f);
  out << (o.csv ? truthTableCsv(table, print(f)) : formatTruthTable(table, print(f)));
  return kHolds;
}

int cmdRender(const Options& o, std::ostream& out) {
  Formula f = parse(o.formula);
  Tableau t = buildTableau({o.negated ? Formula::negation(f) : f});
  if (o.json)
    printJson(out, toJson(t));
  else
    out << (o.dot ? renderDot(t) : renderAscii(t));
  return kHolds;
}

int cmdVenn(const Options& o, std::ostream& out) {
  printJson(out, toJson(vennRegions(parse(o.formula))));
  return kHolds;
}

int cmdServe(const Options& o, const CLI::App& serve, std::ostream& err) {
  ServerConfig config;
  applyEnvironment(config);
  if (serve.count("--host")) config.host = o.host;
  if (serve.count("--port")) config.port = o.port;
  if (serve.count("--ui-dir")) config.uiDir = o.uiDir;
  if (serve.count("--cors-origin")) config.corsOrigin = o.corsOrigin;
  if (serve.count("--snapshot-dir")) config.snapshotDir = o.snapshotDir;

  SessionStore store(config.snapshotDir);
  Server server(config, store);
  const int port = server.bind();
  err << "tableaux: listening on http://" << config.host << ':' << port << '\n';
  if (config.uiDir) err << "tableaux: serving UI from " << config.uiDir->string() << '\n';
  err.flush();
  server.run();
  return 0;
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
           std::istream& in) {
  CLI::App app{"Propositional semantic tableaux: satisfiability, validity, DNF and rendering.",
               "tableaux"};
  app.require_subcommand(1);
  Options o;

  auto formulaArg = [&o](CLI::App* sub) {
    sub->add_option("formula", o.formula, "formula text, or - to read it from stdin")->required();
  };
  auto jsonFlag = [&o](CLI::App* sub) {
    sub->add_flag("--json", o.json, "print the result as JSON");
  };

  auto* sat = app.add_subcommand("sat", "decide satisfiability; prints a model and the DNF");
  formulaArg(sat);
  jsonFlag(sat);

  auto* valid = app.add_subcommand("valid", "decide validity; prints a counter-model if invalid");
  formulaArg(valid);
  jsonFlag(valid);

  auto* entails = app.add_subcommand("entails", "decide whether the premises entail --then");
  entails->add_option("premises", o.premises, "premise formulas");
  entails->add_option("--then", o.conclusion, "the conclusion")->required();
  jsonFlag(entails);

  auto* dnf = app.add_subcommand("dnf", "disjunctive normal form (tableau-derived by default)");
  formulaArg(dnf);
  dnf->add_flag("--complete", o.complete, "complete DNF read off the truth table");
  dnf->add_flag("--trace", o.trace, "rewrite to DNF, printing every step");
  jsonFlag(dnf);

  auto* tt = app.add_subcommand("truthtable", "truth table, all-true row first");
  formulaArg(tt);
  tt->add_flag("--csv", o.csv, "comma-separated output");
  jsonFlag(tt);

  auto* render = app.add_subcommand("render", "draw the finished tableau");
  formulaArg(render);
  auto* dotFlag = render->add_flag("--dot", o.dot, "Graphviz DOT");
  render->add_flag("--ascii", o.ascii, "indented text tree (default)")->excludes(dotFlag);
  render->add_flag("--negated", o.negated, "draw the tableau of the negated formula");
  jsonFlag(render);

  auto* venn = app.add_subcommand("venn", "Venn region shading as JSON (at most 3 atoms)");
  formulaArg(venn);

  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  serve->add_option("--host", o.host, "interface to bind (default 127.0.0.1, env TABLEAUX_HOST)");
  serve->add_option("--port", o.port, "port (default 7070, env TABLEAUX_PORT)")
      ->check(CLI::Range(0, 65535));
  serve->add_option("--ui-dir", o.uiDir, "directory of static UI files served under /")
      ->check(CLI::ExistingDirectory);
  serve->add_option("--cors-origin", o.corsOrigin,
                    "Access-Control-Allow-Origin value (env TABLEAUX_CORS_ORIGIN)");
  serve->add_option("--snapshot-dir", o.snapshotDir, "persist sessions as JSON files here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsage;
  }

  auto resolve = [&](std::string& text) { text = readInput(text, in); };
  std::string current;
  try {
    resolve(o.formula);
    resolve(o.conclusion);
    for (auto& p : o.premises) resolve(p);

    current = o.formula;
    if (*sat) return cmdSat(o, out);
    if (*valid) return cmdValid(o, out);
    if (*dnf) return cmdDnf(o, out);
    if (*tt) return cmdTruthTable(o, out);
    if (*render) return cmdRender(o, out);
    if (*venn) return cmdVenn(o, out);
    if (*entails) {
      // Parse one at a time so a diagnostic can echo the offending text.
      for (const auto& p : o.premises) {
        current = p;
        parse(p);
      }
      current = o.conclusion;
      parse(o.conclusion);
      return cmdEntails(o, out);
    }
    if (*serve) return cmdServe(o, *serve, err);
  } catch (const ParseError& e) {
    reportParseError(err, e, current);
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace tableaux
