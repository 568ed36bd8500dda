// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support/oracle.hpp"
#include "tableaux/cli.hpp"
#include "tableaux/dnf.hpp"
#include "tableaux/semantics.hpp"
#include "tableaux/tableau.hpp"

using namespace tableaux;
using Clock = std::chrono::steady_clock;

namespace {

double secondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string stripSpaces(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  return s;
}

std::set<std::string> literalSet(const std::vector<Literal>& lits) {
  std::set<std::string> out;
  for (const auto& l : lits) out.insert(toString(l));
  return out;
}

std::set<std::string> clauseSet(const Dnf& d) {
  std::set<std::string> out;
  for (const auto& c : d.clauses()) out.insert(stripSpaces(toString(c)));
  return out;
}

Formula formulaOf(const Dnf& d) { return d.empty() ? parse("p&~p") : dnfToFormula(d); }

/// Collects the first few problems and counts the rest.
struct Findings {
  std::size_t count = 0;
  std::string first;
  void add(const std::string& what) {
    if (count++ == 0) first = what;
  }
  bool ok() const { return count == 0; }
  std::string summary() const {
    return ok() ? "0 violations" : std::to_string(count) + " violations, first: " + first;
  }
};

struct Corpora {
  std::vector<Formula> exhaustive;  // {p,q}, degree <= 5
  std::vector<Formula> random;      // 1000 over {p,q,r}, degree <= 10
  std::vector<const std::vector<Formula>*> both() const { return {&exhaustive, &random}; }
};

Corpora buildCorpora() {
  Corpora c;
  oracle::enumerate({"p", "q"}, 5, [&](const Formula& f) { c.exhaustive.push_back(f); });
  oracle::Generator gen(20240501, {"p", "q", "r"});
  for (int i = 0; i < 1000; ++i) c.random.push_back(gen.upTo(10));
  return c;
}

int failures = 0;

void report(bool pass, const std::string& name, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("%s  %-34s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
}

void guarded(const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(false, name, std::string("exception: ") + e.what());
  }
}

void workedExample() {
  const auto start = Clock::now();
  const Formula phi = parse("(p|q)&(~p|r)");
  Findings bad;

  Tableau t = buildTableau({phi});
  auto leaves = t.leaves();
  if (leaves.size() != 4) bad.add("leaf count " + std::to_string(leaves.size()));
  if (leaves.size() == 4) {
    if (leaves[0].status != BranchStatus::Closed || literalSet(leaves[0].literals) != std::set<std::string>{"p", "¬p"})
      bad.add("leaf 1 is not closed on {p,¬p}");
    const std::vector<std::set<std::string>> open{{"p", "r"}, {"q", "¬p"}, {"q", "r"}};
    for (int i = 1; i < 4; ++i)
      if (leaves[i].number != i + 1 || leaves[i].status != BranchStatus::Open ||
          literalSet(leaves[i].literals) != open[i - 1])
        bad.add("leaf " + std::to_string(i + 1));
  }

  auto model = extractModel(t);
  const Model expected({2, 3, 4}, {{"p", {2}}, {"q", {3, 4}}, {"r", {2, 4}}});
  if (!model || !(*model == expected)) bad.add("extracted model");

  if (stripSpaces(toString(dnfFromTableau(t))) != "(p∧r)∨(¬p∧q)∨(q∧r)") bad.add("DNF");

  std::vector<std::string> trueRows;
  TruthTable table = truthTable(phi);
  for (const auto& row : table.rows)
    if (row.value) trueRows.push_back(table.bits(row));
  if (trueRows != std::vector<std::string>{"111", "101", "011", "010"}) bad.add("truth table rows");

  // The command line must tell the same story.
  std::ostringstream out, err;
  std::istringstream in;
  int code = runCli({"tableaux", "sat", "(p|q)&(~p|r)"}, out, err, in);
  const std::string text = out.str();
  if (code != 0) bad.add("CLI exit code");
  for (const char* needle : {"open branches: 2 {p, r}; 3 {q, ¬p}; 4 {q, r}",
                             "model: 𝒰={2,3,4}, v(p)={2}, v(q)={3,4}, v(r)={2,4}",
                             "DNF: (p ∧ r) ∨ (¬p ∧ q) ∨ (q ∧ r)"})
    if (text.find(needle) == std::string::npos) bad.add(std::string("CLI output lacks ") + needle);

  const double secs = secondsSince(start);
  report(bad.ok() && secs < 1.0, "worked example reproduction",
         bad.summary() + ", " + std::to_string(secs) + " s (limit 1 s)");
}

void completeDnfOfWorkedExample() {
  const auto start = Clock::now();
  const Formula phi = parse("(p|q)&(~p|r)");
  Dnf complete = completeDnf(phi);
  const std::set<std::string> expected{"p∧q∧r", "p∧¬q∧r", "¬p∧q∧r", "¬p∧q∧¬r"};
  bool exact = complete.clauses().size() == 4 && clauseSet(complete) == expected;
  bool equivalentToTableau =
      oracle::equivalent(formulaOf(complete), formulaOf(dnfFromTableau(buildTableau({phi}))));
  const double secs = secondsSince(start);
  report(exact && equivalentToTableau && secs < 1.0, "complete DNF of worked example",
         "clauses " + stripSpaces(toString(complete)) + ", equivalent to tableau DNF: " +
             (equivalentToTableau ? "yes" : "no") + ", " + std::to_string(secs) + " s");
}

void completeDnfFootnote() {
  const auto start = Clock::now();
  const Formula f = parse("~p|q");
  Dnf complete = completeDnf(f);
  bool exact = clauseSet(complete) == std::set<std::string>{"¬p∧¬q", "¬p∧q", "p∧q"};
  bool equiv = oracle::equivalent(formulaOf(complete), f);
  const double secs = secondsSince(start);
  report(exact && equiv && secs < 1.0, "complete DNF of ¬p ∨ q",
         "clauses " + stripSpaces(toString(complete)) + ", equivalent: " + (equiv ? "yes" : "no") + ", " +
             std::to_string(secs) + " s");
}

void validityExample() {
  const auto start = Clock::now();
  const Formula f = parse("(p&q)->(p|q)");
  Findings bad;
  ValidityResult v = checkValid(f);
  if (!v.valid || v.counterModel) bad.add("not reported valid");
  for (const auto& leaf : v.tableau.leaves())
    if (leaf.status != BranchStatus::Closed) bad.add("T({¬f}) has a branch that is not closed");

  auto leaves = buildTableau({f}).leaves();
  const std::vector<std::set<std::string>> expected{{"¬p"}, {"¬q"}, {"p"}, {"q"}};
  std::vector<std::set<std::string>> got;
  for (const auto& leaf : leaves) {
    if (leaf.status != BranchStatus::Open) bad.add("direct tableau has a non-open leaf");
    got.push_back(literalSet(leaf.literals));
  }
  if (got != expected) bad.add("direct tableau leaf literal sets");
  const double secs = secondsSince(start);
  report(bad.ok() && secs < 1.0, "validity example", bad.summary() + ", " + std::to_string(secs) + " s");
}

void opennessMatchesTruthTables(const Corpora& c) {
  const auto start = Clock::now();
  Findings bad;
  std::size_t checked = 0;
  for (const auto* corpus : c.both())
    for (const auto& f : *corpus) {
      ++checked;
      bool open = isOpen(buildTableau({f}));
      if (open != isSatisfiableTT(f) || open != oracle::satisfiable(f)) bad.add(print(f));
    }
  const double secs = secondsSince(start);
  report(bad.ok() && secs < 60.0, "openness equals satisfiability",
         std::to_string(checked) + " formulas, " + bad.summary() + ", " + std::to_string(secs) +
             " s (limit 60 s)");
}

void extractionSoundness(const Corpora& c) {
  Findings bad;
  std::size_t models = 0;
  for (const auto* corpus : c.both())
    for (const auto& f : *corpus) {
      SatResult r = checkSatisfiable({f});
      if (r.satisfiable != r.model.has_value()) bad.add("verdict without model: " + print(f));
      if (!r.model) continue;
      ++models;
      for (StateId s : r.model->universe())
        if (!satisfies(*r.model, s, f)) bad.add(print(f) + " at state " + std::to_string(s));
    }
  report(bad.ok(), "extracted models satisfy input", std::to_string(models) + " models, " + bad.summary());
}

/// One state per assignment of `atoms`, so every valuation a state can carry
/// appears somewhere.
Model canonicalModel(const std::vector<std::string>& atoms) {
  const StateId n = StateId{1} << atoms.size();
  StateSet universe;
  std::map<std::string, StateSet> val;
  for (const auto& a : atoms) val[a] = {};
  for (StateId bits = 0; bits < n; ++bits) {
    universe.insert(bits + 1);
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if ((bits >> i) & 1) val[atoms[i]].insert(bits + 1);
  }
  return Model(universe, val);
}

void standardMatchesSetSemantics(const Corpora& c) {
  Findings bad;
  const Model everything = canonicalModel({"p", "q"});
  for (const auto& f : c.exhaustive) {
    const bool standard = oracle::satisfiable(f);
    bool witnessed = false;
    TruthTable table = truthTable(f);
    for (const auto& row : table.rows)
      if (row.value && satisfies(modelFromValuation(table.valuation(row)), 1, f)) witnessed = true;
    const bool somewhere = !interpret(everything, f).empty();
    if (standard != witnessed || standard != somewhere) bad.add(print(f));
  }
  report(bad.ok(), "standard vs model satisfiability",
         std::to_string(c.exhaustive.size()) + " formulas, " + bad.summary());
}

void dnfSuites(const Corpora& c) {
  Findings bad;
  std::size_t steps = 0;
  for (const auto* corpus : c.both())
    for (const auto& f : *corpus) {
      if (!oracle::equivalent(formulaOf(dnfFromTableau(buildTableau({f}))), f)) bad.add("tableau DNF of " + print(f));
      RewriteResult r = rewriteToDnf(f);
      if (!oracle::equivalent(formulaOf(r.dnf), f)) bad.add("rewrite DNF of " + print(f));
      for (std::size_t i = 0; i < r.trace.size(); ++i) {
        ++steps;
        const auto& st = r.trace[i];
        if (!oracle::equivalent(st.before, st.after)) bad.add(st.rule + " on " + print(st.before));
        if (i == 0 && !(st.before == f)) bad.add("trace does not start at " + print(f));
        if (i > 0 && !(r.trace[i - 1].after == st.before)) bad.add("trace gap in " + print(f));
      }
    }
  report(bad.ok(), "DNF equivalence and rewrite trace", std::to_string(steps) + " trace steps, " + bad.summary());
}

void terminationAndDeterminism() {
  Findings bad;
  double slowest = 0;
  oracle::Generator gen(777, {"p", "q", "r", "s", "t"});
  for (int i = 0; i < 200; ++i) {
    Formula f = gen.upTo(14);
    const auto start = Clock::now();
    Tableau t = buildTableau({f});
    const double secs = secondsSince(start);
    slowest = std::max(slowest, secs);
    if (secs >= 2.0) bad.add("slow: " + print(f));
    if (toJson(t).dump() != toJson(buildTableau({f})).dump()) bad.add("nondeterministic: " + print(f));
  }
  report(bad.ok(), "termination and determinism",
         "200 formulas, slowest " + std::to_string(slowest) + " s (limit 2 s), " + bad.summary());
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.size() % 2 ? v[v.size() / 2] : (v[v.size() / 2 - 1] + v[v.size() / 2]) / 2;
}

void tableauVersusTruthTable() {
  std::vector<std::string> names;
  for (char ch = 'a'; ch < 'a' + 10; ++ch) names.emplace_back(1, ch);
  oracle::Generator gen(4242, names);
  std::vector<double> tableauTimes, tableTimes;
  std::size_t disagreements = 0;
  for (int i = 0; i < 100; ++i) {
    Formula f = gen.usingAll(20);
    auto t0 = Clock::now();
    bool byTableau = checkSatisfiable({f}).satisfiable;
    tableauTimes.push_back(secondsSince(t0));
    auto t1 = Clock::now();
    TruthTable table = truthTable(f);
    bool byTable = std::any_of(table.rows.begin(), table.rows.end(), [](const auto& r) { return r.value; });
    tableTimes.push_back(secondsSince(t1));
    disagreements += byTableau != byTable;
  }
  const double mt = median(tableauTimes), mtt = median(tableTimes);
  char detail[160];
  std::snprintf(detail, sizeof detail, "median tableau %.1f us, truth table %.1f us, ratio %.3f, %zu disagreements",
                mt * 1e6, mtt * 1e6, mt / mtt, disagreements);
  report(mt < mtt && disagreements == 0, "tableau faster than truth table", detail);
}

}  // namespace

int main() {
  guarded("worked example reproduction", workedExample);
  guarded("complete DNF of worked example", completeDnfOfWorkedExample);
  guarded("complete DNF of ¬p ∨ q", completeDnfFootnote);
  guarded("validity example", validityExample);

  const auto start = Clock::now();
  const Corpora corpora = buildCorpora();
  std::printf("      corpora: %zu exhaustive + %zu random, built in %.2f s\n", corpora.exhaustive.size(),
              corpora.random.size(), secondsSince(start));

  guarded("openness equals satisfiability", [&] { opennessMatchesTruthTables(corpora); });
  guarded("extracted models satisfy input", [&] { extractionSoundness(corpora); });
  guarded("standard vs model satisfiability", [&] { standardMatchesSetSemantics(corpora); });
  guarded("DNF equivalence and rewrite trace", [&] { dnfSuites(corpora); });
  guarded("termination and determinism", terminationAndDeterminism);
  guarded("tableau faster than truth table", tableauVersusTruthTable);

  std::printf("%s: %d failing\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
