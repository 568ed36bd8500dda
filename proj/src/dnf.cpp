#include "tableaux/dnf.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "tableaux/semantics.hpp"

namespace tableaux {

Clause::Clause(std::vector<Literal> literals) : literals_(std::move(literals)) {
  std::sort(literals_.begin(), literals_.end());
  literals_.erase(std::unique(literals_.begin(), literals_.end()), literals_.end());
}

bool Clause::consistent() const noexcept {
  for (std::size_t i = 1; i < literals_.size(); ++i)
    if (literals_[i].atom == literals_[i - 1].atom) return false;
  return true;
}

std::strong_ordering operator<=>(const Clause& a, const Clause& b) {
  return std::lexicographical_compare_three_way(a.literals_.begin(), a.literals_.end(),
                                                b.literals_.begin(), b.literals_.end());
}

Dnf::Dnf(std::vector<Clause> clauses) : clauses_(std::move(clauses)) {
  std::sort(clauses_.begin(), clauses_.end());
  clauses_.erase(std::unique(clauses_.begin(), clauses_.end()), clauses_.end());
}

Clause clauseFromBranch(const std::vector<Literal>& literals) {
  if (literals.empty()) throw std::invalid_argument("a branch without literals gives no clause");
  return Clause(literals);
}

Dnf dnfFromTableau(const Tableau& t) {
  std::vector<Clause> clauses;
  for (const auto& b : openBranches(t)) clauses.push_back(clauseFromBranch(b.literals));
  return Dnf(std::move(clauses));
}

Dnf completeDnf(const Formula& f) {
  TruthTable table = truthTable(f);
  std::vector<Clause> clauses;
  for (const auto& row : table.rows) {
    if (!row.value) continue;
    std::vector<Literal> lits;
    for (std::size_t i = 0; i < table.atoms.size(); ++i)
      lits.push_back({table.atoms[i], table.atomValue(row, i)});
    clauses.emplace_back(std::move(lits));
  }
  return Dnf(std::move(clauses));
}

// ---------------------------------------------------------------------------
// Rewriting

namespace {

using F = Formula;

struct Redex {
  std::string rule;
  Formula result;
};

enum class Phase { Implications, Negations, Distribution };

std::optional<Redex> matchAt(const Formula& f, Phase phase) {
  switch (phase) {
    case Phase::Implications:
      if (f.kind() == Connective::Implies)
        return Redex{"implication elimination", F::disjunction(F::negation(f.left()), f.right())};
      if (f.isNegation() && f.inner().kind() == Connective::Implies)
        return Redex{"negated implication",
                     F::conjunction(f.inner().left(), F::negation(f.inner().right()))};
      return std::nullopt;
    case Phase::Negations:
      if (!f.isNegation()) return std::nullopt;
      switch (f.inner().kind()) {
        case Connective::Not:
          return Redex{"double negation", f.inner().inner()};
        case Connective::And:
          return Redex{"De Morgan (∧)", F::disjunction(F::negation(f.inner().left()),
                                                       F::negation(f.inner().right()))};
        case Connective::Or:
          return Redex{"De Morgan (∨)", F::conjunction(F::negation(f.inner().left()),
                                                       F::negation(f.inner().right()))};
        default:
          return std::nullopt;
      }
    case Phase::Distribution:
      if (f.kind() != Connective::And) return std::nullopt;
      if (f.left().kind() == Connective::Or)
        return Redex{"distribution", F::disjunction(F::conjunction(f.left().left(), f.right()),
                                                    F::conjunction(f.left().right(), f.right()))};
      if (f.right().kind() == Connective::Or)
        return Redex{"distribution", F::disjunction(F::conjunction(f.left(), f.right().left()),
                                                    F::conjunction(f.left(), f.right().right()))};
      return std::nullopt;
  }
  return std::nullopt;
}

/// Rewrites the leftmost-outermost redex, rebuilding the spine above it.
std::optional<Redex> rewriteOnce(const Formula& f, Phase phase) {
  if (auto r = matchAt(f, phase)) return r;
  switch (f.kind()) {
    case Connective::Atom:
      return std::nullopt;
    case Connective::Not:
      if (auto r = rewriteOnce(f.inner(), phase)) return Redex{r->rule, F::negation(r->result)};
      return std::nullopt;
    default:
      break;
  }
  auto rebuild = [&f](Formula l, Formula r) {
    switch (f.kind()) {
      case Connective::And: return F::conjunction(std::move(l), std::move(r));
      case Connective::Or: return F::disjunction(std::move(l), std::move(r));
      default: return F::implication(std::move(l), std::move(r));
    }
  };
  if (auto r = rewriteOnce(f.left(), phase)) return Redex{r->rule, rebuild(r->result, f.right())};
  if (auto r = rewriteOnce(f.right(), phase)) return Redex{r->rule, rebuild(f.left(), r->result)};
  return std::nullopt;
}

void collectConjuncts(const Formula& f, std::vector<Literal>& out) {
  if (f.kind() == Connective::And) {
    collectConjuncts(f.left(), out);
    collectConjuncts(f.right(), out);
    return;
  }
  auto lit = asLiteral(f);
  if (!lit) throw std::logic_error("rewriteToDnf: non-literal conjunct " + print(f));
  out.push_back(*lit);
}

void collectClauses(const Formula& f, std::vector<Clause>& out) {
  if (f.kind() == Connective::Or) {
    collectClauses(f.left(), out);
    collectClauses(f.right(), out);
    return;
  }
  std::vector<Literal> lits;
  collectConjuncts(f, lits);
  out.emplace_back(std::move(lits));
}

}  // namespace

RewriteResult rewriteToDnf(const Formula& f) {
  RewriteResult result;
  Formula current = f;
  for (Phase phase : {Phase::Implications, Phase::Negations, Phase::Distribution}) {
    while (auto r = rewriteOnce(current, phase)) {
      result.trace.push_back({r->rule, current, r->result});
      current = r->result;
    }
  }
  collectClauses(current, result.rawClauses);
  std::vector<Clause> kept;
  for (const auto& c : result.rawClauses) (c.consistent() ? kept : result.dropped).push_back(c);
  result.dnf = Dnf(std::move(kept));
  return result;
}

Formula dnfToFormula(const Dnf& d) {
  if (d.empty())
    throw std::invalid_argument("the empty DNF denotes ⊥, which has no formula in the language");
  auto clauseFormula = [](const Clause& c) {
    std::vector<Formula> parts;
    for (const auto& lit : c.literals()) parts.push_back(toFormula(lit));
    return conjoin(parts);
  };
  const auto& cs = d.clauses();
  Formula acc = clauseFormula(cs.back());
  for (auto it = cs.rbegin() + 1; it != cs.rend(); ++it)
    acc = Formula::disjunction(clauseFormula(*it), acc);
  return acc;
}

bool equivalent(const Formula& f, const Formula& g) {
  auto order = atoms(std::vector<Formula>{f, g});
  return truthColumn(f, order) == truthColumn(g, order);
}

std::string toString(const Clause& c, PrintOptions options) {
  std::string out;
  for (const auto& lit : c.literals()) {
    if (!out.empty()) out += options.ascii ? " & " : " ∧ ";
    out += (lit.positive ? "" : (options.ascii ? "~" : "¬")) + lit.atom;
  }
  return out;
}

std::string toString(const Dnf& d, PrintOptions options) {
  if (d.empty()) return "⊥";
  const bool parens = d.clauses().size() > 1;
  std::string out;
  for (const auto& c : d.clauses()) {
    if (!out.empty()) out += options.ascii ? " | " : " ∨ ";
    bool wrap = parens && c.literals().size() > 1;
    out += (wrap ? "(" : "") + toString(c, options) + (wrap ? ")" : "");
  }
  return out;
}

nlohmann::json toJson(const Dnf& d) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : d.clauses()) {
    nlohmann::json clause = nlohmann::json::array();
    for (const auto& lit : c.literals()) clause.push_back({lit.atom, lit.positive ? "+" : "-"});
    out.push_back(clause);
  }
  return out;
}

Dnf dnfFromJson(const nlohmann::json& j) {
  std::vector<Clause> clauses;
  for (const auto& clause : j) {
    std::vector<Literal> lits;
    for (const auto& lit : clause) {
      auto sign = lit.at(1).get<std::string>();
      if (sign != "+" && sign != "-") throw std::invalid_argument("literal sign must be + or -");
      lits.push_back({lit.at(0).get<std::string>(), sign == "+"});
    }
    clauses.emplace_back(std::move(lits));
  }
  return Dnf(std::move(clauses));
}

}  // namespace tableaux
