// Disjunctive normal forms: canonical data, tableau-derived DNF, complete DNF
// from the truth table, and a traced syntactic rewrite to DNF.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tableaux/formula.hpp"
#include "tableaux/tableau.hpp"

namespace tableaux {

/// Conjunction of literals, kept sorted (atom name, positive first) and
/// duplicate-free.
class Clause {
 public:
  Clause() = default;
  explicit Clause(std::vector<Literal> literals);

  const std::vector<Literal>& literals() const noexcept { return literals_; }
  bool empty() const noexcept { return literals_.empty(); }
  /// No complementary pair.
  bool consistent() const noexcept;

  friend bool operator==(const Clause&, const Clause&) = default;
  friend std::strong_ordering operator<=>(const Clause& a, const Clause& b);

 private:
  std::vector<Literal> literals_;
};

/// Sorted, duplicate-free list of clauses. The empty DNF denotes ⊥.
class Dnf {
 public:
  Dnf() = default;
  explicit Dnf(std::vector<Clause> clauses);

  const std::vector<Clause>& clauses() const noexcept { return clauses_; }
  bool empty() const noexcept { return clauses_.empty(); }

  friend bool operator==(const Dnf&, const Dnf&) = default;

 private:
  std::vector<Clause> clauses_;
};

/// Throws std::invalid_argument on an empty branch.
Clause clauseFromBranch(const std::vector<Literal>& literals);

/// Disjunction of the open branches. Throws TableauError on an unfinished tableau.
Dnf dnfFromTableau(const Tableau& t);

/// One full clause per satisfying truth-table row. Throws CapacityError.
Dnf completeDnf(const Formula& f);

struct RewriteStep {
  std::string rule;
  Formula before;
  Formula after;
};

struct RewriteResult {
  Dnf dnf;
  /// Clauses of the distributed form, in order, before pruning.
  std::vector<Clause> rawClauses;
  /// Inconsistent clauses removed from the result.
  std::vector<Clause> dropped;
  std::vector<RewriteStep> trace;
};

/// Eliminates →, pushes ¬ inward, distributes ∧ over ∨, then flattens and
/// prunes inconsistent clauses. Every trace step rewrites one redex,
/// leftmost-outermost.
RewriteResult rewriteToDnf(const Formula& f);

/// Right-nested ∨ of right-nested ∧. Throws std::invalid_argument on ⊥.
Formula dnfToFormula(const Dnf& d);

/// Truth-table equivalence over the union of both atom sets.
bool equivalent(const Formula& f, const Formula& g);

std::string toString(const Clause& c, PrintOptions options = {});
/// "(p ∧ r) ∨ (¬p ∧ q)"; "⊥" when empty.
std::string toString(const Dnf& d, PrintOptions options = {});

/// [[["p","+"],["r","+"]], ...]
nlohmann::json toJson(const Dnf& d);
Dnf dnfFromJson(const nlohmann::json& j);

}  // namespace tableaux
