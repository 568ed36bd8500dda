// Analytic tableaux for propositional logic.
//
// Non-literal formulas fall into three groups:
//
//   ¬¬φ               ⟶  φ
//   α   (φ∧χ, ¬(φ∨χ), ¬(φ→χ))  ⟶  α₁ ; α₂   stacked on the branch
//   β   (φ∨χ, ¬(φ∧χ), φ→χ)     ⟶  β₁ | β₂  splitting the branch
//
// A branch closes when it carries a complementary pair of literals, and is
// open when it is not closed and every non-literal on it has been expanded on
// that branch. A finite set Γ is satisfiable iff its finished tableau has an
// open branch.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tableaux/formula.hpp"
#include "tableaux/semantics.hpp"

namespace tableaux {

enum class RuleKind {
  DoubleNegation,
  AlphaAnd,         // φ∧χ      / φ ; χ
  AlphaNotOr,       // ¬(φ∨χ)   / ¬φ ; ¬χ
  AlphaNotImplies,  // ¬(φ→χ)   / φ ; ¬χ
  BetaOr,           // φ∨χ      / φ | χ
  BetaNotAnd,       // ¬(φ∧χ)   / ¬φ | ¬χ
  BetaImplies,      // φ→χ      / ¬φ | χ
};

/// Stable machine name, e.g. "alpha:not-or".
std::string ruleName(RuleKind kind);
RuleKind ruleFromName(const std::string& name);

struct DoubleNegationRule {
  Formula result;
};
struct AlphaRule {
  RuleKind kind;
  Formula first;
  Formula second;
};
struct BetaRule {
  RuleKind kind;
  Formula left;
  Formula right;
};
struct LiteralClass {
  Literal literal;
};
using RuleClass = std::variant<DoubleNegationRule, AlphaRule, BetaRule, LiteralClass>;

RuleClass classify(const Formula& f);
/// "double-negation", "alpha", "beta" or "literal".
std::string ruleClassName(const Formula& f);

using NodeId = std::size_t;

struct Provenance {
  NodeId source;
  RuleKind rule;
};

struct TableauNode {
  NodeId id;
  Formula formula;
  std::optional<NodeId> parent;
  std::vector<NodeId> children;
  std::optional<Provenance> producedBy;
};

enum class BranchStatus { Open, Closed, Unfinished };
std::string toString(BranchStatus status);

struct Leaf {
  int number;  // 1-based, left to right
  NodeId node;
  BranchStatus status;
  std::vector<Literal> literals;  // in root-to-leaf order, deduplicated
};

struct OpenBranch {
  int number;
  std::vector<Literal> literals;
};

struct Step {
  NodeId node;
  NodeId leaf;
  friend bool operator==(const Step&, const Step&) = default;
};

class TableauError : public std::runtime_error {
 public:
  enum class Code {
    UnknownNode,
    NotALeaf,
    NodeNotOnBranch,
    NotApplicable,
    BranchClosed,
    AlreadyExpanded,
    UnfinishedTableau,
  };

  TableauError(Code code, std::string explanation)
      : std::runtime_error(std::move(explanation)), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

/// SCREAMING_SNAKE identifier used on the wire.
std::string errorCodeName(TableauError::Code code);

class Tableau {
 public:
  /// The formulas of Γ are stacked as a single initial branch, unexpanded.
  explicit Tableau(const std::vector<Formula>& gamma);

  const std::vector<TableauNode>& nodes() const noexcept { return nodes_; }
  const TableauNode& node(NodeId id) const;
  const std::vector<NodeId>& initial() const noexcept { return initial_; }
  std::vector<Formula> gamma() const;

  /// Node ids from the root down to `leaf`.
  std::vector<NodeId> branch(NodeId leaf) const;
  std::vector<Leaf> leaves() const;
  BranchStatus status(NodeId leaf) const;

  bool expandedOn(NodeId node, NodeId leaf) const;
  /// Expanded on every branch through the node.
  bool expanded(NodeId node) const;
  /// expanded() for every node, indexed by id.
  std::vector<bool> expandedFlags() const;
  bool finished() const;
  std::vector<Step> legalSteps() const;

  /// Applies the rule for `node` at the end of the branch through `leaf`.
  /// Returns the ids of the added nodes. Throws TableauError.
  std::vector<NodeId> expand(NodeId node, NodeId leaf);

  /// Expands every unfinished branch with priority ¬¬ > α > β, oldest node
  /// first, working left to right. `onStep` sees every applied move.
  void expandAll(const std::function<void(const Step&, RuleKind)>& onStep = nullptr);

 private:
  struct BranchInfo;
  BranchInfo analyze(NodeId leaf) const;
  BranchStatus statusOf(const BranchInfo& info) const;
  NodeId addNode(Formula f, NodeId parent, Provenance from);
  std::vector<NodeId> applyAt(NodeId node, NodeId leaf);
  void requireKnown(NodeId id) const;

  std::vector<TableauNode> nodes_;
  std::vector<NodeId> initial_;
};

Tableau applyRule(Tableau t, NodeId node, NodeId leaf);
Tableau buildTableau(const std::vector<Formula>& gamma);

/// These throw TableauError::UnfinishedTableau on an unfinished tableau.
bool isOpen(const Tableau& t);
std::vector<OpenBranch> openBranches(const Tableau& t);
/// Universe = open leaf numbers; v(a) = states whose branch carries a.
std::optional<Model> extractModel(const Tableau& t);

struct SatResult {
  bool satisfiable;
  std::optional<Model> model;
  Tableau tableau;
};
SatResult checkSatisfiable(const std::vector<Formula>& gamma);

struct ValidityResult {
  bool valid;
  std::optional<Model> counterModel;
  Tableau tableau;  // of ¬f
};
ValidityResult checkValid(const Formula& f);

bool checkEntails(const std::vector<Formula>& premises, const Formula& conclusion);

nlohmann::json toJson(const Tableau& t);
nlohmann::json toJson(const TableauNode& n, const Tableau& t);

}  // namespace tableaux
