#include "tableaux/tableau.hpp"

#include <algorithm>
#include <set>

namespace tableaux {

std::string ruleName(RuleKind kind) {
  switch (kind) {
    case RuleKind::DoubleNegation: return "double-negation";
    case RuleKind::AlphaAnd: return "alpha:and";
    case RuleKind::AlphaNotOr: return "alpha:not-or";
    case RuleKind::AlphaNotImplies: return "alpha:not-implies";
    case RuleKind::BetaOr: return "beta:or";
    case RuleKind::BetaNotAnd: return "beta:not-and";
    case RuleKind::BetaImplies: return "beta:implies";
  }
  return "?";
}

RuleKind ruleFromName(const std::string& name) {
  for (auto k : {RuleKind::DoubleNegation, RuleKind::AlphaAnd, RuleKind::AlphaNotOr,
                 RuleKind::AlphaNotImplies, RuleKind::BetaOr, RuleKind::BetaNotAnd,
                 RuleKind::BetaImplies})
    if (ruleName(k) == name) return k;
  throw std::invalid_argument("unknown rule '" + name + "'");
}

RuleClass classify(const Formula& f) {
  using F = Formula;
  switch (f.kind()) {
    case Connective::Atom:
      return LiteralClass{{f.name(), true}};
    case Connective::And:
      return AlphaRule{RuleKind::AlphaAnd, f.left(), f.right()};
    case Connective::Or:
      return BetaRule{RuleKind::BetaOr, f.left(), f.right()};
    case Connective::Implies:
      return BetaRule{RuleKind::BetaImplies, F::negation(f.left()), f.right()};
    case Connective::Not:
      break;
  }
  const Formula& g = f.inner();
  switch (g.kind()) {
    case Connective::Atom:
      return LiteralClass{{g.name(), false}};
    case Connective::Not:
      return DoubleNegationRule{g.inner()};
    case Connective::Or:
      return AlphaRule{RuleKind::AlphaNotOr, F::negation(g.left()), F::negation(g.right())};
    case Connective::Implies:
      return AlphaRule{RuleKind::AlphaNotImplies, g.left(), F::negation(g.right())};
    case Connective::And:
      return BetaRule{RuleKind::BetaNotAnd, F::negation(g.left()), F::negation(g.right())};
  }
  return LiteralClass{};
}

std::string ruleClassName(const Formula& f) {
  static const char* names[] = {"double-negation", "alpha", "beta", "literal"};
  return names[classify(f).index()];
}

std::string toString(BranchStatus status) {
  switch (status) {
    case BranchStatus::Open: return "open";
    case BranchStatus::Closed: return "closed";
    case BranchStatus::Unfinished: return "unfinished";
  }
  return "?";
}

std::string errorCodeName(TableauError::Code code) {
  using C = TableauError::Code;
  switch (code) {
    case C::UnknownNode: return "UNKNOWN_NODE";
    case C::NotALeaf: return "NOT_A_LEAF";
    case C::NodeNotOnBranch: return "NODE_NOT_ON_BRANCH";
    case C::NotApplicable: return "NOT_APPLICABLE";
    case C::BranchClosed: return "BRANCH_CLOSED";
    case C::AlreadyExpanded: return "ALREADY_EXPANDED";
    case C::UnfinishedTableau: return "UNFINISHED_TABLEAU";
  }
  return "?";
}

// ---------------------------------------------------------------------------

struct Tableau::BranchInfo {
  std::vector<NodeId> path;
  std::vector<Literal> literals;
  std::vector<NodeId> expandedSources;  // sorted
  std::optional<Literal> clash;         // positive member of a complementary pair

  bool closed() const { return clash.has_value(); }
  bool hasExpanded(NodeId id) const {
    return std::binary_search(expandedSources.begin(), expandedSources.end(), id);
  }
};

Tableau::Tableau(const std::vector<Formula>& gamma) {
  if (gamma.empty()) throw std::invalid_argument("a tableau needs at least one formula");
  for (const auto& f : gamma) {
    NodeId id = nodes_.size();
    std::optional<NodeId> parent;
    if (id > 0) {
      parent = id - 1;
      nodes_.back().children.push_back(id);
    }
    nodes_.push_back(TableauNode{id, f, parent, {}, std::nullopt});
    initial_.push_back(id);
  }
}

void Tableau::requireKnown(NodeId id) const {
  if (id >= nodes_.size())
    throw TableauError(TableauError::Code::UnknownNode,
                       "There is no node " + std::to_string(id) + " in this tableau.");
}

const TableauNode& Tableau::node(NodeId id) const {
  requireKnown(id);
  return nodes_[id];
}

std::vector<Formula> Tableau::gamma() const {
  std::vector<Formula> out;
  for (NodeId id : initial_) out.push_back(nodes_[id].formula);
  return out;
}

std::vector<NodeId> Tableau::branch(NodeId leaf) const {
  requireKnown(leaf);
  std::vector<NodeId> path;
  std::optional<NodeId> cur = leaf;
  while (cur) {
    path.push_back(*cur);
    cur = nodes_[*cur].parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

Tableau::BranchInfo Tableau::analyze(NodeId leaf) const {
  BranchInfo info;
  info.path = branch(leaf);
  std::set<Literal> seen;
  for (NodeId id : info.path) {
    const TableauNode& n = nodes_[id];
    if (n.producedBy) info.expandedSources.push_back(n.producedBy->source);
    if (auto lit = asLiteral(n.formula)) {
      if (!seen.insert(*lit).second) continue;
      info.literals.push_back(*lit);
      if (!info.clash && seen.count(lit->complement()))
        info.clash = lit->positive ? *lit : lit->complement();
    }
  }
  std::sort(info.expandedSources.begin(), info.expandedSources.end());
  return info;
}

BranchStatus Tableau::status(NodeId leaf) const { return statusOf(analyze(leaf)); }

BranchStatus Tableau::statusOf(const BranchInfo& info) const {
  if (info.closed()) return BranchStatus::Closed;
  for (NodeId id : info.path)
    if (!nodes_[id].formula.isLiteral() && !info.hasExpanded(id)) return BranchStatus::Unfinished;
  return BranchStatus::Open;
}

std::vector<Leaf> Tableau::leaves() const {
  std::vector<Leaf> out;
  std::vector<NodeId> stack{0};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    const auto& children = nodes_[id].children;
    if (children.empty()) {
      BranchInfo info = analyze(id);
      out.push_back(Leaf{static_cast<int>(out.size()) + 1, id, statusOf(info), info.literals});
      continue;
    }
    for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

bool Tableau::expandedOn(NodeId node, NodeId leaf) const {
  requireKnown(node);
  BranchInfo info = analyze(leaf);
  return std::find(info.path.begin(), info.path.end(), node) != info.path.end() &&
         info.hasExpanded(node);
}

bool Tableau::expanded(NodeId node) const {
  requireKnown(node);
  if (nodes_[node].formula.isLiteral()) return false;
  std::vector<NodeId> stack{node};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    if (nodes_[id].children.empty()) {
      if (!expandedOn(node, id)) return false;
      continue;
    }
    for (NodeId c : nodes_[id].children) stack.push_back(c);
  }
  return true;
}

std::vector<bool> Tableau::expandedFlags() const {
  std::vector<bool> flags(nodes_.size());
  for (const auto& n : nodes_) flags[n.id] = !n.formula.isLiteral();
  for (const auto& n : nodes_) {
    if (!n.children.empty()) continue;
    BranchInfo info = analyze(n.id);
    for (NodeId id : info.path)
      if (!info.hasExpanded(id)) flags[id] = false;
  }
  return flags;
}

bool Tableau::finished() const {
  auto ls = leaves();
  return std::none_of(ls.begin(), ls.end(),
                      [](const Leaf& l) { return l.status == BranchStatus::Unfinished; });
}

std::vector<Step> Tableau::legalSteps() const {
  std::vector<Step> steps;
  for (const Leaf& leaf : leaves()) {
    if (leaf.status != BranchStatus::Unfinished) continue;
    BranchInfo info = analyze(leaf.node);
    for (NodeId id : info.path)
      if (!nodes_[id].formula.isLiteral() && !info.hasExpanded(id)) steps.push_back({id, leaf.node});
  }
  return steps;
}

NodeId Tableau::addNode(Formula f, NodeId parent, Provenance from) {
  NodeId id = nodes_.size();
  nodes_.push_back(TableauNode{id, std::move(f), parent, {}, from});
  nodes_[parent].children.push_back(id);
  return id;
}

std::vector<NodeId> Tableau::applyAt(NodeId node, NodeId leaf) {
  RuleClass rc = classify(nodes_[node].formula);
  if (auto* dn = std::get_if<DoubleNegationRule>(&rc))
    return {addNode(dn->result, leaf, {node, RuleKind::DoubleNegation})};
  if (auto* a = std::get_if<AlphaRule>(&rc)) {
    NodeId first = addNode(a->first, leaf, {node, a->kind});
    NodeId second = addNode(a->second, first, {node, a->kind});
    return {first, second};
  }
  const auto& b = std::get<BetaRule>(rc);
  NodeId left = addNode(b.left, leaf, {node, b.kind});
  NodeId right = addNode(b.right, leaf, {node, b.kind});
  return {left, right};
}

std::vector<NodeId> Tableau::expand(NodeId node, NodeId leaf) {
  using C = TableauError::Code;
  requireKnown(node);
  requireKnown(leaf);
  const std::string formula = print(nodes_[node].formula);
  if (!nodes_[leaf].children.empty())
    throw TableauError(C::NotALeaf, "Node " + std::to_string(leaf) +
                                        " is not the end of a branch. Rules extend a branch at "
                                        "its leaf, so choose a leaf below it.");
  BranchInfo info = analyze(leaf);
  if (std::find(info.path.begin(), info.path.end(), node) == info.path.end())
    throw TableauError(C::NodeNotOnBranch,
                       "The formula " + formula + " (node " + std::to_string(node) +
                           ") does not lie on the branch ending at node " + std::to_string(leaf) +
                           ", so it cannot be used to extend that branch.");
  if (nodes_[node].formula.isLiteral())
    throw TableauError(C::NotApplicable,
                       formula + " is a literal. No rule decomposes a literal: it is already as "
                                 "simple as a formula gets, and only matters for closing a "
                                 "branch.");
  if (info.closed())
    throw TableauError(C::BranchClosed,
                       "The branch ending at node " + std::to_string(leaf) +
                           " is already closed: it contains both " + info.clash->atom + " and ¬" +
                           info.clash->atom + ". A closed branch is never extended.");
  if (info.hasExpanded(node))
    throw TableauError(C::AlreadyExpanded,
                       "The rule for " + formula +
                           " has already been applied on this branch. Each formula is expanded "
                           "once per branch.");
  return applyAt(node, leaf);
}

namespace {
int priority(const Formula& f) {
  switch (classify(f).index()) {
    case 0: return 0;  // ¬¬
    case 1: return 1;  // α
    case 2: return 2;  // β
    default: return 3;
  }
}
}  // namespace

void Tableau::expandAll(const std::function<void(const Step&, RuleKind)>& onStep) {
  std::vector<NodeId> stack;
  {
    auto ls = leaves();
    for (auto it = ls.rbegin(); it != ls.rend(); ++it) stack.push_back(it->node);
  }
  while (!stack.empty()) {
    NodeId leaf = stack.back();
    stack.pop_back();
    BranchInfo info = analyze(leaf);
    if (info.closed()) continue;

    std::optional<NodeId> next;
    int best = 3;
    for (NodeId id : info.path) {
      const Formula& f = nodes_[id].formula;
      if (f.isLiteral() || info.hasExpanded(id)) continue;
      int p = priority(f);
      if (p < best) {
        best = p;
        next = id;
      }
    }
    if (!next) continue;

    auto added = applyAt(*next, leaf);
    if (onStep) onStep(Step{*next, leaf}, nodes_[added[0]].producedBy->rule);
    if (added.size() == 2 && nodes_[added[1]].parent == leaf) {
      // β: left branch first
      stack.push_back(added[1]);
      stack.push_back(added[0]);
    } else {
      stack.push_back(added.back());
    }
  }
}

Tableau applyRule(Tableau t, NodeId node, NodeId leaf) {
  t.expand(node, leaf);
  return t;
}

Tableau buildTableau(const std::vector<Formula>& gamma) {
  Tableau t(gamma);
  t.expandAll();
  return t;
}

namespace {
std::vector<Leaf> finishedLeaves(const Tableau& t) {
  auto ls = t.leaves();
  for (const auto& l : ls)
    if (l.status == BranchStatus::Unfinished)
      throw TableauError(TableauError::Code::UnfinishedTableau,
                         "The tableau is not finished yet: branch " + std::to_string(l.number) +
                             " still has formulas to expand.");
  return ls;
}
}  // namespace

bool isOpen(const Tableau& t) {
  auto ls = finishedLeaves(t);
  return std::any_of(ls.begin(), ls.end(),
                     [](const Leaf& l) { return l.status == BranchStatus::Open; });
}

std::vector<OpenBranch> openBranches(const Tableau& t) {
  std::vector<OpenBranch> out;
  for (auto& l : finishedLeaves(t))
    if (l.status == BranchStatus::Open) out.push_back({l.number, std::move(l.literals)});
  return out;
}

std::optional<Model> extractModel(const Tableau& t) {
  auto branches = openBranches(t);
  if (branches.empty()) return std::nullopt;
  StateSet universe;
  std::map<std::string, StateSet> valuation;
  for (const auto& a : atoms(t.gamma())) valuation[a];
  for (const auto& b : branches) {
    universe.insert(b.number);
    for (const auto& lit : b.literals)
      if (lit.positive) valuation[lit.atom].insert(b.number);
  }
  return Model(std::move(universe), std::move(valuation));
}

SatResult checkSatisfiable(const std::vector<Formula>& gamma) {
  Tableau t = buildTableau(gamma);
  auto model = extractModel(t);
  bool sat = model.has_value();
  return SatResult{sat, std::move(model), std::move(t)};
}

ValidityResult checkValid(const Formula& f) {
  Tableau t = buildTableau({Formula::negation(f)});
  auto counter = extractModel(t);
  bool valid = !counter.has_value();
  return ValidityResult{valid, std::move(counter), std::move(t)};
}

bool checkEntails(const std::vector<Formula>& premises, const Formula& conclusion) {
  std::vector<Formula> gamma = premises;
  gamma.push_back(Formula::negation(conclusion));
  return !isOpen(buildTableau(gamma));
}

// ---------------------------------------------------------------------------

namespace {
nlohmann::json nodeJson(const TableauNode& n, bool expanded) {
  nlohmann::json j;
  j["id"] = n.id;
  j["formula"] = print(n.formula);
  j["parent"] = n.parent ? nlohmann::json(*n.parent) : nlohmann::json(nullptr);
  j["children"] = n.children;
  j["rule"] = n.producedBy ? nlohmann::json{{"source", n.producedBy->source},
                                            {"kind", ruleName(n.producedBy->rule)}}
                           : nlohmann::json(nullptr);
  j["expanded"] = expanded;
  j["class"] = ruleClassName(n.formula);
  return j;
}
}  // namespace

nlohmann::json toJson(const TableauNode& n, const Tableau& t) {
  return nodeJson(n, t.expanded(n.id));
}

nlohmann::json toJson(const Tableau& t) {
  nlohmann::json nodes = nlohmann::json::array();
  auto flags = t.expandedFlags();
  for (const auto& n : t.nodes()) nodes.push_back(nodeJson(n, flags[n.id]));
  nlohmann::json leaves = nlohmann::json::array();
  for (const auto& l : t.leaves()) {
    std::vector<std::string> lits;
    for (const auto& lit : l.literals) lits.push_back(toString(lit));
    leaves.push_back(
        {{"number", l.number}, {"node", l.node}, {"status", toString(l.status)}, {"literals", lits}});
  }
  return {{"nodes", nodes}, {"leaves", leaves}};
}

}  // namespace tableaux
