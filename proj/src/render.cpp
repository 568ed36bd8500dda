#include "tableaux/render.hpp"

#include <sstream>
#include <unordered_map>

#include "tableaux/semantics.hpp"

namespace tableaux {

namespace {

class AsciiRenderer {
 public:
  explicit AsciiRenderer(const Tableau& t) : t_(t) {
    for (const auto& leaf : t.leaves()) leaves_.emplace(leaf.node, leaf);
  }

  std::string run() {
    chain(0, "", "");
    return os_.str();
  }

 private:
  std::string label(NodeId id) const {
    std::string s = print(t_.node(id).formula);
    auto it = leaves_.find(id);
    if (it == leaves_.end()) return s;
    s += " [" + std::to_string(it->second.number) + "]";
    if (it->second.status == BranchStatus::Closed) s += " ×";
    return s;
  }

  void chain(NodeId id, const std::string& first, const std::string& rest) {
    os_ << first << label(id) << '\n';
    NodeId cur = id;
    while (t_.node(cur).children.size() == 1) {
      cur = t_.node(cur).children[0];
      os_ << rest << label(cur) << '\n';
    }
    const auto& children = t_.node(cur).children;
    for (std::size_t i = 0; i < children.size(); ++i) {
      bool last = i + 1 == children.size();
      chain(children[i], rest + (last ? "└─ " : "├─ "), rest + (last ? "   " : "│  "));
    }
  }

  const Tableau& t_;
  std::unordered_map<NodeId, Leaf> leaves_;
  std::ostringstream os_;
};

std::string dotEscape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string renderAscii(const Tableau& t) { return AsciiRenderer(t).run(); }

std::string renderDot(const Tableau& t) {
  std::unordered_map<NodeId, Leaf> leaves;
  for (const auto& leaf : t.leaves()) leaves.emplace(leaf.node, leaf);

  std::ostringstream os;
  os << "digraph tableau {\n";
  os << "  node [shape=plaintext];\n";
  for (const auto& n : t.nodes()) {
    std::string label = print(n.formula);
    std::string attrs;
    if (auto it = leaves.find(n.id); it != leaves.end()) {
      label += " [" + std::to_string(it->second.number) + "]";
      switch (it->second.status) {
        case BranchStatus::Closed:
          label += " ×";
          attrs = ", shape=box, color=red, fontcolor=red";
          break;
        case BranchStatus::Open:
          attrs = ", shape=box";
          break;
        case BranchStatus::Unfinished:
          attrs = ", shape=box, style=dashed";
          break;
      }
    }
    os << "  n" << n.id << " [label=\"" << dotEscape(label) << "\"" << attrs << "];\n";
  }
  for (const auto& n : t.nodes())
    for (NodeId c : n.children) os << "  n" << n.id << " -> n" << c << ";\n";
  os << "}\n";
  return os.str();
}

VennRegionMap vennRegions(const Formula& f) {
  VennRegionMap venn;
  venn.atoms = atoms(f);
  if (venn.atoms.size() > kMaxVennAtoms)
    throw TooManyAtoms("Venn regions are drawn for at most " + std::to_string(kMaxVennAtoms) +
                       " atoms; the formula has " + std::to_string(venn.atoms.size()));
  const std::uint32_t count = std::uint32_t{1} << venn.atoms.size();
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    StandardValuation v;
    for (std::size_t i = 0; i < venn.atoms.size(); ++i) v.set(venn.atoms[i], (mask >> i) & 1u);
    venn.regions[mask] = evalStandard(f, v);
  }
  return venn;
}

nlohmann::json toJson(const VennRegionMap& venn) {
  nlohmann::json regions = nlohmann::json::object();
  for (const auto& [mask, shaded] : venn.regions) regions[std::to_string(mask)] = shaded;
  return {{"atoms", venn.atoms}, {"regions", regions}};
}

}  // namespace tableaux
