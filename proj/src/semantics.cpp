#include "tableaux/semantics.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>

namespace tableaux {

bool StandardValuation::at(const std::string& atom) const {
  auto it = values_.find(atom);
  if (it == values_.end())
    throw EvaluationError("valuation does not assign a truth value to atom '" + atom + "'", atom);
  return it->second;
}

Model::Model(StateSet universe, std::map<std::string, StateSet> valuation)
    : universe_(std::move(universe)), valuation_(std::move(valuation)) {
  if (universe_.empty()) throw DomainError("a model needs a non-empty universe of states");
  if (*universe_.begin() <= 0) throw DomainError("state ids must be positive integers");
  for (const auto& [atom, states] : valuation_) {
    if (!std::includes(universe_.begin(), universe_.end(), states.begin(), states.end()))
      throw DomainError("v(" + atom + ") is not a subset of the universe");
  }
}

const StateSet& Model::statesOf(const std::string& atom) const {
  auto it = valuation_.find(atom);
  if (it == valuation_.end())
    throw EvaluationError("model does not interpret atom '" + atom + "'", atom);
  return it->second;
}

StandardValuation TruthTable::valuation(const Row& row) const {
  StandardValuation v;
  for (std::size_t i = 0; i < atoms.size(); ++i) v.set(atoms[i], atomValue(row, i));
  return v;
}

std::string TruthTable::bits(const Row& row) const {
  std::string s;
  for (std::size_t i = 0; i < atoms.size(); ++i) s += atomValue(row, i) ? '1' : '0';
  return s;
}

bool evalStandard(const Formula& f, const StandardValuation& v) {
  switch (f.kind()) {
    case Connective::Atom: return v.at(f.name());
    case Connective::Not: return !evalStandard(f.inner(), v);
    case Connective::And: return evalStandard(f.left(), v) && evalStandard(f.right(), v);
    case Connective::Or: return evalStandard(f.left(), v) || evalStandard(f.right(), v);
    case Connective::Implies: return !evalStandard(f.left(), v) || evalStandard(f.right(), v);
  }
  return false;
}

namespace {
void checkCapacity(std::size_t n) {
  if (n > kMaxTruthTableAtoms)
    throw CapacityError("truth table over " + std::to_string(n) + " atoms exceeds the limit of " +
                        std::to_string(kMaxTruthTableAtoms));
}
}  // namespace

TruthTable truthTable(const Formula& f) {
  TruthTable table;
  table.atoms = atoms(f);
  const std::size_t n = table.atoms.size();
  checkCapacity(n);
  const std::uint32_t count = std::uint32_t{1} << n;
  table.rows.reserve(count);
  for (std::uint32_t r = 0; r < count; ++r) {
    TruthTable::Row row{count - 1 - r, false};
    row.value = evalStandard(f, table.valuation(row));
    table.rows.push_back(row);
  }
  return table;
}

bool isSatisfiableTT(const Formula& f) {
  auto table = truthTable(f);
  return std::any_of(table.rows.begin(), table.rows.end(), [](const auto& r) { return r.value; });
}

bool isValidTT(const Formula& f) {
  auto table = truthTable(f);
  return std::all_of(table.rows.begin(), table.rows.end(), [](const auto& r) { return r.value; });
}

namespace {

using Column = std::vector<std::uint64_t>;

Column evalColumn(const Formula& f, const std::map<std::string, Column>& atomColumns,
                  std::size_t words, std::uint64_t lastMask) {
  Column out(words);
  switch (f.kind()) {
    case Connective::Atom: {
      auto it = atomColumns.find(f.name());
      if (it == atomColumns.end())
        throw EvaluationError("atom order does not include '" + f.name() + "'", f.name());
      return it->second;
    }
    case Connective::Not: {
      auto a = evalColumn(f.inner(), atomColumns, words, lastMask);
      for (std::size_t i = 0; i < words; ++i) out[i] = ~a[i];
      break;
    }
    default: {
      auto a = evalColumn(f.left(), atomColumns, words, lastMask);
      auto b = evalColumn(f.right(), atomColumns, words, lastMask);
      for (std::size_t i = 0; i < words; ++i) {
        switch (f.kind()) {
          case Connective::And: out[i] = a[i] & b[i]; break;
          case Connective::Or: out[i] = a[i] | b[i]; break;
          default: out[i] = ~a[i] | b[i]; break;
        }
      }
    }
  }
  out.back() &= lastMask;
  return out;
}

}  // namespace

std::vector<std::uint64_t> truthColumn(const Formula& f, const std::vector<std::string>& order) {
  const std::size_t n = order.size();
  checkCapacity(n);
  const std::uint64_t rows = std::uint64_t{1} << n;
  const std::size_t words = static_cast<std::size_t>((rows + 63) / 64);
  const std::uint64_t lastMask = rows % 64 == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rows) - 1;

  std::map<std::string, Column> atomColumns;
  for (std::size_t i = 0; i < n; ++i) {
    Column col(words);
    const std::size_t shift = n - 1 - i;
    for (std::uint64_t m = 0; m < rows; ++m)
      if ((m >> shift) & 1u) col[m / 64] |= std::uint64_t{1} << (m % 64);
    atomColumns.emplace(order[i], std::move(col));
  }
  return evalColumn(f, atomColumns, words, lastMask);
}

StateSet interpret(const Model& m, const Formula& f) {
  const StateSet& u = m.universe();
  StateSet out;
  auto complement = [&u](const StateSet& s) {
    StateSet c;
    std::set_difference(u.begin(), u.end(), s.begin(), s.end(), std::inserter(c, c.end()));
    return c;
  };
  switch (f.kind()) {
    case Connective::Atom:
      return m.statesOf(f.name());
    case Connective::Not:
      return complement(interpret(m, f.inner()));
    case Connective::And: {
      auto a = interpret(m, f.left());
      auto b = interpret(m, f.right());
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
      return out;
    }
    case Connective::Or: {
      auto a = interpret(m, f.left());
      auto b = interpret(m, f.right());
      std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
      return out;
    }
    case Connective::Implies: {
      auto a = complement(interpret(m, f.left()));
      auto b = interpret(m, f.right());
      std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
      return out;
    }
  }
  return out;
}

namespace {
bool satisfiesAt(const Model& m, StateId s, const Formula& f) {
  switch (f.kind()) {
    case Connective::Atom: return m.statesOf(f.name()).count(s) != 0;
    case Connective::Not: return !satisfiesAt(m, s, f.inner());
    case Connective::And: return satisfiesAt(m, s, f.left()) && satisfiesAt(m, s, f.right());
    case Connective::Or: return satisfiesAt(m, s, f.left()) || satisfiesAt(m, s, f.right());
    case Connective::Implies: return !satisfiesAt(m, s, f.left()) || satisfiesAt(m, s, f.right());
  }
  return false;
}

void requireState(const Model& m, StateId s) {
  if (m.universe().count(s) == 0)
    throw DomainError("state " + std::to_string(s) + " is not in the universe " +
                      formatStateSet(m.universe()));
}
}  // namespace

bool satisfies(const Model& m, StateId s, const Formula& f) {
  requireState(m, s);
  return satisfiesAt(m, s, f);
}

Model modelFromValuation(const StandardValuation& v) {
  std::map<std::string, StateSet> valuation;
  for (const auto& [atom, value] : v.assignment())
    valuation[atom] = value ? StateSet{1} : StateSet{};
  return Model({1}, std::move(valuation));
}

StandardValuation valuationFromState(const Model& m, StateId s,
                                     const std::vector<std::string>& atomList) {
  requireState(m, s);
  StandardValuation v;
  for (const auto& atom : atomList) v.set(atom, m.statesOf(atom).count(s) != 0);
  return v;
}

// ---------------------------------------------------------------------------

std::string formatStateSet(const StateSet& states) {
  if (states.empty()) return "∅";
  std::string out = "{";
  bool first = true;
  for (StateId s : states) {
    if (!first) out += ",";
    out += std::to_string(s);
    first = false;
  }
  return out + "}";
}

namespace {
std::size_t displayWidth(const std::string& s) {
  // counts UTF-8 lead bytes
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

std::string padded(const std::string& s, std::size_t width) {
  std::size_t w = displayWidth(s);
  return s + std::string(width > w ? width - w : 0, ' ');
}
}  // namespace

std::string formatTruthTable(const TruthTable& table, const std::string& label) {
  std::ostringstream os;
  for (const auto& a : table.atoms) os << a << ' ';
  os << "| " << label << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < table.atoms.size(); ++i)
      os << padded(table.atomValue(row, i) ? "1" : "0", displayWidth(table.atoms[i])) << ' ';
    os << "| " << (row.value ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string truthTableCsv(const TruthTable& table, const std::string& label) {
  std::ostringstream os;
  for (const auto& a : table.atoms) os << a << ',';
  std::string escaped;
  for (char c : label) {
    if (c == '"') escaped += '"';
    escaped += c;
  }
  os << '"' << escaped << '"' << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < table.atoms.size(); ++i)
      os << (table.atomValue(row, i) ? 1 : 0) << ',';
    os << (row.value ? 1 : 0) << '\n';
  }
  return os.str();
}

nlohmann::json toJson(const Model& m) {
  nlohmann::json valuation = nlohmann::json::object();
  for (const auto& [atom, states] : m.valuation()) valuation[atom] = states;
  return {{"universe", m.universe()}, {"valuation", valuation}};
}

Model modelFromJson(const nlohmann::json& j) {
  auto universe = j.at("universe").get<StateSet>();
  std::map<std::string, StateSet> valuation;
  for (const auto& [atom, states] : j.at("valuation").items())
    valuation[atom] = states.get<StateSet>();
  return Model(std::move(universe), std::move(valuation));
}

nlohmann::json toJson(const TruthTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    std::vector<int> assignment;
    for (std::size_t i = 0; i < table.atoms.size(); ++i)
      assignment.push_back(table.atomValue(row, i) ? 1 : 0);
    rows.push_back({{"assignment", assignment}, {"value", row.value ? 1 : 0}});
  }
  return {{"atoms", table.atoms}, {"rows", rows}};
}

}  // namespace tableaux
