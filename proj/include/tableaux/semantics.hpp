// Truth-functional and set-theoretic semantics.
//
// A set-theoretic model is a non-empty finite universe of states together with
// a valuation mapping every atom to the set of states where it holds. Formulas
// denote the set of states satisfying them:
//
//   v(¬φ)   = U \ v(φ)
//   v(φ∧χ)  = v(φ) ∩ v(χ)
//   v(φ∨χ)  = v(φ) ∪ v(χ)
//   v(φ→χ)  = (U \ v(φ)) ∪ v(χ)

#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tableaux/formula.hpp"

namespace tableaux {

using StateId = int;
using StateSet = std::set<StateId>;

/// A formula mentions an atom the valuation or model does not cover.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, std::string atom)
      : std::runtime_error(what), atom_(std::move(atom)) {}
  const std::string& atom() const noexcept { return atom_; }

 private:
  std::string atom_;
};

/// A state outside the model's universe, or a malformed model.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive enumeration requested over too many atoms.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxTruthTableAtoms = 20;

class StandardValuation {
 public:
  StandardValuation() = default;
  StandardValuation(std::initializer_list<std::pair<const std::string, bool>> init)
      : values_(init) {}

  void set(const std::string& atom, bool value) { values_[atom] = value; }
  bool contains(const std::string& atom) const { return values_.count(atom) != 0; }
  /// Throws EvaluationError naming the atom when unmapped.
  bool at(const std::string& atom) const;
  const std::map<std::string, bool>& assignment() const noexcept { return values_; }

  friend bool operator==(const StandardValuation&, const StandardValuation&) = default;

 private:
  std::map<std::string, bool> values_;
};

class Model {
 public:
  /// Throws DomainError when the universe is empty, holds a non-positive id,
  /// or a valuation entry escapes the universe.
  Model(StateSet universe, std::map<std::string, StateSet> valuation);

  const StateSet& universe() const noexcept { return universe_; }
  const std::map<std::string, StateSet>& valuation() const noexcept { return valuation_; }
  /// v(atom); throws EvaluationError when the atom is not interpreted.
  const StateSet& statesOf(const std::string& atom) const;

  friend bool operator==(const Model&, const Model&) = default;

 private:
  StateSet universe_;
  std::map<std::string, StateSet> valuation_;
};

/// Rows run from all-true down to all-false; the first atom is the most
/// significant bit, so three atoms give 111, 110, 101, ... 000.
struct TruthTable {
  struct Row {
    std::uint32_t assignment;  // bit (n-1-i) holds atom i
    bool value;
  };

  std::vector<std::string> atoms;
  std::vector<Row> rows;

  bool atomValue(const Row& row, std::size_t atomIndex) const {
    return ((row.assignment >> (atoms.size() - 1 - atomIndex)) & 1u) != 0;
  }
  StandardValuation valuation(const Row& row) const;
  /// "101"-style rendering of the row's assignment.
  std::string bits(const Row& row) const;
};

bool evalStandard(const Formula& f, const StandardValuation& v);

/// Throws CapacityError beyond kMaxTruthTableAtoms.
TruthTable truthTable(const Formula& f);
bool isSatisfiableTT(const Formula& f);
bool isValidTT(const Formula& f);

/// Bit-parallel result column over `order` (which must cover atoms(f)).
/// Bit m of the column is the value under the assignment whose binary
/// representation is m, first atom most significant.
std::vector<std::uint64_t> truthColumn(const Formula& f, const std::vector<std::string>& order);

StateSet interpret(const Model& m, const Formula& f);
bool satisfies(const Model& m, StateId s, const Formula& f);

/// Singleton model over state 1 agreeing with `v`.
Model modelFromValuation(const StandardValuation& v);
StandardValuation valuationFromState(const Model& m, StateId s,
                                     const std::vector<std::string>& atomList);

// Serialization

std::string formatStateSet(const StateSet& states);
/// Aligned text; the last column is headed by `label`.
std::string formatTruthTable(const TruthTable& table, const std::string& label);
std::string truthTableCsv(const TruthTable& table, const std::string& label);

nlohmann::json toJson(const Model& m);
Model modelFromJson(const nlohmann::json& j);
nlohmann::json toJson(const TruthTable& table);

}  // namespace tableaux
