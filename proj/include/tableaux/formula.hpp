// Propositional formulas over lowercase atoms with ¬, ∧, ∨ and →.

#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tableaux {

enum class Connective { Atom, Not, And, Or, Implies };

/// Immutable formula value. Copies share structure; equality is structural.
class Formula {
 public:
  static Formula atom(std::string name);
  static Formula negation(Formula inner);
  static Formula conjunction(Formula left, Formula right);
  static Formula disjunction(Formula left, Formula right);
  static Formula implication(Formula left, Formula right);

  Connective kind() const noexcept;
  bool isAtom() const noexcept { return kind() == Connective::Atom; }
  bool isNegation() const noexcept { return kind() == Connective::Not; }
  bool isBinary() const noexcept { return !isAtom() && !isNegation(); }
  /// Atom or negated atom.
  bool isLiteral() const noexcept;

  // Accessors assert on the wrong kind.
  const std::string& name() const;
  const Formula& inner() const;
  const Formula& left() const;
  const Formula& right() const;

  /// Number of AST nodes (atoms included).
  std::size_t size() const noexcept;

  friend bool operator==(const Formula& a, const Formula& b) noexcept;
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) noexcept;

 private:
  struct Node;
  static Formula makeBinary(Connective kind, Formula left, Formula right);
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// An atom or its negation. Ordered by atom name, positive before negative.
struct Literal {
  std::string atom;
  bool positive = true;

  Literal complement() const { return {atom, !positive}; }
  friend bool operator==(const Literal&, const Literal&) = default;
  friend std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
    if (auto c = a.atom <=> b.atom; c != 0) return c;
    // positive sorts first
    return b.positive <=> a.positive;
  }
};

std::optional<Literal> asLiteral(const Formula& f);
Formula toFormula(const Literal& lit);
std::string toString(const Literal& lit);

// ---------------------------------------------------------------------------
// Parsing

/// Raised for malformed input. `position` is a 1-based code-point column;
/// one past the last character denotes end of input.
class ParseError : public std::runtime_error {
 public:
  enum class Stage { Lex, Parse };

  ParseError(Stage stage, std::size_t position, std::string message, std::string detail,
             std::vector<std::string> expected = {});

  Stage stage() const noexcept { return stage_; }
  std::size_t position() const noexcept { return position_; }
  /// Offending character for lex errors, offending token text for parse errors.
  const std::string& detail() const noexcept { return detail_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  Stage stage_;
  std::size_t position_;
  std::string detail_;
  std::vector<std::string> expected_;
};

/// Precedence ¬ > ∧ > ∨ > →; ∧, ∨ associate left, → associates right.
/// Accepts `~ & | ->` and `¬ ∧ ∨ →`.
Formula parse(std::string_view text);

// ---------------------------------------------------------------------------
// Printing

struct PrintOptions {
  bool ascii = false;
  /// Parenthesize every binary subformula below the top level.
  bool fullParens = false;
};

std::string print(const Formula& f, PrintOptions options = {});
std::ostream& operator<<(std::ostream& os, const Formula& f);

// ---------------------------------------------------------------------------
// Structural queries

/// Sorted, duplicate-free atom names.
std::vector<std::string> atoms(const Formula& f);
std::vector<std::string> atoms(const std::vector<Formula>& fs);

/// Number of connectives.
std::size_t degree(const Formula& f) noexcept;

/// Right-nested conjunction of a non-empty list.
Formula conjoin(const std::vector<Formula>& fs);

}  // namespace tableaux
