#include "tableaux/formula.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>

namespace tableaux {

struct Formula::Node {
  Connective kind;
  std::string name;
  std::optional<Formula> left;
  std::optional<Formula> right;
  std::size_t size;
};

namespace {

bool validAtomName(std::string_view name) {
  if (name.empty() || name[0] < 'a' || name[0] > 'z') return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

}  // namespace

Formula Formula::atom(std::string name) {
  if (!validAtomName(name)) throw std::invalid_argument("invalid atom name '" + name + "'");
  return Formula(std::make_shared<const Node>(Node{Connective::Atom, std::move(name), {}, {}, 1}));
}

Formula Formula::negation(Formula inner) {
  std::size_t size = inner.size() + 1;
  return Formula(
      std::make_shared<const Node>(Node{Connective::Not, {}, std::move(inner), {}, size}));
}

namespace {
constexpr bool isBinaryKind(Connective c) {
  return c == Connective::And || c == Connective::Or || c == Connective::Implies;
}
}  // namespace

Formula Formula::makeBinary(Connective kind, Formula left, Formula right) {
  std::size_t size = left.size() + right.size() + 1;
  return Formula(
      std::make_shared<const Node>(Node{kind, {}, std::move(left), std::move(right), size}));
}

Formula Formula::conjunction(Formula left, Formula right) {
  return makeBinary(Connective::And, std::move(left), std::move(right));
}
Formula Formula::disjunction(Formula left, Formula right) {
  return makeBinary(Connective::Or, std::move(left), std::move(right));
}
Formula Formula::implication(Formula left, Formula right) {
  return makeBinary(Connective::Implies, std::move(left), std::move(right));
}

Connective Formula::kind() const noexcept { return node_->kind; }

bool Formula::isLiteral() const noexcept {
  return isAtom() || (isNegation() && node_->left->isAtom());
}

const std::string& Formula::name() const {
  assert(isAtom());
  return node_->name;
}

const Formula& Formula::inner() const {
  assert(isNegation());
  return *node_->left;
}

const Formula& Formula::left() const {
  assert(isBinaryKind(kind()));
  return *node_->left;
}

const Formula& Formula::right() const {
  assert(isBinaryKind(kind()));
  return *node_->right;
}

std::size_t Formula::size() const noexcept { return node_->size; }

bool operator==(const Formula& a, const Formula& b) noexcept {
  return (a <=> b) == 0;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) noexcept {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Connective::Atom:
      return a.name() <=> b.name();
    case Connective::Not:
      return a.inner() <=> b.inner();
    default:
      if (auto c = a.left() <=> b.left(); c != 0) return c;
      return a.right() <=> b.right();
  }
}

std::optional<Literal> asLiteral(const Formula& f) {
  if (f.isAtom()) return Literal{f.name(), true};
  if (f.isNegation() && f.inner().isAtom()) return Literal{f.inner().name(), false};
  return std::nullopt;
}

Formula toFormula(const Literal& lit) {
  auto a = Formula::atom(lit.atom);
  return lit.positive ? a : Formula::negation(a);
}

std::string toString(const Literal& lit) { return (lit.positive ? "" : "¬") + lit.atom; }

// ---------------------------------------------------------------------------
// Lexer

ParseError::ParseError(Stage stage, std::size_t position, std::string message,
                       std::string detail, std::vector<std::string> expected)
    : std::runtime_error(std::string(stage == Stage::Lex ? "lex" : "parse") + " error at position " +
                         std::to_string(position) + ": " + message),
      stage_(stage),
      position_(position),
      detail_(std::move(detail)),
      expected_(std::move(expected)) {}

namespace {

enum class Tok { Atom, Not, And, Or, Implies, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t position;
};

std::string describe(const Token& t) {
  return t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
}

std::size_t utf8Length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  std::size_t column = 1;
  auto lexError = [&](std::string character, std::string why) -> ParseError {
    return ParseError(ParseError::Stage::Lex, column, why, std::move(character));
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      ++column;
      continue;
    }
    if (c >= 'a' && c <= 'z') {
      std::size_t start = i;
      while (i < text.size() && ((text[i] >= 'a' && text[i] <= 'z') ||
                                 (text[i] >= '0' && text[i] <= '9') || text[i] == '_'))
        ++i;
      tokens.push_back({Tok::Atom, std::string(text.substr(start, i - start)), column});
      column += i - start;
      continue;
    }
    auto single = [&](Tok kind, std::size_t bytes) {
      tokens.push_back({kind, std::string(text.substr(i, bytes)), column});
      i += bytes;
      ++column;
    };
    switch (c) {
      case '~': single(Tok::Not, 1); continue;
      case '&': single(Tok::And, 1); continue;
      case '|': single(Tok::Or, 1); continue;
      case '(': single(Tok::LParen, 1); continue;
      case ')': single(Tok::RParen, 1); continue;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          tokens.push_back({Tok::Implies, "->", column});
          i += 2;
          column += 2;
          continue;
        }
        throw lexError("-", "unexpected character '-' (did you mean '->'?)");
      case '<':
        if (text.substr(i, 3) == "<->")
          throw lexError("<->", "the biconditional '<->' is not part of the language; "
                                "write (a -> b) & (b -> a) instead");
        throw lexError("<", "unexpected character '<'");
      default:
        break;
    }

    std::size_t len = std::min(utf8Length(static_cast<unsigned char>(c)), text.size() - i);
    std::string_view ch = text.substr(i, len);
    if (ch == "¬") { single(Tok::Not, len); continue; }
    if (ch == "∧") { single(Tok::And, len); continue; }
    if (ch == "∨") { single(Tok::Or, len); continue; }
    if (ch == "→") { single(Tok::Implies, len); continue; }
    if (ch == "↔")
      throw lexError(std::string(ch), "the biconditional '↔' is not part of the language; "
                                      "write (a → b) ∧ (b → a) instead");
    if (c >= 'A' && c <= 'Z')
      throw lexError(std::string(ch), "unexpected character '" + std::string(ch) +
                                          "' (atoms are lowercase identifiers)");
    throw lexError(std::string(ch), "unexpected character '" + std::string(ch) + "'");
  }
  tokens.push_back({Tok::End, "", column});
  return tokens;
}

// ---------------------------------------------------------------------------
// Recursive-descent parser
//
//   implication := disjunction ( '->' implication )?
//   disjunction := conjunction ( '|' conjunction )*
//   conjunction := unary ( '&' unary )*
//   unary       := '~' unary | atom | '(' implication ')'

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Formula parseAll() {
    Formula f = implication();
    if (peek().kind != Tok::End)
      fail({"'∧'", "'∨'", "'→'", "end of input"});
    return f;
  }

 private:
  static constexpr int kMaxDepth = 2000;

  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string msg = "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    msg += " but found " + describe(t);
    throw ParseError(ParseError::Stage::Parse, t.position, msg, t.text, std::move(expected));
  }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth)
        throw ParseError(ParseError::Stage::Parse, p.peek().position, "formula nested too deeply",
                         p.peek().text);
    }
    ~DepthGuard() { --p.depth_; }
  };

  Formula implication() {
    DepthGuard guard(*this);
    Formula lhs = disjunction();
    if (peek().kind == Tok::Implies) {
      advance();
      return Formula::implication(std::move(lhs), implication());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula lhs = conjunction();
    while (peek().kind == Tok::Or) {
      advance();
      lhs = Formula::disjunction(std::move(lhs), conjunction());
    }
    return lhs;
  }

  Formula conjunction() {
    Formula lhs = unary();
    while (peek().kind == Tok::And) {
      advance();
      lhs = Formula::conjunction(std::move(lhs), unary());
    }
    return lhs;
  }

  Formula unary() {
    DepthGuard guard(*this);
    switch (peek().kind) {
      case Tok::Not:
        advance();
        return Formula::negation(unary());
      case Tok::Atom:
        return Formula::atom(advance().text);
      case Tok::LParen: {
        advance();
        Formula inner = implication();
        if (peek().kind != Tok::RParen) fail({"')'"});
        advance();
        return inner;
      }
      default:
        fail({"atom", "'¬'", "'('"});
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

Formula parse(std::string_view text) {
  auto tokens = lex(text);
  if (tokens.size() == 1)
    throw ParseError(ParseError::Stage::Parse, tokens[0].position,
                     "expected a formula but found end of input", "", {"atom", "'¬'", "'('"});
  return Parser(std::move(tokens)).parseAll();
}

// ---------------------------------------------------------------------------
// Printer

namespace {

int precedence(Connective c) {
  switch (c) {
    case Connective::Implies: return 1;
    case Connective::Or: return 2;
    case Connective::And: return 3;
    case Connective::Not: return 4;
    case Connective::Atom: return 5;
  }
  return 0;
}

void render(const Formula& f, const PrintOptions& opt, std::string& out);

void renderChild(const Formula& f, bool parens, const PrintOptions& opt, std::string& out) {
  if (parens) out += '(';
  render(f, opt, out);
  if (parens) out += ')';
}

void render(const Formula& f, const PrintOptions& opt, std::string& out) {
  switch (f.kind()) {
    case Connective::Atom:
      out += f.name();
      return;
    case Connective::Not:
      out += opt.ascii ? "~" : "¬";
      renderChild(f.inner(), f.inner().isBinary(), opt, out);
      return;
    default:
      break;
  }
  const int prec = precedence(f.kind());
  const bool rightAssoc = f.kind() == Connective::Implies;
  const Formula& l = f.left();
  const Formula& r = f.right();
  bool lp = precedence(l.kind()) < prec || (rightAssoc && l.kind() == f.kind());
  bool rp = precedence(r.kind()) < prec || (!rightAssoc && r.kind() == f.kind());
  if (opt.fullParens) {
    lp = lp || l.isBinary();
    rp = rp || r.isBinary();
  }
  renderChild(l, lp, opt, out);
  switch (f.kind()) {
    case Connective::And: out += opt.ascii ? " & " : " ∧ "; break;
    case Connective::Or: out += opt.ascii ? " | " : " ∨ "; break;
    default: out += opt.ascii ? " -> " : " → "; break;
  }
  renderChild(r, rp, opt, out);
}

}  // namespace

std::string print(const Formula& f, PrintOptions options) {
  std::string out;
  render(f, options, out);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << print(f); }

// ---------------------------------------------------------------------------
// Queries

namespace {
void collectAtoms(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Connective::Atom: out.insert(f.name()); return;
    case Connective::Not: collectAtoms(f.inner(), out); return;
    default:
      collectAtoms(f.left(), out);
      collectAtoms(f.right(), out);
  }
}
}  // namespace

std::vector<std::string> atoms(const Formula& f) {
  std::set<std::string> s;
  collectAtoms(f, s);
  return {s.begin(), s.end()};
}

std::vector<std::string> atoms(const std::vector<Formula>& fs) {
  std::set<std::string> s;
  for (const auto& f : fs) collectAtoms(f, s);
  return {s.begin(), s.end()};
}

std::size_t degree(const Formula& f) noexcept {
  // every non-atom node is a connective
  std::size_t leaves = 0;
  std::vector<const Formula*> stack{&f};
  while (!stack.empty()) {
    const Formula* g = stack.back();
    stack.pop_back();
    switch (g->kind()) {
      case Connective::Atom: ++leaves; break;
      case Connective::Not: stack.push_back(&g->inner()); break;
      default:
        stack.push_back(&g->left());
        stack.push_back(&g->right());
    }
  }
  return f.size() - leaves;
}

Formula conjoin(const std::vector<Formula>& fs) {
  if (fs.empty()) throw std::invalid_argument("conjoin: empty formula list");
  Formula acc = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) acc = Formula::conjunction(*it, acc);
  return acc;
}

}  // namespace tableaux
