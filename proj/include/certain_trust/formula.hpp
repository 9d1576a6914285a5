#pragma once

// Propositional topology formulas over component ids.
//
// Grammar (whitespace insignificant, keywords case-insensitive):
//   or_expr  := and_expr (('|' | OR) and_expr)*
//   and_expr := unary (('&' | AND) unary)*
//   unary    := ('!' | NOT) unary | primary
//   primary  := IDENT | '(' or_expr ')'
//   IDENT    := [A-Za-z][A-Za-z0-9_]*   (not a keyword)

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "certain_trust/errors.hpp"
#include "certain_trust/opinion.hpp"

namespace ctm {

class FormulaNode {
 public:
  enum class Kind { leaf, negation, conjunction, disjunction };

  static FormulaNode leaf(std::string id) {
    if (id.empty()) throw InputError("leaf id must be non-empty");
    FormulaNode n(Kind::leaf);
    n.id_ = std::move(id);
    return n;
  }
  static FormulaNode negation(FormulaNode child) {
    FormulaNode n(Kind::negation);
    n.children_.push_back(std::move(child));
    return n;
  }
  static FormulaNode conjunction(FormulaNode lhs, FormulaNode rhs) { return binary(Kind::conjunction, std::move(lhs), std::move(rhs)); }
  static FormulaNode disjunction(FormulaNode lhs, FormulaNode rhs) { return binary(Kind::disjunction, std::move(lhs), std::move(rhs)); }

  Kind kind() const { return kind_; }
  bool is_leaf() const { return kind_ == Kind::leaf; }
  const std::string& id() const { return id_; }
  const std::vector<FormulaNode>& children() const { return children_; }
  const FormulaNode& child(std::size_t i) const { return children_.at(i); }

  friend bool operator==(const FormulaNode&, const FormulaNode&) = default;

 private:
  explicit FormulaNode(Kind k) : kind_(k) {}
  static FormulaNode binary(Kind k, FormulaNode lhs, FormulaNode rhs) {
    FormulaNode n(k);
    n.children_.push_back(std::move(lhs));
    n.children_.push_back(std::move(rhs));
    return n;
  }

  Kind kind_;
  std::string id_;
  std::vector<FormulaNode> children_;
};

inline void collect_free_variables(const FormulaNode& n, std::set<std::string>& out) {
  if (n.is_leaf()) {
    out.insert(n.id());
    return;
  }
  for (const auto& c : n.children()) collect_free_variables(c, out);
}

inline std::set<std::string> free_variables(const FormulaNode& n) {
  std::set<std::string> out;
  collect_free_variables(n, out);
  return out;
}

inline std::size_t operator_count(const FormulaNode& n) {
  std::size_t k = n.is_leaf() ? 0 : 1;
  for (const auto& c : n.children()) k += operator_count(c);
  return k;
}

namespace detail {

inline int precedence(FormulaNode::Kind k) {
  switch (k) {
    case FormulaNode::Kind::disjunction: return 1;
    case FormulaNode::Kind::conjunction: return 2;
    case FormulaNode::Kind::negation: return 3;
    case FormulaNode::Kind::leaf: return 4;
  }
  return 0;
}

inline void unparse_into(const FormulaNode& n, std::string& out) {
  using K = FormulaNode::Kind;
  auto emit = [&out](const FormulaNode& c, bool parens) {
    if (parens) out += '(';
    unparse_into(c, out);
    if (parens) out += ')';
  };
  switch (n.kind()) {
    case K::leaf: out += n.id(); return;
    case K::negation:
      out += '!';
      emit(n.child(0), precedence(n.child(0).kind()) < precedence(K::negation));
      return;
    case K::conjunction:
    case K::disjunction: {
      const int p = precedence(n.kind());
      // Left-associative: a same-precedence right operand needs parentheses.
      emit(n.child(0), precedence(n.child(0).kind()) < p);
      out += n.kind() == K::conjunction ? " & " : " | ";
      emit(n.child(1), precedence(n.child(1).kind()) <= p);
      return;
    }
  }
}

}  // namespace detail

/// Canonical text with the minimum parentheses; parse(unparse(x)) == x.
inline std::string unparse(const FormulaNode& n) {
  std::string out;
  detail::unparse_into(n, out);
  return out;
}

class ParseError : public InputError {
 public:
  enum class Kind { syntax, unbalanced_parentheses };

  ParseError(Kind kind, std::size_t offset, std::vector<std::string> expected, const std::string& msg)
      : InputError(msg), kind_(kind), offset_(offset), expected_(std::move(expected)) {}

  Kind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  Kind kind_;
  std::size_t offset_;
  std::vector<std::string> expected_;
};

namespace detail {

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) { tokenize(); }

  FormulaNode parse() {
    if (tokens_.size() == 1) fail(0, {"identifier", "'('", "'!'"}, "empty formula");
    FormulaNode root = parse_or();
    const Token& t = peek();
    if (t.type == Tok::rparen) {
      throw ParseError(ParseError::Kind::unbalanced_parentheses, t.offset, {"end of input"},
                       "unbalanced parentheses: unmatched ')' at offset " + std::to_string(t.offset));
    }
    if (t.type != Tok::end) fail(t.offset, {"'&'", "'|'", "end of input"}, "unexpected " + describe(t));
    return root;
  }

 private:
  enum class Tok { ident, op_not, op_and, op_or, lparen, rparen, end };
  struct Token {
    Tok type;
    std::size_t offset;
    std::string text;
  };

  static bool keyword(std::string_view word, std::string_view kw) {
    return word.size() == kw.size() && std::equal(word.begin(), word.end(), kw.begin(), [](char a, char b) {
             return std::toupper(static_cast<unsigned char>(a)) == b;
           });
  }

  void tokenize() {
    std::size_t i = 0;
    while (i < text_.size()) {
      const char ch = text_[i];
      if (std::isspace(static_cast<unsigned char>(ch))) {
        ++i;
        continue;
      }
      switch (ch) {
        case '!': tokens_.push_back({Tok::op_not, i, "!"}); ++i; continue;
        case '&': tokens_.push_back({Tok::op_and, i, "&"}); ++i; continue;
        case '|': tokens_.push_back({Tok::op_or, i, "|"}); ++i; continue;
        case '(': tokens_.push_back({Tok::lparen, i, "("}); ++i; continue;
        case ')': tokens_.push_back({Tok::rparen, i, ")"}); ++i; continue;
        default: break;
      }
      if (std::isalpha(static_cast<unsigned char>(ch))) {
        const std::size_t start = i;
        while (i < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i])) || text_[i] == '_')) ++i;
        const std::string_view word = text_.substr(start, i - start);
        Tok type = Tok::ident;
        if (keyword(word, "NOT")) type = Tok::op_not;
        else if (keyword(word, "AND")) type = Tok::op_and;
        else if (keyword(word, "OR")) type = Tok::op_or;
        tokens_.push_back({type, start, std::string(word)});
        continue;
      }
      fail(i, {"identifier", "operator", "parenthesis"}, std::string("invalid character '") + ch + "'");
    }
    tokens_.push_back({Tok::end, text_.size(), ""});
  }

  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  static std::string describe(const Token& t) {
    return t.type == Tok::end ? std::string("end of input") : "'" + t.text + "' at offset " + std::to_string(t.offset);
  }

  [[noreturn]] static void fail(std::size_t offset, std::vector<std::string> expected, const std::string& what) {
    std::string msg = "syntax error at offset " + std::to_string(offset) + ": " + what + "; expected one of:";
    for (const auto& e : expected) msg += " " + e;
    throw ParseError(ParseError::Kind::syntax, offset, std::move(expected), msg);
  }

  FormulaNode parse_or() {
    FormulaNode lhs = parse_and();
    while (peek().type == Tok::op_or) {
      next();
      lhs = FormulaNode::disjunction(std::move(lhs), parse_and());
    }
    return lhs;
  }

  FormulaNode parse_and() {
    FormulaNode lhs = parse_unary();
    while (peek().type == Tok::op_and) {
      next();
      lhs = FormulaNode::conjunction(std::move(lhs), parse_unary());
    }
    return lhs;
  }

  FormulaNode parse_unary() {
    if (peek().type == Tok::op_not) {
      next();
      return FormulaNode::negation(parse_unary());
    }
    return parse_primary();
  }

  FormulaNode parse_primary() {
    const Token& t = next();
    if (t.type == Tok::ident) return FormulaNode::leaf(t.text);
    if (t.type == Tok::lparen) {
      FormulaNode inner = parse_or();
      const Token& close = peek();
      if (close.type != Tok::rparen) {
        if (close.type == Tok::end) {
          throw ParseError(ParseError::Kind::unbalanced_parentheses, t.offset, {"')'"},
                           "unbalanced parentheses: '(' at offset " + std::to_string(t.offset) + " is never closed");
        }
        fail(close.offset, {"'&'", "'|'", "')'"}, "unexpected " + describe(close));
      }
      next();
      return inner;
    }
    if (t.type == Tok::rparen) {
      throw ParseError(ParseError::Kind::unbalanced_parentheses, t.offset, {"identifier", "'('", "'!'"},
                       "unbalanced parentheses: unexpected ')' at offset " + std::to_string(t.offset));
    }
    fail(t.offset, {"identifier", "'('", "'!'"}, "unexpected " + describe(t));
  }

  std::string_view text_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline FormulaNode parse_formula(std::string_view text) { return detail::FormulaParser(text).parse(); }

/// Raised when a formula refers to a component with no opinion bound.
class UnboundIdentifier : public InputError {
 public:
  explicit UnboundIdentifier(std::string id)
      : InputError("unbound identifier '" + id + "'"), id_(std::move(id)) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

/// Per-node result of a post-order evaluation. Paths are "$" for the root
/// and "$.i" for the i-th child.
struct NodeEvaluation {
  std::string path;
  std::string text;
  bool leaf;
  Opinion opinion;
};

namespace detail {

inline Opinion evaluate_at(const FormulaNode& n, const std::map<std::string, Opinion>& leaves, NotMode mode,
                           const std::string& path, std::vector<NodeEvaluation>* trace) {
  using K = FormulaNode::Kind;
  Opinion result;
  if (n.is_leaf()) {
    const auto it = leaves.find(n.id());
    if (it == leaves.end()) throw UnboundIdentifier(n.id());
    result = it->second;
  } else {
    std::vector<Opinion> args;
    for (std::size_t i = 0; i < n.children().size(); ++i) {
      args.push_back(evaluate_at(n.child(i), leaves, mode, path + "." + std::to_string(i), trace));
    }
    try {
      switch (n.kind()) {
        case K::negation: result = op_not(args[0], mode); break;
        case K::conjunction: result = op_and(args[0], args[1]); break;
        case K::disjunction: result = op_or(args[0], args[1]); break;
        case K::leaf: break;
      }
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " at " + path + " (" + unparse(n) + ")");
    }
  }
  if (trace) trace->push_back(NodeEvaluation{path, unparse(n), n.is_leaf(), result});
  return result;
}

}  // namespace detail

inline Opinion evaluate_formula(const FormulaNode& node, const std::map<std::string, Opinion>& leaves,
                                NotMode mode = NotMode::paper) {
  return detail::evaluate_at(node, leaves, mode, "$", nullptr);
}

/// Evaluates and records every node in post-order; the root is last.
inline std::vector<NodeEvaluation> evaluate_nodes(const FormulaNode& node, const std::map<std::string, Opinion>& leaves,
                                                  NotMode mode = NotMode::paper) {
  std::vector<NodeEvaluation> trace;
  detail::evaluate_at(node, leaves, mode, "$", &trace);
  return trace;
}

}  // namespace ctm
