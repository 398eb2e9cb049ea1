#ifndef AMRNORM_TREE_HPP
#define AMRNORM_TREE_HPP

// Concrete syntax of PENMAN notation: parsing text into a Tree that keeps
// branch order and node-definition sites, and printing it back.

#include <cctype>
#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

namespace amrnorm {

/// Copyable owning pointer, used to give recursive tree nodes value
/// semantics.
template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;
  ~Box() = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

struct Constant {
  std::string value;  // quoted strings keep their quotes
  friend bool operator==(const Constant&, const Constant&) = default;
};

struct VariableRef {
  std::string variable;
  friend bool operator==(const VariableRef&, const VariableRef&) = default;
};

struct Node;
using Target = std::variant<Constant, VariableRef, Box<Node>>;

struct Branch {
  std::string role;  // surface spelling, including any `-of` inversion
  Target target;
  friend bool operator==(const Branch&, const Branch&) = default;
};

struct Node {
  std::string variable;
  std::string label;  // concept
  std::vector<Branch> branches;
  friend bool operator==(const Node&, const Node&) = default;
};

struct Tree {
  Node root;
  const std::string& root_variable() const { return root.variable; }
  friend bool operator==(const Tree&, const Tree&) = default;
};

/// Surface text of a branch target: the constant lexeme or variable name.
inline const std::string& target_text(const Target& target) {
  if (auto c = std::get_if<Constant>(&target)) return c->value;
  if (auto r = std::get_if<VariableRef>(&target)) return r->variable;
  return std::get<Box<Node>>(target)->variable;
}

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " at line " + std::to_string(line) + ", column " +
                           std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

namespace detail {

class PenmanParser {
 public:
  explicit PenmanParser(std::string_view text) : text_(text) {}

  Tree parse() {
    skip_space();
    if (at_end()) fail("expected '(' but found end of input");
    if (peek() != '(') fail("expected '('");
    Tree tree{parse_node()};
    skip_space();
    if (!at_end()) fail("unexpected text after the closing ')'");
    resolve_variables(tree.root);
    return tree;
  }

 private:
  enum class Kind { LParen, RParen, Slash, Role, String, Symbol, End };

  struct Token {
    Kind kind;
    std::string text;
    std::size_t line;
    std::size_t column;
  };

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_, column_);
  }
  [[noreturn]] static void fail_at(const std::string& message, const Token& token) {
    throw ParseError(message, token.line, token.column);
  }

  static bool is_delimiter(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '"';
  }

  Token next() {
    skip_space();
    Token token{Kind::End, {}, line_, column_};
    if (at_end()) return token;
    const std::size_t start = pos_;
    const char c = peek();
    if (c == '(' || c == ')') {
      advance();
      token.kind = c == '(' ? Kind::LParen : Kind::RParen;
    } else if (c == '"') {
      advance();
      bool closed = false;
      while (!at_end()) {
        const char d = peek();
        advance();
        if (d == '\\' && !at_end()) {
          advance();
        } else if (d == '"') {
          closed = true;
          break;
        }
      }
      if (!closed) fail_at("unterminated string", token);
      token.kind = Kind::String;
    } else if (c == ':') {
      advance();
      while (!at_end() && !is_delimiter(peek())) advance();
      token.kind = Kind::Role;
    } else if (c == '/') {
      advance();
      token.kind = Kind::Slash;
    } else {
      while (!at_end() && !is_delimiter(peek()) && peek() != '/') advance();
      token.kind = Kind::Symbol;
    }
    token.text = std::string(text_.substr(start, pos_ - start));
    return token;
  }

  Token peek_token() {
    const auto saved = std::make_tuple(pos_, line_, column_);
    Token token = next();
    std::tie(pos_, line_, column_) = saved;
    return token;
  }

  Node parse_node() {
    Token open = next();
    if (open.kind != Kind::LParen) fail_at("expected '('", open);
    Token var = next();
    if (var.kind != Kind::Symbol) fail_at("expected a variable after '('", var);
    Token slash = next();
    if (slash.kind != Kind::Slash)
      fail_at("missing '/' concept label on node definition of '" + var.text + "'", slash);
    Token label = next();
    if (label.kind != Kind::Symbol && label.kind != Kind::String)
      fail_at("expected a concept after '/'", label);
    Node node{var.text, label.text, {}};
    defined_.insert(var.text);

    for (;;) {
      Token token = next();
      if (token.kind == Kind::RParen) break;
      if (token.kind == Kind::End) fail_at("unbalanced parentheses: missing ')'", token);
      if (token.kind != Kind::Role) fail_at("expected a role or ')'", token);
      if (token.text.size() < 2) fail_at("empty role", token);
      Token lookahead = peek_token();
      switch (lookahead.kind) {
        case Kind::LParen:
          node.branches.push_back({token.text, Box<Node>(parse_node())});
          break;
        case Kind::String:
        case Kind::Symbol:
          next();
          node.branches.push_back({token.text, Constant{lookahead.text}});
          break;
        default:
          fail_at("missing target for role " + token.text, lookahead);
      }
    }
    return node;
  }

  void resolve_variables(Node& node) const {
    for (Branch& branch : node.branches) {
      if (auto c = std::get_if<Constant>(&branch.target)) {
        if (c->value.front() != '"' && defined_.count(c->value))
          branch.target = VariableRef{c->value};
      } else if (auto child = std::get_if<Box<Node>>(&branch.target)) {
        resolve_variables(**child);
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  std::set<std::string> defined_;
};

inline void write_node(const Node& node, int depth, int indent, std::string& out) {
  out += '(';
  out += node.variable;
  out += " / ";
  out += node.label;
  for (const Branch& branch : node.branches) {
    if (indent < 0) {
      out += ' ';
    } else {
      out += '\n';
      out.append(static_cast<std::size_t>((depth + 1) * indent), ' ');
    }
    out += branch.role;
    out += ' ';
    if (auto child = std::get_if<Box<Node>>(&branch.target)) {
      write_node(**child, depth + 1, indent, out);
    } else {
      out += target_text(branch.target);
    }
  }
  out += ')';
}

}  // namespace detail

/// Parses one complete PENMAN node expression. A bare target token becomes
/// a VariableRef iff some node in the same expression defines that variable.
inline Tree parse(std::string_view text) { return detail::PenmanParser(text).parse(); }

/// Prints a tree with each branch on its own line, indented `indent` columns
/// per nesting level. A negative indent prints everything on one line.
inline std::string serialize(const Tree& tree, int indent = 3) {
  std::string out;
  detail::write_node(tree.root, 0, indent, out);
  return out;
}

}  // namespace amrnorm

#endif  // AMRNORM_TREE_HPP
