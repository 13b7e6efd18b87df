#include "icefem/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

namespace icefem {

namespace {

enum class Op { Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Sqrt, Exp, Abs, Min, Max };

const std::map<std::string, std::pair<Op, int>> kFunctions = {
    {"sin", {Op::Sin, 1}},  {"cos", {Op::Cos, 1}}, {"sqrt", {Op::Sqrt, 1}},
    {"exp", {Op::Exp, 1}},  {"abs", {Op::Abs, 1}}, {"min", {Op::Min, 2}},
    {"max", {Op::Max, 2}},
};

const char* op_name(Op op) {
  switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Sqrt: return "sqrt";
    case Op::Exp: return "exp";
    case Op::Abs: return "abs";
    case Op::Min: return "min";
    case Op::Max: return "max";
    default: return "?";
  }
}

}  // namespace

struct Expr::Node {
  enum class Kind { Number, Variable, Unary, Binary, Call } kind;
  double number = 0.0;
  int variable = 0;  // 0 x, 1 y, 2 t
  Op op = Op::Add;
  std::shared_ptr<const Node> a, b;
  size_t offset = 0;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Kind = Expr::Node::Kind;

NodePtr make_number(double v, size_t off) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Kind::Number;
  n->number = v;
  n->offset = off;
  return n;
}

NodePtr make_node(Kind kind, Op op, NodePtr a, NodePtr b, size_t off) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  n->offset = off;
  return n;
}

struct Token {
  enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };
  Type type;
  double number = 0.0;
  std::string ident;
  size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    tok_.offset = pos_;
    if (pos_ >= text_.size()) {
      tok_.type = Token::Type::End;
      return;
    }
    char c = text_[pos_];
    switch (c) {
      case '+': tok_.type = Token::Type::Plus; ++pos_; return;
      case '-': tok_.type = Token::Type::Minus; ++pos_; return;
      case '*': tok_.type = Token::Type::Star; ++pos_; return;
      case '/': tok_.type = Token::Type::Slash; ++pos_; return;
      case '^': tok_.type = Token::Type::Caret; ++pos_; return;
      case '(': tok_.type = Token::Type::LParen; ++pos_; return;
      case ')': tok_.type = Token::Type::RParen; ++pos_; return;
      case ',': tok_.type = Token::Type::Comma; ++pos_; return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* start = text_.c_str() + pos_;
      char* end = nullptr;
      double v = std::strtod(start, &end);
      if (end == start) throw ExprError("malformed number", pos_);
      pos_ += static_cast<size_t>(end - start);
      tok_.type = Token::Type::Number;
      tok_.number = v;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      tok_.type = Token::Type::Ident;
      tok_.ident = text_.substr(start, pos_ - start);
      return;
    }
    throw ExprError(std::string("unexpected character '") + c + "'", pos_);
  }

  const std::string& text_;
  size_t pos_ = 0;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  NodePtr parse() {
    NodePtr e = parse_sum();
    const Token& t = lex_.peek();
    if (t.type != Token::Type::End) {
      if (t.type == Token::Type::RParen) throw ExprError("unbalanced parentheses", t.offset);
      throw ExprError("unexpected token", t.offset);
    }
    return e;
  }

 private:
  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      const Token& t = lex_.peek();
      if (t.type == Token::Type::Plus || t.type == Token::Type::Minus) {
        Token op = lex_.take();
        NodePtr rhs = parse_product();
        lhs = make_node(Kind::Binary, op.type == Token::Type::Plus ? Op::Add : Op::Sub,
                        lhs, rhs, op.offset);
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      const Token& t = lex_.peek();
      if (t.type == Token::Type::Star || t.type == Token::Type::Slash) {
        Token op = lex_.take();
        NodePtr rhs = parse_unary();
        lhs = make_node(Kind::Binary, op.type == Token::Type::Star ? Op::Mul : Op::Div,
                        lhs, rhs, op.offset);
      } else {
        return lhs;
      }
    }
  }

  // Unary minus binds looser than ^: -x^2 parses as -(x^2).
  NodePtr parse_unary() {
    const Token& t = lex_.peek();
    if (t.type == Token::Type::Minus) {
      Token op = lex_.take();
      return make_node(Kind::Unary, Op::Neg, parse_unary(), nullptr, op.offset);
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    const Token& t = lex_.peek();
    if (t.type == Token::Type::Caret) {
      Token op = lex_.take();
      NodePtr exponent = parse_unary();  // right associative
      return make_node(Kind::Binary, Op::Pow, base, exponent, op.offset);
    }
    return base;
  }

  NodePtr parse_atom() {
    Token t = lex_.take();
    switch (t.type) {
      case Token::Type::Number:
        return make_number(t.number, t.offset);
      case Token::Type::LParen: {
        NodePtr e = parse_sum();
        Token close = lex_.take();
        if (close.type != Token::Type::RParen)
          throw ExprError("unbalanced parentheses", close.offset);
        return e;
      }
      case Token::Type::Ident: {
        if (t.ident == "x" || t.ident == "y" || t.ident == "t") {
          auto n = std::make_shared<Expr::Node>();
          n->kind = Kind::Variable;
          n->variable = t.ident == "x" ? 0 : t.ident == "y" ? 1 : 2;
          n->offset = t.offset;
          return n;
        }
        auto fn = kFunctions.find(t.ident);
        if (fn == kFunctions.end())
          throw ExprError("unknown identifier '" + t.ident + "'", t.offset);
        Token open = lex_.take();
        if (open.type != Token::Type::LParen)
          throw ExprError("expected '(' after '" + t.ident + "'", open.offset);
        std::vector<NodePtr> args;
        args.push_back(parse_sum());
        while (lex_.peek().type == Token::Type::Comma) {
          lex_.take();
          args.push_back(parse_sum());
        }
        Token close = lex_.take();
        if (close.type != Token::Type::RParen)
          throw ExprError("unbalanced parentheses", close.offset);
        if (static_cast<int>(args.size()) != fn->second.second)
          throw ExprError("'" + t.ident + "' expects " +
                              std::to_string(fn->second.second) + " argument(s)",
                          t.offset);
        return make_node(Kind::Call, fn->second.first, args[0],
                         args.size() > 1 ? args[1] : nullptr, t.offset);
      }
      default:
        throw ExprError("unexpected token", t.offset);
    }
  }

  Lexer lex_;
};

double eval_node(const Expr::Node& n, double x, double y, double t) {
  switch (n.kind) {
    case Kind::Number:
      return n.number;
    case Kind::Variable:
      return n.variable == 0 ? x : n.variable == 1 ? y : t;
    case Kind::Unary:
      return -eval_node(*n.a, x, y, t);
    case Kind::Binary: {
      double a = eval_node(*n.a, x, y, t);
      double b = eval_node(*n.b, x, y, t);
      switch (n.op) {
        case Op::Add: return a + b;
        case Op::Sub: return a - b;
        case Op::Mul: return a * b;
        case Op::Div:
          if (b == 0.0) throw ExprError("division by zero", n.offset);
          return a / b;
        case Op::Pow: {
          double r = std::pow(a, b);
          if (!std::isfinite(r)) throw ExprError("domain error in '^'", n.offset);
          return r;
        }
        default: break;
      }
      return 0.0;
    }
    case Kind::Call: {
      double a = eval_node(*n.a, x, y, t);
      switch (n.op) {
        case Op::Sin: return std::sin(a);
        case Op::Cos: return std::cos(a);
        case Op::Sqrt:
          if (a < 0.0) throw ExprError("sqrt of negative value", n.offset);
          return std::sqrt(a);
        case Op::Exp: return std::exp(a);
        case Op::Abs: return std::abs(a);
        case Op::Min: return std::min(a, eval_node(*n.b, x, y, t));
        case Op::Max: return std::max(a, eval_node(*n.b, x, y, t));
        default: break;
      }
      return 0.0;
    }
  }
  return 0.0;
}

void print_node(const Expr::Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::Number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.number);
      out += buf;
      return;
    }
    case Kind::Variable:
      out += n.variable == 0 ? 'x' : n.variable == 1 ? 'y' : 't';
      return;
    case Kind::Unary:
      out += "(-";
      print_node(*n.a, out);
      out += ')';
      return;
    case Kind::Binary: {
      const char* sym = n.op == Op::Add   ? " + "
                        : n.op == Op::Sub ? " - "
                        : n.op == Op::Mul ? " * "
                        : n.op == Op::Div ? " / "
                                          : " ^ ";
      out += '(';
      print_node(*n.a, out);
      out += sym;
      print_node(*n.b, out);
      out += ')';
      return;
    }
    case Kind::Call:
      out += op_name(n.op);
      out += '(';
      print_node(*n.a, out);
      if (n.b) {
        out += ", ";
        print_node(*n.b, out);
      }
      out += ')';
      return;
  }
}

bool nodes_equal(const Expr::Node* a, const Expr::Node* b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::Number: return a->number == b->number;
    case Kind::Variable: return a->variable == b->variable;
    default:
      return a->op == b->op && nodes_equal(a->a.get(), b->a.get()) &&
             nodes_equal(a->b.get(), b->b.get());
  }
}

bool node_uses_t(const Expr::Node& n) {
  if (n.kind == Kind::Variable) return n.variable == 2;
  if (n.a && node_uses_t(*n.a)) return true;
  return n.b && node_uses_t(*n.b);
}

}  // namespace

Expr Expr::parse(const std::string& text) {
  Parser p(text);
  Expr e;
  e.root_ = p.parse();
  return e;
}

Expr Expr::constant(double v) {
  Expr e;
  e.root_ = make_number(v, 0);
  return e;
}

double Expr::evaluate(double x, double y, double t) const {
  return eval_node(*root_, x, y, t);
}

std::string Expr::print() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

bool Expr::uses_t() const { return node_uses_t(*root_); }

bool tree_equal(const Expr& a, const Expr& b) {
  return nodes_equal(a.root(), b.root());
}

}  // namespace icefem
