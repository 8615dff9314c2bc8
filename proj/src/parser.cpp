// Recursive-descent parser for the web definition language:
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' integer)?
//   atom   := number | variable | func '(' expr ')' | '(' expr ')' | '-' atom

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <cstdlib>
#include <string>
#include <vector>

#include "webgeom/error.hpp"
#include "webgeom/expr.hpp"

namespace webgeom {
namespace {

enum class TokenKind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string_view text;
  std::size_t column = 1;  // 1-based
};

std::string describe(const Token& t) {
  if (t.kind == TokenKind::End) return "end of input";
  return "'" + std::string(t.text) + "'";
}

class Lexer {
 public:
  Lexer(std::string_view src, std::string where, std::size_t column_offset)
      : src_(src), where_(std::move(where)), offset_(column_offset) {}

  std::vector<Token> tokenize() {
    std::vector<Token> out;
    while (true) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (pos_ >= src_.size()) {
        out.push_back({TokenKind::End, {}, offset_ + pos_ + 1});
        return out;
      }
      const std::size_t start = pos_;
      const char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        lex_number();
        out.push_back({TokenKind::Number, src_.substr(start, pos_ - start), offset_ + start + 1});
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          ++pos_;
        out.push_back({TokenKind::Ident, src_.substr(start, pos_ - start), offset_ + start + 1});
      } else {
        TokenKind kind;
        switch (c) {
          case '+': kind = TokenKind::Plus; break;
          case '-': kind = TokenKind::Minus; break;
          case '*': kind = TokenKind::Star; break;
          case '/': kind = TokenKind::Slash; break;
          case '^': kind = TokenKind::Caret; break;
          case '(': kind = TokenKind::LParen; break;
          case ')': kind = TokenKind::RParen; break;
          default:
            throw Error(ErrorCode::SyntaxError,
                        where_ + "column " + std::to_string(offset_ + start + 1) + ": unexpected character '" +
                            std::string(1, c) + "'");
        }
        ++pos_;
        out.push_back({kind, src_.substr(start, 1), offset_ + start + 1});
      }
    }
  }

 private:
  void lex_number() {
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        digits();
      else
        pos_ = save;
    }
  }

  std::string_view src_;
  std::string where_;
  std::size_t offset_;
  std::size_t pos_ = 0;
};

// Exact conversion of a decimal literal; nullopt when it does not fit int64.
std::optional<Rational> exact_decimal(std::string_view text) {
  __int128 mantissa = 0;
  int scale = 0;  // value = mantissa * 10^scale
  std::size_t i = 0;
  bool any_digit = false;
  constexpr __int128 limit = static_cast<__int128>(INT64_MAX);
  for (; i < text.size() && text[i] != 'e' && text[i] != 'E'; ++i) {
    if (text[i] == '.') {
      for (++i; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
        mantissa = mantissa * 10 + (text[i] - '0');
        --scale;
        any_digit = true;
        if (mantissa > limit) return std::nullopt;
      }
      break;
    }
    mantissa = mantissa * 10 + (text[i] - '0');
    any_digit = true;
    if (mantissa > limit) return std::nullopt;
  }
  if (!any_digit) return std::nullopt;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    int exp = 0;
    auto [ptr, ec] = std::from_chars(text.data() + i + 1 + (text[i + 1] == '+' ? 1 : 0),
                                     text.data() + text.size(), exp);
    if (ec != std::errc{} || exp > 30 || exp < -30) return std::nullopt;
    scale += exp;
  }
  __int128 den = 1;
  while (scale > 0) {
    mantissa *= 10;
    --scale;
    if (mantissa > limit) return std::nullopt;
  }
  while (scale < 0) {
    den *= 10;
    ++scale;
    if (den > limit) return std::nullopt;
  }
  return Rational::make(static_cast<std::int64_t>(mantissa), static_cast<std::int64_t>(den));
}

std::optional<Rational> divide(const Rational& a, const Rational& b) {
  if (b.num == 0) return std::nullopt;
  const __int128 num = static_cast<__int128>(a.num) * b.den;
  const __int128 den = static_cast<__int128>(a.den) * b.num;
  constexpr __int128 limit = static_cast<__int128>(INT64_MAX);
  if (num > limit || num < -limit || den > limit || den < -limit) return std::nullopt;
  return Rational::make(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string where)
      : tokens_(std::move(tokens)), where_(std::move(where)) {}

  ExprPtr parse_all() {
    ExprPtr e = expr();
    if (peek().kind != TokenKind::End) fail(peek(), "expected operator or end of input");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }
  bool accept(TokenKind k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void fail(const Token& at, const std::string& what,
                         ErrorCode code = ErrorCode::SyntaxError) const {
    throw Error(code, where_ + "column " + std::to_string(at.column) + ": " + what + ", found " +
                          describe(at));
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    while (peek().kind == TokenKind::Plus || peek().kind == TokenKind::Minus) {
      const BinaryOp op = advance().kind == TokenKind::Plus ? BinaryOp::Add : BinaryOp::Sub;
      lhs = make_binary(op, lhs, term());
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    while (peek().kind == TokenKind::Star || peek().kind == TokenKind::Slash) {
      const BinaryOp op = advance().kind == TokenKind::Star ? BinaryOp::Mul : BinaryOp::Div;
      ExprPtr rhs = factor();
      if (op == BinaryOp::Div) {
        // literal / literal folds into one exact rational
        const auto* ln = lhs->as<NumberNode>();
        const auto* rn = rhs->as<NumberNode>();
        if (ln && rn) {
          const auto* lr = std::get_if<Rational>(&ln->value);
          const auto* rr = std::get_if<Rational>(&rn->value);
          if (lr && rr) {
            if (auto q = divide(*lr, *rr)) {
              lhs = make_number(*q);
              continue;
            }
          }
        }
      }
      lhs = make_binary(op, lhs, rhs);
    }
    return lhs;
  }

  ExprPtr factor() {
    ExprPtr base = atom();
    if (accept(TokenKind::Caret)) base = make_power(base, exponent());
    return base;
  }

  int exponent() {
    const bool negative = accept(TokenKind::Minus);
    const Token& t = peek();
    if (t.kind != TokenKind::Number) {
      if (t.kind == TokenKind::End) fail(t, "expected integer exponent");
      fail(t, "exponent must be an integer literal", ErrorCode::NonIntegerExponent);
    }
    for (char c : t.text)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        fail(t, "exponent must be an integer literal", ErrorCode::NonIntegerExponent);
    int value = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc{} || value > 64) fail(t, "exponent out of range (max 64)");
    advance();
    return negative ? -value : value;
  }

  ExprPtr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Number: {
        advance();
        if (auto r = exact_decimal(t.text)) return make_number(*r);
        const std::string s(t.text);
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end != s.c_str() + s.size()) fail(t, "malformed number");
        return make_number(v);
      }
      case TokenKind::Ident: return identifier();
      case TokenKind::LParen: {
        advance();
        ExprPtr e = expr();
        if (!accept(TokenKind::RParen)) fail(peek(), "expected ')'");
        return e;
      }
      case TokenKind::Minus: advance(); return make_negate(atom());
      default: fail(t, "expected number, variable, function or '('");
    }
  }

  ExprPtr identifier() {
    const Token& t = advance();
    static constexpr std::pair<std::string_view, Variable> vars[] = {
        {"x1", Variable::x1}, {"x2", Variable::x2}, {"y1", Variable::y1}, {"y2", Variable::y2}};
    static constexpr std::pair<std::string_view, Function> funcs[] = {
        {"sin", Function::Sin}, {"cos", Function::Cos}, {"exp", Function::Exp}, {"log", Function::Log}};
    for (const auto& [name, v] : vars)
      if (t.text == name) return make_variable(v);
    for (const auto& [name, f] : funcs) {
      if (t.text == name) {
        if (!accept(TokenKind::LParen)) fail(peek(), "expected '(' after " + std::string(name));
        ExprPtr arg = expr();
        if (!accept(TokenKind::RParen)) fail(peek(), "expected ')'");
        return make_call(f, arg);
      }
    }
    if (peek().kind == TokenKind::LParen)
      throw Error(ErrorCode::SyntaxError, where_ + "column " + std::to_string(t.column) +
                                              ": unknown function '" + std::string(t.text) + "'");
    throw Error(ErrorCode::UnknownVariable,
                where_ + "column " + std::to_string(t.column) + ": '" + std::string(t.text) +
                    "' is not one of x1, x2, y1, y2");
  }

  std::vector<Token> tokens_;
  std::string where_;
  std::size_t pos_ = 0;
};

ExprPtr parse_located(std::string_view text, const std::string& where, std::size_t column_offset) {
  Lexer lexer(text, where, column_offset);
  Parser parser(lexer.tokenize(), where);
  return parser.parse_all();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

ExprPtr parse_expr(std::string_view text) { return parse_located(text, "", 0); }

WebDefinition parse_web(std::string_view text) {
  WebDefinition web;
  std::size_t line_no = 0;
  while (!text.empty() || line_no == 0) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    if (trim(line).empty()) {
      if (text.empty()) break;
      continue;
    }

    const std::string where = "line " + std::to_string(line_no) + ", ";
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::SyntaxError, where + "expected 'f1 = <expr>', 'f2 = <expr>' or 'name = <text>'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view rhs = line.substr(eq + 1);

    if (key == "name") {
      if (web.name) throw Error(ErrorCode::SyntaxError, where + "duplicate 'name'");
      web.name = std::string(trim(rhs));
    } else if (key == "f1" || key == "f2") {
      ExprPtr& slot = key == "f1" ? web.f1 : web.f2;
      if (slot) throw Error(ErrorCode::SyntaxError, where + "duplicate '" + std::string(key) + "'");
      slot = parse_located(rhs, where, eq + 1);
    } else {
      throw Error(ErrorCode::SyntaxError, where + "unknown key '" + std::string(key) +
                                              "', expected f1, f2 or name");
    }
    if (text.empty()) break;
  }
  if (!web.f1) throw Error(ErrorCode::SyntaxError, "missing 'f1 = <expr>'");
  if (!web.f2) throw Error(ErrorCode::SyntaxError, "missing 'f2 = <expr>'");
  return web;
}

BasePoint parse_point(std::string_view text) {
  std::vector<std::string_view> parts;
  while (true) {
    const std::size_t comma = text.find(',');
    parts.push_back(trim(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  if (parts.size() != 4)
    throw Error(ErrorCode::ArityError,
                "expected 4 comma-separated coordinates x1,x2,y1,y2, got " + std::to_string(parts.size()));
  BasePoint p;
  for (std::size_t i = 0; i < 4; ++i) {
    const std::string s(parts[i]);
    char* end = nullptr;
    const double v = s.empty() ? 0.0 : std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
      throw Error(ErrorCode::SyntaxError,
                  "coordinate " + std::to_string(i + 1) + ": '" + s + "' is not a finite decimal number");
    p.coords[i] = v;
  }
  return p;
}

}  // namespace webgeom
