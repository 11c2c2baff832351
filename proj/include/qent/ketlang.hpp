#pragma once

#include <cstddef>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qent/errors.hpp"
#include "qent/state.hpp"

// Text grammar for bra-ket state expressions:
//
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor (('(x)'|'⊗') factor)*
//   factor := scalar ket | ket | '(' expr ')' suffix*
//   suffix := '/' scalar
//   scalar := primary ('*' primary)*
//   primary:= number | number '^' '(' fraction ')' | 'sqrt(' number ')' | 'i'
//   ket    := '|' [01]+ ('>'|'⟩')
//
// Whitespace is insignificant. '*' multiplies scalars; the tensor operator is
// spelled '(x)' in ASCII or '⊗' in UTF-8. Scalars are kept exact as
// (p/q)*sqrt(r/s)*i^k and folded to floating point once per amplitude.

namespace qent {
namespace ket {

struct KetError : Error {
  using Error::Error;
};

struct SyntaxError : KetError {
  SyntaxError(std::size_t offset, std::vector<std::string> expected,
              std::string found)
      : KetError(format(offset, expected, found)),
        offset(offset),
        expected(std::move(expected)),
        found(std::move(found)) {}

  static std::string format(std::size_t offset,
                            const std::vector<std::string>& expected,
                            const std::string& found) {
    std::ostringstream os;
    os << "syntax error at byte " << offset << ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i)
      os << (i ? " | " : "") << expected[i];
    os << ", found " << found;
    return os.str();
  }

  std::size_t offset;
  std::vector<std::string> expected;
  std::string found;
};

struct MixedArity : KetError {
  explicit MixedArity(std::size_t offset)
      : KetError("summed kets differ in length (at byte " +
                 std::to_string(offset) + ")"),
        offset(offset) {}
  std::size_t offset;
};

struct EvalError : KetError {
  using KetError::KetError;
};

// Exact scalar (num/den) * sqrt(rad_num/rad_den) * i^ipow. Components stay
// integral until the final fold, so 1/2 and 1/sqrt(2) remain distinct.
struct Scalar {
  long long num = 1, den = 1;
  long long rad_num = 1, rad_den = 1;
  int ipow = 0;  // 0 or 1 after normalization; i^2 folds into the sign

  static Scalar integer(long long v) {
    Scalar s;
    s.num = v;
    return s;
  }

  static Scalar sqrt_of(long long v) {
    if (v < 0) throw EvalError("negative radicand");
    Scalar s;
    s.rad_num = v;
    return s;
  }

  static Scalar imaginary() {
    Scalar s;
    s.ipow = 1;
    return s;
  }

  static long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw EvalError("scalar overflow");
    return r;
  }

  void reduce() {
    if (den == 0 || rad_den == 0) throw EvalError("division by zero");
    if (den < 0) {
      den = -den;
      num = -num;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    g = std::gcd(rad_num, rad_den);
    if (g > 1) {
      rad_num /= g;
      rad_den /= g;
    }
    if (rad_num == 0) {
      num = 0;
      rad_num = rad_den = 1;
    }
    if (num == 0) {
      den = 1;
      rad_num = rad_den = 1;
      ipow = 0;
    }
    ipow &= 3;
    if (ipow >= 2) {
      num = -num;
      ipow -= 2;
    }
  }

  Scalar times(const Scalar& o) const {
    Scalar r;
    r.num = checked_mul(num, o.num);
    r.den = checked_mul(den, o.den);
    r.rad_num = checked_mul(rad_num, o.rad_num);
    r.rad_den = checked_mul(rad_den, o.rad_den);
    r.ipow = ipow + o.ipow;
    r.reduce();
    return r;
  }

  Scalar reciprocal() const {
    if (num == 0) throw EvalError("division by zero scalar");
    Scalar r;
    r.num = den;
    r.den = num;
    r.rad_num = rad_den;
    r.rad_den = rad_num;
    r.ipow = (4 - (ipow & 3)) & 3;  // 1/i = -i
    r.reduce();
    return r;
  }

  Scalar negate() const {
    Scalar r = *this;
    r.num = -r.num;
    return r;
  }

  // base^(p/q) with q in {1, 2}.
  static Scalar power(long long base, long long p, long long q) {
    if (q != 1 && q != 2) throw EvalError("unsupported exponent denominator");
    const bool invert = p < 0;
    if (invert) p = -p;
    Scalar r;
    const long long whole = (q == 1) ? p : p / 2;
    for (long long k = 0; k < whole; ++k) r.num = checked_mul(r.num, base);
    if (q == 2 && (p & 1)) r.rad_num = checked_mul(r.rad_num, base);
    r.reduce();
    return invert ? r.reciprocal() : r;
  }

  bool is_negative() const { return num < 0; }
  bool is_unit() const {
    return num == 1 && den == 1 && rad_num == 1 && rad_den == 1 && ipow == 0;
  }

  cplx value() const {
    const double mag = (static_cast<double>(num) / static_cast<double>(den)) *
                       std::sqrt(static_cast<double>(rad_num) /
                                 static_cast<double>(rad_den));
    return ipow ? cplx{0.0, mag} : cplx{mag, 0.0};
  }

  bool operator==(const Scalar& o) const {
    return num == o.num && den == o.den && rad_num == o.rad_num &&
           rad_den == o.rad_den && ipow == o.ipow;
  }

  // Canonical spelling of the magnitude (sign handled by the caller).
  std::string text() const {
    const long long m = num < 0 ? -num : num;
    std::vector<std::string> parts;
    if (m != 1) parts.push_back(std::to_string(m));
    if (rad_num != 1) parts.push_back(std::to_string(rad_num) + "^(1/2)");
    if (ipow == 1) parts.emplace_back("i");
    if (parts.empty()) parts.emplace_back("1");
    std::string out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) out += "*" + parts[i];
    return out;
  }
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Ket, Scale, Sum, Diff, Tensor, Paren };

  Kind kind;
  std::string bits;     // Ket
  Scalar scalar;        // Scale
  bool division = false;  // Scale written as a '/scalar' suffix
  ExprPtr a, b;
  int arity = 0;

  static ExprPtr make_ket(std::string bits) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Ket;
    e->arity = static_cast<int>(bits.size());
    e->bits = std::move(bits);
    return e;
  }

  static ExprPtr make_scale(Scalar s, ExprPtr child, bool division) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Scale;
    e->scalar = s;
    e->division = division;
    e->arity = child->arity;
    e->a = std::move(child);
    return e;
  }

  static ExprPtr make_binary(Kind kind, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->arity = (kind == Kind::Tensor) ? lhs->arity + rhs->arity : lhs->arity;
    e->a = std::move(lhs);
    e->b = std::move(rhs);
    return e;
  }

  static ExprPtr make_paren(ExprPtr child) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Paren;
    e->arity = child->arity;
    e->a = std::move(child);
    return e;
  }
};

inline bool ast_equal(const ExprPtr& x, const ExprPtr& y) {
  if (!x || !y) return x == y;
  if (x->kind != y->kind || x->arity != y->arity) return false;
  switch (x->kind) {
    case Expr::Kind::Ket:
      return x->bits == y->bits;
    case Expr::Kind::Scale:
      return x->scalar == y->scalar && x->division == y->division &&
             ast_equal(x->a, y->a);
    case Expr::Kind::Paren:
      return ast_equal(x->a, y->a);
    default:
      return ast_equal(x->a, y->a) && ast_equal(x->b, y->b);
  }
}

// -----------------------------------------------------------------------------
// Lexer
// -----------------------------------------------------------------------------

namespace detail {

struct Token {
  enum class Kind {
    KetLit,
    Plus,
    Minus,
    TensorOp,
    LParen,
    RParen,
    Slash,
    Caret,
    Star,
    Number,
    Sqrt,
    ImagUnit,
    End
  };
  Kind kind;
  std::size_t offset;
  std::string bits;     // KetLit
  long long number = 0;  // Number

  std::string describe() const {
    switch (kind) {
      case Kind::KetLit: return "ket";
      case Kind::Plus: return "'+'";
      case Kind::Minus: return "'-'";
      case Kind::TensorOp: return "tensor operator";
      case Kind::LParen: return "'('";
      case Kind::RParen: return "')'";
      case Kind::Slash: return "'/'";
      case Kind::Caret: return "'^'";
      case Kind::Star: return "'*'";
      case Kind::Number: return "number";
      case Kind::Sqrt: return "'sqrt'";
      case Kind::ImagUnit: return "'i'";
      case Kind::End: return "end of input";
    }
    return "?";
  }
};

inline bool starts_with(const std::string& s, std::size_t i, const char* lit) {
  for (std::size_t k = 0; lit[k]; ++k)
    if (i + k >= s.size() || s[i + k] != lit[k]) return false;
  return true;
}

inline std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  const auto fail = [&](std::vector<std::string> expected, std::string found) {
    throw SyntaxError(i, std::move(expected), std::move(found));
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if (starts_with(text, i, "(x)")) {
      out.push_back({Token::Kind::TensorOp, i, "", 0});
      i += 3;
      continue;
    }
    if (starts_with(text, i, "\xE2\x8A\x97")) {  // U+2297 circled times
      out.push_back({Token::Kind::TensorOp, i, "", 0});
      i += 3;
      continue;
    }
    if (c == '|') {
      const std::size_t start = i++;
      std::string bits;
      while (i < text.size() && (text[i] == '0' || text[i] == '1')) bits += text[i++];
      if (bits.empty()) fail({"bit string"}, "'" + std::string(1, c) + "'");
      if (i < text.size() && text[i] == '>') {
        ++i;
      } else if (starts_with(text, i, "\xE2\x9F\xA9")) {  // U+27E9 rangle
        i += 3;
      } else {
        fail({"'>' closing the ket"},
             i < text.size() ? "'" + std::string(1, text[i]) + "'" : "end of input");
      }
      out.push_back({Token::Kind::KetLit, start, std::move(bits), 0});
      continue;
    }
    if (c >= '0' && c <= '9') {
      const std::size_t start = i;
      long long v = 0;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
        v = v * 10 + (text[i] - '0');
        if (v > 1000000000000000LL) fail({"smaller number"}, "oversized number");
        ++i;
      }
      out.push_back({Token::Kind::Number, start, "", v});
      continue;
    }
    if (starts_with(text, i, "sqrt")) {
      out.push_back({Token::Kind::Sqrt, i, "", 0});
      i += 4;
      continue;
    }
    if (c == 'i') {
      out.push_back({Token::Kind::ImagUnit, i, "", 0});
      ++i;
      continue;
    }
    Token::Kind kind;
    switch (c) {
      case '+': kind = Token::Kind::Plus; break;
      case '-': kind = Token::Kind::Minus; break;
      case '(': kind = Token::Kind::LParen; break;
      case ')': kind = Token::Kind::RParen; break;
      case '/': kind = Token::Kind::Slash; break;
      case '^': kind = Token::Kind::Caret; break;
      case '*': kind = Token::Kind::Star; break;
      default:
        fail({"expression"}, "'" + std::string(1, c) + "'");
        return out;  // unreachable
    }
    out.push_back({kind, i, "", 0});
    ++i;
  }
  out.push_back({Token::Kind::End, text.size(), "", 0});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  ExprPtr parse() {
    ExprPtr e = parse_expr();
    expect(Token::Kind::End, {"'+'", "'-'", "tensor operator", "end of input"});
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& advance() { return toks_[pos_++]; }
  bool at(Token::Kind k) const { return peek().kind == k; }

  void expect(Token::Kind k, std::vector<std::string> expected) {
    if (!at(k)) throw SyntaxError(peek().offset, std::move(expected), peek().describe());
    ++pos_;
  }

  ExprPtr parse_expr() {
    bool negate = false;
    if (at(Token::Kind::Minus)) {
      advance();
      negate = true;
    }
    ExprPtr node = parse_term();
    if (negate) node = negate_node(node);
    while (at(Token::Kind::Plus) || at(Token::Kind::Minus)) {
      const Token& op = advance();
      ExprPtr rhs = parse_term();
      if (rhs->arity != node->arity) throw MixedArity(op.offset);
      node = Expr::make_binary(
          op.kind == Token::Kind::Plus ? Expr::Kind::Sum : Expr::Kind::Diff,
          std::move(node), std::move(rhs));
    }
    return node;
  }

  static ExprPtr negate_node(ExprPtr node) {
    if (node->kind == Expr::Kind::Scale && !node->division)
      return Expr::make_scale(node->scalar.negate(), node->a, false);
    return Expr::make_scale(Scalar::integer(-1), std::move(node), false);
  }

  ExprPtr parse_term() {
    ExprPtr node = parse_factor();
    while (at(Token::Kind::TensorOp)) {
      advance();
      node = Expr::make_binary(Expr::Kind::Tensor, std::move(node), parse_factor());
    }
    return node;
  }

  ExprPtr parse_factor() {
    if (at(Token::Kind::Number) || at(Token::Kind::Sqrt) || at(Token::Kind::ImagUnit)) {
      const Scalar s = parse_scalar();
      if (!at(Token::Kind::KetLit))
        throw SyntaxError(peek().offset, {"ket"}, peek().describe());
      return Expr::make_scale(s, Expr::make_ket(advance().bits), false);
    }
    if (at(Token::Kind::KetLit)) return Expr::make_ket(advance().bits);
    if (at(Token::Kind::LParen)) {
      advance();
      ExprPtr inner = parse_expr();
      expect(Token::Kind::RParen, {"')'"});
      ExprPtr node = Expr::make_paren(std::move(inner));
      while (at(Token::Kind::Slash)) {
        advance();
        node = Expr::make_scale(parse_scalar(), std::move(node), true);
      }
      return node;
    }
    throw SyntaxError(peek().offset, {"ket", "scalar", "'('"}, peek().describe());
  }

  Scalar parse_scalar() {
    const std::size_t start = peek().offset;
    try {
      Scalar s = parse_scalar_primary();
      while (at(Token::Kind::Star)) {
        advance();
        s = s.times(parse_scalar_primary());
      }
      return s;
    } catch (const EvalError& e) {
      throw SyntaxError(start, {"representable scalar"}, e.what());
    }
  }

  Scalar parse_scalar_primary() {
    if (at(Token::Kind::Number)) {
      const long long base = advance().number;
      if (at(Token::Kind::Caret)) {
        advance();
        expect(Token::Kind::LParen, {"'('"});
        long long p_sign = 1;
        if (at(Token::Kind::Minus)) {
          advance();
          p_sign = -1;
        }
        if (!at(Token::Kind::Number))
          throw SyntaxError(peek().offset, {"number"}, peek().describe());
        const long long p = advance().number * p_sign;
        expect(Token::Kind::Slash, {"'/'"});
        if (!at(Token::Kind::Number))
          throw SyntaxError(peek().offset, {"number"}, peek().describe());
        const long long q = advance().number;
        expect(Token::Kind::RParen, {"')'"});
        if (q != 1 && q != 2)
          throw SyntaxError(peek().offset, {"exponent denominator 1 or 2"},
                            std::to_string(q));
        return Scalar::power(base, p, q);
      }
      return Scalar::integer(base);
    }
    if (at(Token::Kind::Sqrt)) {
      advance();
      expect(Token::Kind::LParen, {"'('"});
      if (!at(Token::Kind::Number))
        throw SyntaxError(peek().offset, {"number"}, peek().describe());
      const long long v = advance().number;
      expect(Token::Kind::RParen, {"')'"});
      return Scalar::sqrt_of(v);
    }
    if (at(Token::Kind::ImagUnit)) {
      advance();
      return Scalar::imaginary();
    }
    throw SyntaxError(peek().offset, {"number", "'sqrt'", "'i'"}, peek().describe());
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline ExprPtr parse(const std::string& text) { return detail::Parser(text).parse(); }

// -----------------------------------------------------------------------------
// Printer
// -----------------------------------------------------------------------------

inline std::string pretty_print(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Ket:
      return "|" + e->bits + ">";
    case Expr::Kind::Scale:
      if (e->division) return pretty_print(e->a) + "/" + e->scalar.text();
      return std::string(e->scalar.is_negative() ? "-" : "") + e->scalar.text() +
             pretty_print(e->a);
    case Expr::Kind::Sum:
      return pretty_print(e->a) + "+" + pretty_print(e->b);
    case Expr::Kind::Diff:
      return pretty_print(e->a) + "-" + pretty_print(e->b);
    case Expr::Kind::Tensor:
      return pretty_print(e->a) + "(x)" + pretty_print(e->b);
    case Expr::Kind::Paren:
      return "(" + pretty_print(e->a) + ")";
  }
  return "";
}

// -----------------------------------------------------------------------------
// Evaluator
// -----------------------------------------------------------------------------

namespace detail {

struct SymState {
  int n = 0;
  std::vector<std::vector<Scalar>> terms;  // per basis index
};

inline void check_budget(std::size_t total) {
  if (total > 1u << 20) throw EvalError("expression expands to too many terms");
}

inline SymState eval_rec(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Ket: {
      if (e->arity > 20) throw EvalError("kets limited to 20 qubits");
      SymState s;
      s.n = e->arity;
      s.terms.assign(std::size_t{1} << s.n, {});
      std::size_t idx = 0;
      for (char c : e->bits) idx = (idx << 1) | static_cast<unsigned>(c == '1');
      s.terms[idx].push_back(Scalar::integer(1));
      return s;
    }
    case Expr::Kind::Paren:
      return eval_rec(e->a);
    case Expr::Kind::Scale: {
      SymState s = eval_rec(e->a);
      const Scalar f = e->division ? e->scalar.reciprocal() : e->scalar;
      for (auto& terms : s.terms)
        for (auto& t : terms) t = t.times(f);
      return s;
    }
    case Expr::Kind::Sum:
    case Expr::Kind::Diff: {
      SymState lhs = eval_rec(e->a);
      SymState rhs = eval_rec(e->b);
      if (lhs.n != rhs.n) throw MixedArity(0);
      const Scalar sign = Scalar::integer(e->kind == Expr::Kind::Diff ? -1 : 1);
      std::size_t total = 0;
      for (std::size_t k = 0; k < lhs.terms.size(); ++k) {
        for (const auto& t : rhs.terms[k]) lhs.terms[k].push_back(t.times(sign));
        total += lhs.terms[k].size();
      }
      check_budget(total);
      return lhs;
    }
    case Expr::Kind::Tensor: {
      SymState lhs = eval_rec(e->a);
      SymState rhs = eval_rec(e->b);
      if (lhs.n + rhs.n > 20) throw EvalError("tensor product exceeds 20 qubits");
      SymState out;
      out.n = lhs.n + rhs.n;
      out.terms.assign(std::size_t{1} << out.n, {});
      std::size_t total = 0;
      for (std::size_t i = 0; i < lhs.terms.size(); ++i) {
        if (lhs.terms[i].empty()) continue;
        for (std::size_t j = 0; j < rhs.terms.size(); ++j) {
          if (rhs.terms[j].empty()) continue;
          auto& dst = out.terms[(i << rhs.n) | j];
          for (const auto& x : lhs.terms[i])
            for (const auto& y : rhs.terms[j]) dst.push_back(x.times(y));
          total += dst.size();
        }
        check_budget(total);
      }
      return out;
    }
  }
  throw EvalError("unknown node");
}

}  // namespace detail

// Folds the exact per-amplitude term lists to doubles once, at the end.
inline PureState evaluate(const ExprPtr& expr, bool normalize = true,
                          double* pre_norm = nullptr) {
  const detail::SymState sym = detail::eval_rec(expr);
  std::vector<cplx> amps(sym.terms.size(), cplx{0.0, 0.0});
  for (std::size_t k = 0; k < amps.size(); ++k)
    for (const auto& t : sym.terms[k]) amps[k] += t.value();
  if (normalize) return PureState::normalized(sym.n, std::move(amps), pre_norm);
  if (pre_norm) {
    double s = 0.0;
    for (const auto& a : amps) s += std::norm(a);
    *pre_norm = std::sqrt(s);
  }
  return PureState::raw(sym.n, std::move(amps));
}

inline PureState evaluate_text(const std::string& text, bool normalize = true,
                               double* pre_norm = nullptr) {
  return evaluate(parse(text), normalize, pre_norm);
}

}  // namespace ket
}  // namespace qent
