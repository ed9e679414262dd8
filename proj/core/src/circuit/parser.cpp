#include "zkit/circuit/parser.hpp"

#include <cctype>
#include <memory>
#include <unordered_set>

namespace zkit::circuit {
namespace {

enum class Tok {
  kIdent,
  kNumber,
  kSemicolon,
  kComma,
  kLParen,
  kRParen,
  kPlus,
  kMinus,
  kStar,
  kEquals,
  kArrow,      // <-
  kHintArrow,  // <--
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  SourceLocation loc;
};

[[noreturn]] void syntax_error(const std::string& msg, SourceLocation loc) {
  throw Error(Errc::kSyntaxError, msg, loc);
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      SourceLocation loc{line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back({Tok::kEnd, "", loc});
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        out.push_back({Tok::kIdent, identifier(), loc});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back({Tok::kNumber, number(), loc});
      } else if (c == '<') {
        if (peek(1) == '-' && peek(2) == '-') {
          advance(3);
          out.push_back({Tok::kHintArrow, "<--", loc});
        } else if (peek(1) == '-') {
          advance(2);
          out.push_back({Tok::kArrow, "<-", loc});
        } else {
          syntax_error("unexpected '<'", loc);
        }
      } else {
        Tok kind;
        switch (c) {
          case ';': kind = Tok::kSemicolon; break;
          case ',': kind = Tok::kComma; break;
          case '(': kind = Tok::kLParen; break;
          case ')': kind = Tok::kRParen; break;
          case '+': kind = Tok::kPlus; break;
          case '-': kind = Tok::kMinus; break;
          case '*': kind = Tok::kStar; break;
          case '=': kind = Tok::kEquals; break;
          default:
            syntax_error(std::string("unexpected character '") + c + "'", loc);
        }
        advance(1);
        out.push_back({kind, std::string(1, c), loc});
      }
    }
  }

 private:
  char peek(std::size_t k) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

  void advance(std::size_t k) {
    for (std::size_t i = 0; i < k && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else if (c == '/' && peek(1) == '*') {
        SourceLocation start{line_, col_};
        advance(2);
        while (pos_ < src_.size() && !(src_[pos_] == '*' && peek(1) == '/')) advance(1);
        if (pos_ >= src_.size()) syntax_error("unterminated comment", start);
        advance(2);
      } else {
        return;
      }
    }
  }

  // name ( '.' name | '[' digits ']' )*
  std::string identifier() {
    std::string out;
    auto word = [&] {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        out += src_[pos_];
        advance(1);
      }
    };
    word();
    for (;;) {
      if (peek(0) == '.' && (std::isalpha(static_cast<unsigned char>(peek(1))) || peek(1) == '_')) {
        out += '.';
        advance(1);
        word();
      } else if (peek(0) == '[') {
        SourceLocation loc{line_, col_};
        out += '[';
        advance(1);
        if (!std::isdigit(static_cast<unsigned char>(peek(0)))) syntax_error("expected index", loc);
        while (std::isdigit(static_cast<unsigned char>(peek(0)))) {
          out += src_[pos_];
          advance(1);
        }
        if (peek(0) != ']') syntax_error("expected ']'", loc);
        out += ']';
        advance(1);
      } else {
        return out;
      }
    }
  }

  std::string number() {
    std::string out;
    if (peek(0) == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      out = "0x";
      advance(2);
      while (std::isxdigit(static_cast<unsigned char>(peek(0)))) {
        out += src_[pos_];
        advance(1);
      }
      if (out.size() == 2) syntax_error("empty hex literal", {line_, col_});
    } else {
      while (std::isdigit(static_cast<unsigned char>(peek(0)))) {
        out += src_[pos_];
        advance(1);
      }
    }
    if (std::isalpha(static_cast<unsigned char>(peek(0))) || peek(0) == '_') {
      syntax_error("malformed number", {line_, col_});
    }
    return out;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

// ---------------------------------------------------------------------------

struct Expr {
  enum Kind { kNumber, kName, kAdd, kSub, kMul, kNeg } kind;
  std::string text;
  SourceLocation loc;
  std::unique_ptr<Expr> lhs, rhs;
};
using ExprPtr = std::unique_ptr<Expr>;

struct SignalStmt {
  std::string name;
  Visibility visibility;
  SourceLocation loc;
};
struct AssignStmt {
  std::string target;
  SourceLocation target_loc;
  ExprPtr rhs;
  SourceLocation loc;
};
struct HintStmt {
  std::string target;
  SourceLocation target_loc;
  std::string builtin;
  std::vector<ExprPtr> args;
  SourceLocation loc;
};
struct AssertStmt {
  ExprPtr lhs, rhs;
  SourceLocation loc;
};
struct ComponentStmt {
  std::string instance;
  std::string templ;
  std::vector<std::uint64_t> params;
  std::vector<ExprPtr> args;
  SourceLocation loc;
};
using Stmt = std::variant<SignalStmt, AssignStmt, HintStmt, AssertStmt, ComponentStmt>;

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  std::vector<Stmt> program() {
    std::vector<Stmt> out;
    while (cur().kind != Tok::kEnd) out.push_back(statement());
    return out;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool at_keyword(std::string_view kw) const {
    return cur().kind == Tok::kIdent && cur().text == kw;
  }

  const Token& expect(Tok kind, std::string_view what) {
    if (cur().kind != kind) {
      syntax_error("expected " + std::string(what) + ", found " + describe(cur()), cur().loc);
    }
    return next();
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::kEnd) return "end of input";
    return "'" + t.text + "'";
  }

  static bool is_keyword(std::string_view s) {
    return s == "signal" || s == "assert" || s == "component";
  }

  const Token& expect_name(std::string_view what) {
    const Token& t = expect(Tok::kIdent, what);
    if (is_keyword(t.text)) syntax_error("'" + t.text + "' is a keyword", t.loc);
    return t;
  }

  Stmt statement() {
    SourceLocation loc = cur().loc;
    if (at_keyword("signal")) {
      next();
      Visibility v = Visibility::kInternal;
      // Modifiers are contextual: `signal out;` declares a signal named out.
      auto modifier = [&](std::string_view kw) {
        return at_keyword(kw) && toks_[pos_ + 1].kind == Tok::kIdent;
      };
      if (modifier("public")) {
        next();
        if (!at_keyword("in")) syntax_error("expected 'in' after 'public'", cur().loc);
        next();
        v = Visibility::kPublicInput;
      } else if (modifier("in")) {
        next();
        v = Visibility::kPrivateInput;
      } else if (modifier("out")) {
        next();
        v = Visibility::kOutput;
      }
      const Token& name = expect_name("signal name");
      expect(Tok::kSemicolon, "';'");
      return SignalStmt{name.text, v, name.loc};
    }
    if (at_keyword("assert")) {
      next();
      ExprPtr lhs = expression();
      expect(Tok::kEquals, "'='");
      ExprPtr rhs = expression();
      expect(Tok::kSemicolon, "';'");
      return AssertStmt{std::move(lhs), std::move(rhs), loc};
    }
    if (at_keyword("component")) {
      next();
      const Token& inst = expect_name("component name");
      expect(Tok::kEquals, "'='");
      const Token& templ = expect_name("template name");
      ComponentStmt c{inst.text, templ.text, {}, {}, loc};
      expect(Tok::kLParen, "'('");
      if (cur().kind != Tok::kRParen) {
        for (;;) {
          const Token& num = expect(Tok::kNumber, "integer template parameter");
          mpz_class v;
          if (num.text.starts_with("0x")) {
            v.set_str(num.text.substr(2), 16);
          } else {
            v.set_str(num.text, 10);
          }
          if (!v.fits_ulong_p()) syntax_error("template parameter too large", num.loc);
          c.params.push_back(v.get_ui());
          if (cur().kind != Tok::kComma) break;
          next();
        }
      }
      expect(Tok::kRParen, "')'");
      c.args = argument_list();
      expect(Tok::kSemicolon, "';'");
      return c;
    }
    if (cur().kind == Tok::kIdent) {
      const Token& target = expect_name("signal name");
      if (cur().kind == Tok::kArrow) {
        next();
        ExprPtr rhs = expression();
        expect(Tok::kSemicolon, "';'");
        return AssignStmt{target.text, target.loc, std::move(rhs), loc};
      }
      if (cur().kind == Tok::kHintArrow) {
        next();
        const Token& fn = expect(Tok::kIdent, "hint function");
        HintStmt h{target.text, target.loc, fn.text, argument_list(), loc};
        expect(Tok::kSemicolon, "';'");
        return h;
      }
      syntax_error("expected '<-' or '<--' after '" + target.text + "'", cur().loc);
    }
    syntax_error("expected a statement, found " + describe(cur()), cur().loc);
  }

  std::vector<ExprPtr> argument_list() {
    std::vector<ExprPtr> args;
    expect(Tok::kLParen, "'('");
    if (cur().kind != Tok::kRParen) {
      for (;;) {
        args.push_back(expression());
        if (cur().kind != Tok::kComma) break;
        next();
      }
    }
    expect(Tok::kRParen, "')'");
    return args;
  }

  ExprPtr expression() {
    ExprPtr lhs = product();
    while (cur().kind == Tok::kPlus || cur().kind == Tok::kMinus) {
      const Token& op = next();
      ExprPtr rhs = product();
      auto e = std::make_unique<Expr>();
      e->kind = op.kind == Tok::kPlus ? Expr::kAdd : Expr::kSub;
      e->loc = op.loc;
      e->lhs = std::move(lhs);
      e->rhs = std::move(rhs);
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr product() {
    ExprPtr lhs = unary();
    while (cur().kind == Tok::kStar) {
      const Token& op = next();
      ExprPtr rhs = unary();
      auto e = std::make_unique<Expr>();
      e->kind = Expr::kMul;
      e->loc = op.loc;
      e->lhs = std::move(lhs);
      e->rhs = std::move(rhs);
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr unary() {
    if (cur().kind == Tok::kMinus) {
      const Token& op = next();
      auto e = std::make_unique<Expr>();
      e->kind = Expr::kNeg;
      e->loc = op.loc;
      e->lhs = unary();
      return e;
    }
    return primary();
  }

  ExprPtr primary() {
    if (cur().kind == Tok::kLParen) {
      next();
      ExprPtr e = expression();
      expect(Tok::kRParen, "')'");
      return e;
    }
    auto e = std::make_unique<Expr>();
    e->loc = cur().loc;
    if (cur().kind == Tok::kNumber) {
      e->kind = Expr::kNumber;
      e->text = next().text;
      return e;
    }
    if (cur().kind == Tok::kIdent) {
      e->kind = Expr::kName;
      e->text = expect_name("signal name").text;
      return e;
    }
    syntax_error("expected an expression, found " + describe(cur()), cur().loc);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------

class Elaborator {
 public:
  Elaborator(const PrimeField& f, const TemplateRegistry* templates)
      : f_(f), templates_(templates), b_(f) {}

  CircuitAst run(const std::vector<Stmt>& prog) {
    // Explicit declarations and assignment targets become signals in
    // textual order; undeclared targets are implicitly internal.
    for (const auto& s : prog) {
      if (const auto* d = std::get_if<SignalStmt>(&s)) {
        b_.declare_qualified(d->name, d->visibility, d->loc);
      }
    }
    for (const auto& s : prog) {
      const std::string* target = nullptr;
      SourceLocation loc;
      if (const auto* a = std::get_if<AssignStmt>(&s)) {
        target = &a->target;
        loc = a->target_loc;
      } else if (const auto* h = std::get_if<HintStmt>(&s)) {
        target = &h->target;
        loc = h->target_loc;
      }
      if (target && !b_.find(*target)) b_.declare_qualified(*target, Visibility::kInternal, loc);
    }

    for (const auto& s : prog) {
      std::visit([&](const auto& stmt) { elaborate(stmt); }, s);
    }
    return std::move(b_).finish();
  }

 private:
  void elaborate(const SignalStmt&) {}

  void elaborate(const AssignStmt& a) {
    b_.assign(*b_.find(a.target), eval(*a.rhs), a.loc);
  }

  void elaborate(const HintStmt& h) {
    std::vector<LinearCombination> args;
    for (const auto& e : h.args) args.push_back(linear(*e));
    b_.hint(*b_.find(h.target), h.builtin, std::move(args), h.loc);
  }

  void elaborate(const AssertStmt& a) {
    Quadratic lhs = eval(*a.lhs);
    Quadratic rhs = eval(*a.rhs);
    if (lhs.product && rhs.product) {
      syntax_error("assertion needs more than one multiplication", a.loc);
    }
    b_.assert_equal(std::move(lhs), std::move(rhs), a.loc);
  }

  void elaborate(const ComponentStmt& c) {
    const TemplateFn* fn = templates_ ? templates_->find(c.templ) : nullptr;
    if (!fn) throw Error(Errc::kUnknownTemplate, "unknown template '" + c.templ + "'", c.loc);
    if (instances_.contains(c.instance) || b_.find(c.instance)) {
      syntax_error("name '" + c.instance + "' already in use", c.loc);
    }
    std::vector<LinearCombination> args;
    for (const auto& e : c.args) args.push_back(linear(*e));
    TemplateOutputs outs;
    {
      auto guard = b_.scope(c.instance);
      outs = (*fn)(b_, c.params, args, c.loc);
    }
    instances_.insert(c.instance);
    for (auto& [name, lc] : outs) {
      alias_lcs_.emplace(c.instance + "." + name, std::move(lc));
    }
  }

  LinearCombination linear(const Expr& e) {
    Quadratic q = eval(e);
    if (q.product) syntax_error("expected a linear expression", e.loc);
    return std::move(q.linear);
  }

  Quadratic eval(const Expr& e) {
    switch (e.kind) {
      case Expr::kNumber: {
        mpz_class v;
        if (e.text.starts_with("0x")) {
          v.set_str(e.text.substr(2), 16);
        } else {
          v.set_str(e.text, 10);
        }
        return Quadratic(LinearCombination::constant(f_.element(v)));
      }
      case Expr::kName: {
        if (auto it = alias_lcs_.find(e.text); it != alias_lcs_.end()) {
          return Quadratic(it->second);
        }
        if (auto idx = b_.find(e.text)) return Quadratic(b_.signal(*idx));
        throw Error(Errc::kUndeclaredSignal, "undeclared signal '" + e.text + "'", e.loc);
      }
      case Expr::kNeg: {
        Quadratic q = eval(*e.lhs);
        return scale(std::move(q), -f_.one());
      }
      case Expr::kAdd:
      case Expr::kSub: {
        Quadratic l = eval(*e.lhs);
        Quadratic r = eval(*e.rhs);
        if (e.kind == Expr::kSub) r = scale(std::move(r), -f_.one());
        if (l.product && r.product) {
          syntax_error("expression needs more than one multiplication", e.loc);
        }
        if (r.product) std::swap(l, r);
        l.linear += r.linear;
        return l;
      }
      case Expr::kMul: {
        Quadratic l = eval(*e.lhs);
        Quadratic r = eval(*e.rhs);
        if (!l.product && l.linear.is_constant()) return scale(std::move(r), l.linear.constant_term());
        if (!r.product && r.linear.is_constant()) return scale(std::move(l), r.linear.constant_term());
        if (l.product || r.product) {
          syntax_error("expression needs more than one multiplication", e.loc);
        }
        return Quadratic(std::move(l.linear), std::move(r.linear), LinearCombination(f_));
      }
    }
    syntax_error("bad expression", e.loc);
  }

  Quadratic scale(Quadratic q, const FieldElement& c) {
    q.linear *= c;
    if (q.product) {
      q.product->first *= c;
      if (c.is_zero()) q.product.reset();
    }
    return q;
  }

  const PrimeField& f_;
  const TemplateRegistry* templates_;
  CircuitBuilder b_;
  std::unordered_set<std::string> instances_;
  std::unordered_map<std::string, LinearCombination> alias_lcs_;
};

}  // namespace

CircuitAst parse_circuit(std::string_view source, const PrimeField& field,
                         const TemplateRegistry* templates) {
  std::vector<Stmt> prog = Parser(Lexer(source).run()).program();
  return Elaborator(field, templates).run(prog);
}

}  // namespace zkit::circuit
