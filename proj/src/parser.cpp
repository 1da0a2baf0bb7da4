#include "tplp/parser.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace tplp {

namespace {

constexpr std::int64_t kMaxCalendarPoints = 1'000'000;

enum class Tok {
  Ident,  // lowercase-initial name, may contain '-' between alphanumerics
  Var,    // uppercase-initial name
  Int,
  Decimal,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  At,
  Colon,
  ColonDash,
  Dot,
  DotDot,
  Less,
  LessEq,
  Greater,
  GreaterEq,
  Equal,
  NotEqual,
  Tilde,
  Hash,
  Star,
  Plus,
  Minus,
  Slash,
  Question,
  End,
  Invalid,
};

struct Token {
  Tok kind = Tok::End;
  std::string_view text;
  SourceSpan span;
};

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::End) break;
    }
    return out;
  }

private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Token make(Tok kind, std::size_t start, std::size_t line, std::size_t col) {
    return {kind, src_.substr(start, pos_ - start), {line, col, start, pos_}};
  }

  Token next() {
    std::size_t start = pos_, line = line_, col = col_;
    if (pos_ >= src_.size()) return make(Tok::End, start, line, col);
    char c = src_[pos_];
    auto peek = [&](std::size_t k) { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; };
    if (std::islower(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() && (is_alnum(src_[pos_]) || (src_[pos_] == '-' && is_alnum(peek(1))))) advance();
      return make(Tok::Ident, start, line, col);
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() && is_alnum(src_[pos_])) advance();
      return make(Tok::Var, start, line, col);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
      if (peek(0) == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        advance();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        return make(Tok::Decimal, start, line, col);
      }
      return make(Tok::Int, start, line, col);
    }
    auto single = [&](Tok k) {
      advance();
      return make(k, start, line, col);
    };
    auto pair = [&](Tok k) {
      advance();
      advance();
      return make(k, start, line, col);
    };
    switch (c) {
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case '[': return single(Tok::LBracket);
      case ']': return single(Tok::RBracket);
      case ',': return single(Tok::Comma);
      case '@': return single(Tok::At);
      case ':': return peek(1) == '-' ? pair(Tok::ColonDash) : single(Tok::Colon);
      case '.': return peek(1) == '.' ? pair(Tok::DotDot) : single(Tok::Dot);
      case '<': return peek(1) == '=' ? pair(Tok::LessEq) : single(Tok::Less);
      case '>': return peek(1) == '=' ? pair(Tok::GreaterEq) : single(Tok::Greater);
      case '=': return single(Tok::Equal);
      case '!': return peek(1) == '=' ? pair(Tok::NotEqual) : single(Tok::Invalid);
      case '~': return single(Tok::Tilde);
      case '#': return single(Tok::Hash);
      case '*': return single(Tok::Star);
      case '+': return single(Tok::Plus);
      case '-': return single(Tok::Minus);
      case '/': return single(Tok::Slash);
      case '?': return single(Tok::Question);
      default: {
        // Consume one whole UTF-8 sequence so spans stay on character boundaries.
        advance();
        while (pos_ < src_.size() && (static_cast<unsigned char>(src_[pos_]) & 0xC0) == 0x80) advance();
        return make(Tok::Invalid, start, line, col);
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

struct SyntaxError {
  Diagnostic diag;
};

bool is_temporal_var(std::string_view name) { return !name.empty() && name.front() == 'Y'; }

bool is_keyword(std::string_view s) {
  return s == "and" || s == "or" || s == "not" || s == "calendar" || s == "constants" || s == "uniform";
}

SourceSpan join(const SourceSpan& a, const SourceSpan& b) { return {a.line, a.column, a.begin, b.end}; }

class Parser {
public:
  explicit Parser(std::string_view text) : tokens_(Lexer(text).run()) {}

  std::vector<Diagnostic> diagnostics;

  ParseResult<PTProgram> program() {
    PTProgram p;
    try {
      p.calendar = calendar_decl();
      if (at_ident("constants")) p.declared_constants = constants_decl();
    } catch (const SyntaxError& e) {
      diagnostics.push_back(e.diag);
      return {std::nullopt, diagnostics};
    }
    while (peek().kind != Tok::End) {
      try {
        p.clauses.push_back(clause());
      } catch (const SyntaxError& e) {
        diagnostics.push_back(e.diag);
        recover();
      }
    }
    if (has_errors(diagnostics)) return {std::nullopt, diagnostics};
    auto v = validate_program(p);
    diagnostics.insert(diagnostics.end(), v.begin(), v.end());
    if (has_errors(diagnostics)) return {std::nullopt, diagnostics};
    return {std::move(p), diagnostics};
  }

  ParseResult<Query> query() {
    try {
      Query q;
      Token start = expect(Tok::Question, "'?' to start a query");
      Token kw = expect(Tok::Ident, "'entail' or 'tighten'");
      if (kw.text == "entail") {
        q.kind = Query::Kind::Entail;
        q.formula = basic_formula(false);
        expect(Tok::Colon, "':' before the annotation");
        q.annotation = annotation();
        check_formula_principal(q.formula, *q.annotation);
      } else if (kw.text == "tighten") {
        q.kind = Query::Kind::Tighten;
        q.formula = basic_formula(true);
        bool any_wild = false, any_point = false;
        std::optional<TimePoint> point;
        for (const auto& a : q.formula.atoms) {
          if (a.time.is_variable() && *a.time.variable == "*") {
            any_wild = true;
          } else if (a.time.is_variable()) {
            fail(a.span, "tighten queries take a time point or '*', not a temporal variable");
          } else {
            if (point && *point != a.time.point) fail(a.span, "all atoms of a tighten query must share one time");
            point = a.time.point;
            any_point = true;
          }
        }
        if (any_wild && any_point) fail(q.formula.atoms.front().span, "cannot mix '*' with explicit time points");
        if (any_wild) {
          for (auto& a : q.formula.atoms) a.time = TimeTerm::var("Y");
        } else {
          q.at = point;
        }
      } else {
        fail(kw.span, "unknown query kind '" + std::string(kw.text) + "'");
      }
      Token end = expect(Tok::Dot, "'.' to end the query");
      if (peek().kind != Tok::End) fail(peek().span, "unexpected input after the query");
      q.span = join(start.span, end.span);
      for (const auto& a : q.formula.atoms) {
        for (const auto& arg : a.args) {
          if (arg.is_variable()) {
            diagnostics.push_back({Severity::Error, DiagnosticKind::NonGroundQuery,
                                   "query atoms must be ground in object terms; found variable " + arg.name,
                                   a.span});
          }
        }
      }
      if (has_errors(diagnostics)) return {std::nullopt, diagnostics};
      return {std::move(q), diagnostics};
    } catch (const SyntaxError& e) {
      diagnostics.push_back(e.diag);
      return {std::nullopt, diagnostics};
    }
  }

  ParseResult<ProgramSkeleton> skeleton() {
    ProgramSkeleton s;
    try {
      s.calendar = calendar_decl();
    } catch (const SyntaxError& e) {
      diagnostics.push_back(e.diag);
      return {std::nullopt, diagnostics};
    }
    while (peek().kind != Tok::End) {
      try {
        ClauseSkeleton c;
        c.head = plain_atom();
        if (accept(Tok::ColonDash)) {
          c.body.push_back(plain_formula());
          while (accept_ident("and")) c.body.push_back(plain_formula());
        }
        Token end = expect(Tok::Dot, "'.' to end the clause");
        c.span = join(c.head.span, end.span);
        s.clauses.push_back(std::move(c));
      } catch (const SyntaxError& e) {
        diagnostics.push_back(e.diag);
        recover();
      }
    }
    if (has_errors(diagnostics)) return {std::nullopt, diagnostics};
    return {std::move(s), diagnostics};
  }

private:
  const Token& peek(std::size_t k = 0) const {
    std::size_t i = std::min(pos_ + k, tokens_.size() - 1);
    return tokens_[i];
  }

  Token take() {
    Token t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }

  bool accept(Tok k) {
    if (peek().kind != k) return false;
    take();
    return true;
  }

  bool at_ident(std::string_view word) const { return peek().kind == Tok::Ident && peek().text == word; }

  bool accept_ident(std::string_view word) {
    if (!at_ident(word)) return false;
    take();
    return true;
  }

  [[noreturn]] void fail(const SourceSpan& span, std::string message) {
    throw SyntaxError{{Severity::Error, DiagnosticKind::Syntax, std::move(message), span}};
  }

  Token expect(Tok k, const char* what) {
    if (peek().kind != k) {
      std::string found = peek().kind == Tok::End ? "end of input" : "'" + std::string(peek().text) + "'";
      fail(peek().span, std::string("expected ") + what + ", found " + found);
    }
    return take();
  }

  void expect_ident(std::string_view word) {
    if (!at_ident(word)) fail(peek().span, "expected '" + std::string(word) + "'");
    take();
  }

  // Skips to just past the next clause terminator.
  void recover() {
    while (peek().kind != Tok::End && peek().kind != Tok::Dot) take();
    accept(Tok::Dot);
  }

  std::int64_t integer(const Token& t, bool negative) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) fail(t.span, "integer literal out of range");
    return negative ? -v : v;
  }

  std::int64_t signed_integer(const char* what) {
    bool negative = accept(Tok::Minus);
    return integer(expect(Tok::Int, what), negative);
  }

  Calendar calendar_decl() {
    expect_ident("calendar");
    std::int64_t first = signed_integer("first calendar point");
    expect(Tok::DotDot, "'..'");
    Token last_tok = peek();
    std::int64_t last = signed_integer("last calendar point");
    expect(Tok::Dot, "'.' after the calendar declaration");
    if (last < first) fail(last_tok.span, "calendar range is empty");
    if (last - first >= kMaxCalendarPoints) fail(last_tok.span, "calendar has too many points");
    return Calendar::range(first, last);
  }

  std::vector<std::string> constants_decl() {
    expect_ident("constants");
    std::vector<std::string> out;
    do {
      Token t = expect(Tok::Ident, "constant name");
      if (is_keyword(t.text)) fail(t.span, "'" + std::string(t.text) + "' is a reserved word");
      out.emplace_back(t.text);
    } while (accept(Tok::Comma));
    expect(Tok::Dot, "'.' after the constants declaration");
    return out;
  }

  TPClause clause() {
    TPClause c;
    c.head = tatom(false);
    expect(Tok::Colon, "':' after the head atom");
    c.head_annotation = annotation();
    if (accept(Tok::ColonDash)) {
      do {
        AnnotatedFormula af;
        af.formula = basic_formula(false);
        expect(Tok::Colon, "':' before the annotation");
        af.annotation = annotation();
        c.body.push_back(std::move(af));
      } while (accept_ident("and"));
    }
    Token end = expect(Tok::Dot, "'.' to end the clause");
    c.span = join(c.head.span, end.span);
    return c;
  }

  ObjectTerm object_term() {
    Token t = peek();
    if (t.kind == Tok::Ident) {
      if (is_keyword(t.text)) fail(t.span, "'" + std::string(t.text) + "' is a reserved word");
      take();
      return ObjectTerm::constant(std::string(t.text));
    }
    if (t.kind == Tok::Var) {
      take();
      return ObjectTerm::variable(std::string(t.text));
    }
    fail(t.span, "expected a constant or an object variable");
  }

  std::pair<std::string, std::vector<ObjectTerm>> predicate_and_args(SourceSpan& span) {
    Token name = expect(Tok::Ident, "predicate name");
    if (is_keyword(name.text)) fail(name.span, "'" + std::string(name.text) + "' is a reserved word");
    span = name.span;
    std::vector<ObjectTerm> args;
    if (accept(Tok::LParen)) {
      do args.push_back(object_term());
      while (accept(Tok::Comma));
      Token close = expect(Tok::RParen, "')'");
      span = join(span, close.span);
    }
    return {std::string(name.text), std::move(args)};
  }

  TAtom tatom(bool allow_wildcard) {
    TAtom a;
    auto [pred, args] = predicate_and_args(a.span);
    a.predicate = std::move(pred);
    a.args = std::move(args);
    expect(Tok::At, "'@' and a temporal term");
    Token t = peek();
    if (t.kind == Tok::Var) {
      if (!is_temporal_var(t.text)) fail(t.span, "temporal variables must start with 'Y'");
      take();
      a.time = TimeTerm::var(std::string(t.text));
    } else if (t.kind == Tok::Star && allow_wildcard) {
      take();
      a.time = TimeTerm::var("*");
    } else if (t.kind == Tok::Int || t.kind == Tok::Minus) {
      a.time = TimeTerm::at(TimePoint{signed_integer("time point")});
    } else {
      fail(t.span, "expected a temporal variable or a time point after '@'");
    }
    a.span = join(a.span, tokens_[pos_ - 1].span);
    return a;
  }

  BasicFormula basic_formula(bool allow_wildcard) {
    BasicFormula f;
    f.atoms.push_back(tatom(allow_wildcard));
    while (at_ident("and") || at_ident("or")) {
      // "and" after an annotation starts a new conjunct; here we are still
      // before the ':' so it joins atoms of one compound formula.
      Connective c = peek().text == "and" ? Connective::And : Connective::Or;
      if (f.connective != Connective::Single && f.connective != c)
        fail(peek().span, "a compound formula must use a single connective");
      f.connective = c;
      take();
      f.atoms.push_back(tatom(allow_wildcard));
    }
    return f;
  }

  TAtom plain_atom() {
    TAtom a;
    auto [pred, args] = predicate_and_args(a.span);
    a.predicate = std::move(pred);
    a.args = std::move(args);
    if (peek().kind == Tok::At) fail(peek().span, "skeleton atoms carry no temporal position");
    a.time = TimeTerm::var("Y");
    return a;
  }

  BasicFormula plain_formula() {
    // Inside skeletons "and" separates conjuncts; compound formulas use
    // parentheses: (a and b), (a or b).
    BasicFormula f;
    if (!accept(Tok::LParen)) {
      f.atoms.push_back(plain_atom());
      return f;
    }
    f.atoms.push_back(plain_atom());
    while (at_ident("and") || at_ident("or")) {
      Connective c = peek().text == "and" ? Connective::And : Connective::Or;
      if (f.connective != Connective::Single && f.connective != c)
        fail(peek().span, "a compound formula must use a single connective");
      f.connective = c;
      take();
      f.atoms.push_back(plain_atom());
    }
    expect(Tok::RParen, "')'");
    return f;
  }

  void check_formula_principal(const BasicFormula& f, const TPAnnotation& a) {
    for (const auto& atom : f.atoms) {
      if (atom.time.is_variable() && *atom.time.variable != a.constraint.principal) {
        diagnostics.push_back({Severity::Error, DiagnosticKind::PrincipalMismatch,
                               "atom " + to_string(atom) + " uses " + *atom.time.variable +
                                   " but the annotation constrains " + a.constraint.principal,
                               atom.span});
      }
    }
  }

  TPAnnotation annotation() {
    TPAnnotation a;
    Token open = expect(Tok::Less, "'<' to open the annotation");
    principal_.reset();
    a.constraint.root = constraint_or();
    a.constraint.principal = principal_.value_or("Y");
    expect(Tok::Comma, "',' after the constraint");
    a.lower = weights();
    expect(Tok::Comma, "',' between the lower and upper weights");
    a.upper = weights();
    Token close = expect(Tok::Greater, "'>' to close the annotation");
    a.span = join(open.span, close.span);
    return a;
  }

  ConstraintNode constraint_or() {
    ConstraintNode left = constraint_and();
    while (at_ident("or")) {
      take();
      ConstraintNode right = constraint_and();
      SourceSpan span = join(left.span, right.span);
      left = ConstraintNode::disj(std::move(left), std::move(right));
      left.span = span;
    }
    return left;
  }

  ConstraintNode constraint_and() {
    ConstraintNode left = constraint_unary();
    while (at_ident("and")) {
      take();
      ConstraintNode right = constraint_unary();
      SourceSpan span = join(left.span, right.span);
      left = ConstraintNode::conj(std::move(left), std::move(right));
      left.span = span;
    }
    return left;
  }

  ConstraintNode constraint_unary() {
    Token t = peek();
    if (accept_ident("not")) {
      ConstraintNode inner = constraint_unary();
      SourceSpan span = join(t.span, inner.span);
      ConstraintNode n = ConstraintNode::negation(std::move(inner));
      n.span = span;
      return n;
    }
    if (accept(Tok::LParen)) {
      ConstraintNode inner = constraint_or();
      expect(Tok::RParen, "')'");
      return inner;
    }
    return constraint_leaf();
  }

  ConstraintNode constraint_leaf() {
    Token var = expect(Tok::Var, "the principal temporal variable");
    if (!is_temporal_var(var.text)) fail(var.span, "temporal variables must start with 'Y'");
    if (!principal_) {
      principal_ = std::string(var.text);
    } else if (*principal_ != var.text) {
      diagnostics.push_back({Severity::Error, DiagnosticKind::PrincipalMismatch,
                             "every comparison must constrain " + *principal_ + ", found " + std::string(var.text),
                             var.span});
    }
    ConstraintNode n;
    Token op = take();
    switch (op.kind) {
      case Tok::Colon: {
        TimeExpr lo = expr();
        expect(Tok::Tilde, "'~' in a range constraint");
        TimeExpr hi = expr();
        n = ConstraintNode::range(std::move(lo), std::move(hi));
        break;
      }
      case Tok::LessEq: n = ConstraintNode::compare(CompareOp::Le, expr()); break;
      case Tok::Less: n = ConstraintNode::compare(CompareOp::Lt, expr()); break;
      case Tok::Equal: n = ConstraintNode::compare(CompareOp::Eq, expr()); break;
      case Tok::NotEqual: n = ConstraintNode::compare(CompareOp::Ne, expr()); break;
      case Tok::Greater: n = ConstraintNode::compare(CompareOp::Gt, expr()); break;
      case Tok::GreaterEq: n = ConstraintNode::compare(CompareOp::Ge, expr()); break;
      default: fail(op.span, "expected a comparison operator or ':' after " + std::string(var.text));
    }
    n.span = join(var.span, tokens_[pos_ - 1].span);
    return n;
  }

  TimeExpr expr() {
    TimeExpr left = term();
    for (;;) {
      if (accept(Tok::Plus)) {
        left = TimeExpr::binary(TimeExpr::Op::Add, std::move(left), term());
      } else if (accept(Tok::Minus)) {
        left = TimeExpr::binary(TimeExpr::Op::Sub, std::move(left), term());
      } else {
        return left;
      }
    }
  }

  TimeExpr term() {
    TimeExpr left = unary();
    while (accept(Tok::Star)) left = TimeExpr::binary(TimeExpr::Op::Mul, std::move(left), unary());
    return left;
  }

  TimeExpr unary() {
    if (accept(Tok::Minus)) {
      if (peek().kind == Tok::Int) return TimeExpr::constant(integer(take(), true));
      return TimeExpr::negate(unary());
    }
    Token t = peek();
    if (t.kind == Tok::Int) return TimeExpr::constant(integer(take(), false));
    if (t.kind == Tok::Var) {
      if (!is_temporal_var(t.text)) fail(t.span, "temporal variables must start with 'Y'");
      take();
      return TimeExpr::variable(std::string(t.text));
    }
    if (accept(Tok::LParen)) {
      TimeExpr inner = expr();
      expect(Tok::RParen, "')'");
      return inner;
    }
    fail(t.span, "expected a temporal term");
  }

  Rational probability() {
    Token t = peek();
    if (t.kind == Tok::Decimal || t.kind == Tok::Int) {
      take();
      std::string text(t.text);
      if (t.kind == Tok::Int && accept(Tok::Slash)) text += "/" + std::string(expect(Tok::Int, "denominator").text);
      auto r = parse_rational(text);
      if (!r) fail(t.span, "invalid probability literal '" + text + "' (at most 9 fractional digits)");
      return *r;
    }
    fail(t.span, "expected a probability value");
  }

  WeightFunction weights() {
    if (accept(Tok::Hash)) return WeightFunction::sharp();
    if (accept_ident("uniform")) return WeightFunction::uniform();
    expect(Tok::LBracket, "'#', 'uniform' or '[' for weights");
    std::vector<Rational> values;
    do values.push_back(probability());
    while (accept(Tok::Comma));
    expect(Tok::RBracket, "']'");
    return WeightFunction::list(std::move(values));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::optional<std::string> principal_;
};

// ---------------------------------------------------------------- rendering

int precedence(const TimeExpr& e) {
  switch (e.op) {
    case TimeExpr::Op::Add:
    case TimeExpr::Op::Sub: return 1;
    case TimeExpr::Op::Mul: return 2;
    default: return 3;
  }
}

std::string render_operand(const TimeExpr& e, int min_prec) {
  std::string s = render(e);
  return precedence(e) < min_prec ? "(" + s + ")" : s;
}

const char* op_text(CompareOp op) {
  switch (op) {
    case CompareOp::Le: return "<=";
    case CompareOp::Lt: return "<";
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "=";
}

std::string render_node(const ConstraintNode& n, const std::string& var) {
  auto wrap = [&](const ConstraintNode& child, bool needs) {
    std::string s = render_node(child, var);
    return needs ? "(" + s + ")" : s;
  };
  auto is_binary = [](const ConstraintNode& c) {
    return c.kind == ConstraintNode::Kind::And || c.kind == ConstraintNode::Kind::Or;
  };
  switch (n.kind) {
    case ConstraintNode::Kind::Compare: return var + " " + op_text(n.op) + " " + render(n.bounds[0]);
    case ConstraintNode::Kind::Range: return var + " : " + render(n.bounds[0]) + " ~ " + render(n.bounds[1]);
    case ConstraintNode::Kind::Not: return "not " + wrap(n.children[0], is_binary(n.children[0]));
    case ConstraintNode::Kind::And:
      return wrap(n.children[0], n.children[0].kind == ConstraintNode::Kind::Or) + " and " +
             wrap(n.children[1], is_binary(n.children[1]));
    case ConstraintNode::Kind::Or: return render_node(n.children[0], var) + " or " + wrap(n.children[1], n.children[1].kind == ConstraintNode::Kind::Or);
  }
  return {};
}

std::string render_formula(const BasicFormula& f) { return to_string(f); }

}  // namespace

ParseResult<PTProgram> parse_program(std::string_view text) { return Parser(text).program(); }

ParseResult<Query> parse_query(std::string_view text) { return Parser(text).query(); }

ParseResult<ProgramSkeleton> parse_skeleton(std::string_view text) { return Parser(text).skeleton(); }

std::string render(const TimeExpr& e) {
  switch (e.op) {
    case TimeExpr::Op::Const: return std::to_string(e.value);
    case TimeExpr::Op::Var: return e.var;
    case TimeExpr::Op::Add: return render_operand(e.args[0], 1) + " + " + render_operand(e.args[1], 2);
    case TimeExpr::Op::Sub: return render_operand(e.args[0], 1) + " - " + render_operand(e.args[1], 2);
    case TimeExpr::Op::Mul: return render_operand(e.args[0], 2) + " * " + render_operand(e.args[1], 3);
    case TimeExpr::Op::Neg: {
      const TimeExpr& inner = e.args[0];
      return inner.op == TimeExpr::Op::Var ? "-" + inner.var : "-(" + render(inner) + ")";
    }
  }
  return {};
}

std::string render(const TemporalConstraint& c) { return render_node(c.root, c.principal); }

std::string render(const WeightFunction& w) {
  switch (w.kind) {
    case WeightFunction::Kind::Sharp: return "#";
    case WeightFunction::Kind::Uniform: return "uniform";
    case WeightFunction::Kind::List: {
      std::string s = "[";
      for (std::size_t i = 0; i < w.values.size(); ++i) {
        if (i) s += ", ";
        s += to_decimal_string(w.values[i]);
      }
      return s + "]";
    }
  }
  return {};
}

std::string render(const TPAnnotation& a) {
  return "<" + render(a.constraint) + ", " + render(a.lower) + ", " + render(a.upper) + ">";
}

std::string render(const TPClause& c) {
  std::string s = to_string(c.head) + " : " + render(c.head_annotation);
  for (std::size_t i = 0; i < c.body.size(); ++i) {
    s += i == 0 ? "\n    :- " : "\n    and ";
    s += render_formula(c.body[i].formula) + " : " + render(c.body[i].annotation);
  }
  return s + ".";
}

std::string render(const PTProgram& p) {
  std::ostringstream os;
  os << "calendar ";
  if (p.calendar.points.empty()) {
    os << "0..-1";
  } else {
    os << p.calendar.points.front() << ".." << p.calendar.points.back();
  }
  os << ".\n";
  if (!p.declared_constants.empty()) {
    os << "constants ";
    for (std::size_t i = 0; i < p.declared_constants.size(); ++i) os << (i ? ", " : "") << p.declared_constants[i];
    os << ".\n";
  }
  for (const auto& c : p.clauses) os << render(c) << '\n';
  return os.str();
}

}  // namespace tplp
