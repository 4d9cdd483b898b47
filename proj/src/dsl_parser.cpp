#include <charconv>
#include <set>

#include "chorsem/dsl.hpp"
#include "dsl_lexer.hpp"

namespace chorsem {

using dsl::Tok;
using dsl::Token;

namespace {

const std::set<std::string> kActivityWords = {
    "empty",   "throw",          "exit",    "receive", "invoke",
    "reply",   "replybar",       "assign",  "wait",    "while",
    "pick",    "createResource", "getProp", "setProp", "setTimeout",
    "subscribe"};

// Replaces variables named `from` by the resource symbol.
Expr rename_var(const Expr& e, const std::string& from) {
  switch (e.kind()) {
    case Expr::Kind::Literal:
      return e;
    case Expr::Kind::Variable:
      return e.name() == from ? Expr::variable(kResourceSymbol, e.pos()) : e;
    default:
      return Expr::binary(e.kind(), rename_var(e.lhs(), from),
                          rename_var(e.rhs(), from), e.pos());
  }
}

Cond rename_var(const Cond& c, const std::string& from) {
  switch (c.kind()) {
    case Cond::Kind::True:
    case Cond::Kind::False:
      return c;
    case Cond::Kind::Compare:
      return Cond::compare(c.cmp(), rename_var(c.lhs(), from),
                           rename_var(c.rhs(), from), c.pos());
    case Cond::Kind::And:
      return Cond::conj(rename_var(c.left(), from), rename_var(c.right(), from),
                        c.pos());
    case Cond::Kind::Or:
      return Cond::disj(rename_var(c.left(), from), rename_var(c.right(), from),
                        c.pos());
    case Cond::Kind::Not:
      return Cond::negate(rename_var(c.left(), from), c.pos());
  }
  return c;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ChoreographyDef model() {
    ChoreographyDef def;
    expect_word("choreography");
    def.name = ident();
    expect(Tok::LBrace);
    std::set<std::string> ops, pls, orchs;
    bool config_seen = false;
    while (!at(Tok::RBrace)) {
      const Token& t = cur();
      if (is_word("op")) {
        OpDef op = op_def();
        if (!ops.insert(op.name).second)
          throw ParseError("duplicate operation '" + op.name + "'", t.pos);
        def.op_list.push_back(std::move(op));
      } else if (is_word("partnerlink")) {
        PartnerLink pl = partnerlink();
        if (!pls.insert(pl.name).second)
          throw ParseError("duplicate partnerlink '" + pl.name + "'", t.pos);
        def.partnerlinks.push_back(std::move(pl));
      } else if (is_word("orchestrator")) {
        OrchestratorDef o = orchestrator();
        if (!orchs.insert(o.id).second)
          throw ParseError("duplicate orchestrator '" + o.id + "'", t.pos);
        def.orchestrators.push_back(std::move(o));
      } else if (is_word("config")) {
        if (config_seen) throw ParseError("duplicate config block", t.pos);
        config_seen = true;
        def.config = config();
      } else {
        fail("expected 'op', 'partnerlink', 'orchestrator' or 'config'");
      }
    }
    expect(Tok::RBrace);
    expect(Tok::End);
    def.index_ops();
    return def;
  }

  Activity activity_only() {
    Activity a = par();
    expect(Tok::End);
    return a;
  }
  Expr expr_only() {
    Expr e = expr();
    expect(Tok::End);
    return e;
  }
  Cond cond_only() {
    Cond c = cond();
    expect(Tok::End);
    return c;
  }
  OpDef op_only() {
    OpDef op = op_def();
    expect(Tok::End);
    return op;
  }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;

  const Token& cur() const { return toks_[i_]; }
  const Token& next() const {
    return toks_[std::min(i_ + 1, toks_.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool is_word(const char* w) const {
    return cur().kind == Tok::Ident && cur().text == w;
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::string found = cur().kind == Tok::End
                            ? "end of input"
                            : "'" + cur().text + "'";
    throw ParseError(what + ", found " + found, cur().pos);
  }

  Token expect(Tok k) {
    if (!at(k)) fail(std::string("expected ") + dsl::describe(k));
    return toks_[i_++];
  }
  void expect_word(const char* w) {
    if (!is_word(w)) fail(std::string("expected '") + w + "'");
    ++i_;
  }
  std::string ident() { return expect(Tok::Ident).text; }

  Value integer(bool allow_negative) {
    SourcePos pos = cur().pos;
    std::string digits;
    if (allow_negative && at(Tok::Minus)) {
      ++i_;
      digits = "-";
    }
    digits += expect(Tok::Int).text;
    Value v = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || p != digits.data() + digits.size())
      throw ParseError("integer out of range", pos);
    return v;
  }

  // -- declarations ---------------------------------------------------------

  OpDef op_def() {
    OpDef op;
    op.pos = cur().pos;
    expect_word("op");
    op.name = ident();
    expect(Tok::LParen);
    if (!at(Tok::RParen)) {
      op.params.push_back(ident());
      while (at(Tok::Comma)) {
        ++i_;
        op.params.push_back(ident());
      }
    }
    expect(Tok::RParen);
    expect(Tok::LBrace);
    while (!at(Tok::RBrace)) {
      GuardedAssign g;
      expect_word("if");
      g.guard = cond();
      expect_word("then");
      g.target = ident();
      expect(Tok::ColonEq);
      g.rhs = expr();
      expect(Tok::Semi);
      op.body.push_back(std::move(g));
    }
    expect(Tok::RBrace);
    return op;
  }

  PartnerLink partnerlink() {
    PartnerLink pl;
    pl.pos = cur().pos;
    expect_word("partnerlink");
    pl.name = ident();
    expect(Tok::Assign);
    expect(Tok::LParen);
    pl.sender = ident();
    expect(Tok::Arrow);
    pl.receiver = ident();
    expect(Tok::RParen);
    expect(Tok::Semi);
    return pl;
  }

  OrchestratorDef orchestrator() {
    OrchestratorDef o;
    o.pos = cur().pos;
    expect_word("orchestrator");
    o.id = ident();
    expect(Tok::LBrace);
    bool has_main = false, has_fault = false;
    std::set<std::string> vars;
    while (!at(Tok::RBrace)) {
      const Token& t = cur();
      if (is_word("vars")) {
        ++i_;
        if (!at(Tok::Semi)) {
          do {
            if (at(Tok::Comma)) ++i_;
            const Token& vt = cur();
            std::string name = ident();
            expect(Tok::Assign);
            Value v = integer(true);
            if (!vars.insert(name).second)
              throw ParseError("duplicate variable '" + name + "'", vt.pos);
            o.vars.emplace_back(name, v);
          } while (at(Tok::Comma));
        }
        expect(Tok::Semi);
      } else if (is_word("fault")) {
        if (has_fault) throw ParseError("duplicate fault handler", t.pos);
        has_fault = true;
        ++i_;
        o.fault_handler = par();
        expect(Tok::Semi);
      } else if (is_word("handler")) {
        ++i_;
        DeclaredHandler h;
        if (is_word("at-start")) {
          ++i_;
          h.at_start = true;
        }
        h.activity = par();
        expect(Tok::Semi);
        o.handlers.push_back(std::move(h));
      } else if (is_word("main")) {
        if (has_main) throw ParseError("duplicate main activity", t.pos);
        has_main = true;
        ++i_;
        expect(Tok::Assign);
        o.main = par();
        expect(Tok::Semi);
      } else {
        fail("expected 'vars', 'fault', 'handler' or 'main'");
      }
    }
    if (!has_main)
      throw ParseError("orchestrator '" + o.id + "' has no main activity",
                       o.pos);
    expect(Tok::RBrace);
    return o;
  }

  ChorConfig config() {
    ChorConfig c;
    expect_word("config");
    expect(Tok::LBrace);
    while (!at(Tok::RBrace)) {
      if (is_word("expiry-target")) {
        ++i_;
        expect(Tok::Assign);
        const Token& t = cur();
        auto target = parse_expiry_target(ident());
        if (!target)
          throw ParseError("expected creator, subscribers or both", t.pos);
        c.expiry_target = *target;
      } else if (is_word("open-domain")) {
        ++i_;
        expect(Tok::Assign);
        expect(Tok::LBrace);
        c.open_domain.clear();
        if (!at(Tok::RBrace)) {
          c.open_domain.push_back(integer(true));
          while (at(Tok::Comma)) {
            ++i_;
            c.open_domain.push_back(integer(true));
          }
        }
        expect(Tok::RBrace);
      } else if (is_word("urgent-internal")) {
        ++i_;
        expect(Tok::Assign);
        if (is_word("true")) c.urgent_internal = true;
        else if (is_word("false")) c.urgent_internal = false;
        else fail("expected true or false");
        ++i_;
      } else {
        fail("expected 'expiry-target', 'open-domain' or 'urgent-internal'");
      }
      expect(Tok::Semi);
    }
    expect(Tok::RBrace);
    return c;
  }

  // -- activities -----------------------------------------------------------

  bool starts_activity(const Token& t) const {
    return t.kind == Tok::LParen ||
           (t.kind == Tok::Ident && kActivityWords.count(t.text));
  }

  Activity par() {
    SourcePos pos = cur().pos;
    Activity left = seq();
    if (at(Tok::OrOr)) {
      ++i_;
      return Activity::par(std::move(left), par(), pos);
    }
    return left;
  }

  Activity seq() {
    SourcePos pos = cur().pos;
    Activity left = primary();
    if (at(Tok::Semi) && starts_activity(next())) {
      ++i_;
      return Activity::seq(std::move(left), seq(), pos);
    }
    return left;
  }

  Activity block() {
    expect(Tok::LBrace);
    if (at(Tok::RBrace)) {
      SourcePos pos = cur().pos;
      ++i_;
      return Activity::empty(pos);
    }
    Activity a = par();
    expect(Tok::RBrace);
    return a;
  }

  Activity primary() {
    if (at(Tok::LParen)) {
      ++i_;
      Activity a = par();
      expect(Tok::RParen);
      return a;
    }
    if (!at(Tok::Ident) || !kActivityWords.count(cur().text))
      fail("expected an activity");
    SourcePos pos = cur().pos;
    std::string w = toks_[i_++].text;
    if (w == "empty") return Activity::empty(pos);
    if (w == "throw") return Activity::throw_(pos);
    if (w == "exit") return Activity::exit(pos);
    expect(w == "pick" ? Tok::LBrace : Tok::LParen);
    if (w == "receive" || w == "invoke") {
      std::string pl = ident();
      expect(Tok::Comma);
      std::string op = ident();
      expect(Tok::Comma);
      std::string var = ident();
      expect(Tok::RParen);
      return w == "receive" ? Activity::receive(pl, op, var, pos)
                            : Activity::invoke(pl, op, var, pos);
    }
    if (w == "reply" || w == "replybar") {
      std::string pl = ident();
      expect(Tok::Comma);
      std::string var = ident();
      expect(Tok::RParen);
      return w == "reply" ? Activity::reply(pl, var, pos)
                          : Activity::reply_bar(pl, var, pos);
    }
    if (w == "assign") {
      Expr e = expr();
      expect(Tok::Comma);
      std::string var = ident();
      expect(Tok::RParen);
      return Activity::assign(std::move(e), var, pos);
    }
    if (w == "wait") {
      Value t = integer(false);
      expect(Tok::RParen);
      return Activity::wait(t, pos);
    }
    if (w == "while") {
      Cond c = cond();
      expect(Tok::RParen);
      return Activity::while_(std::move(c), block(), pos);
    }
    if (w == "pick") {
      std::vector<PickBranch> branches;
      while (is_word("on")) {
        ++i_;
        expect(Tok::LParen);
        PickBranch b;
        b.pl = ident();
        expect(Tok::Comma);
        b.op = ident();
        expect(Tok::Comma);
        b.var = ident();
        expect(Tok::RParen);
        b.body = block();
        branches.push_back(std::move(b));
      }
      expect_word("alarm");
      expect(Tok::LParen);
      Value t = integer(false);
      expect(Tok::RParen);
      Activity alarm = block();
      expect(Tok::RBrace);
      return Activity::pick(std::move(branches), std::move(alarm), t, pos);
    }
    if (w == "createResource") {
      std::string epr = ident();
      expect(Tok::Comma);
      Value val = integer(true);
      expect(Tok::Comma);
      Value t = integer(false);
      expect(Tok::RParen);
      Activity h = at(Tok::LBrace) ? block() : Activity::empty(pos);
      return Activity::create_resource(epr, val, t, std::move(h), pos);
    }
    if (w == "getProp") {
      std::string epr = ident();
      expect(Tok::Comma);
      std::string var = ident();
      expect(Tok::RParen);
      return Activity::get_prop(epr, var, pos);
    }
    if (w == "setProp") {
      std::string epr = ident();
      expect(Tok::Comma);
      Expr e = expr();
      expect(Tok::RParen);
      return Activity::set_prop(epr, std::move(e), pos);
    }
    if (w == "setTimeout") {
      std::string epr = ident();
      expect(Tok::Comma);
      Value t = integer(false);
      expect(Tok::RParen);
      return Activity::set_timeout(epr, t, pos);
    }
    // subscribe
    std::string orch = ident();
    expect(Tok::Comma);
    std::string epr = ident();
    expect(Tok::Comma);
    Cond rc = rename_var(cond(), epr);
    expect(Tok::RParen);
    Activity h = at(Tok::LBrace) ? block() : Activity::empty(pos);
    return Activity::subscribe(orch, epr, std::move(rc), std::move(h), pos);
  }

  // -- expressions and conditions -------------------------------------------

  Expr expr() {
    SourcePos pos = cur().pos;
    Expr left = term();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      auto k = at(Tok::Plus) ? Expr::Kind::Add : Expr::Kind::Sub;
      ++i_;
      left = Expr::binary(k, std::move(left), term(), pos);
    }
    return left;
  }

  Expr term() {
    SourcePos pos = cur().pos;
    Expr left = factor();
    while (at(Tok::Star)) {
      ++i_;
      left = Expr::binary(Expr::Kind::Mul, std::move(left), factor(), pos);
    }
    return left;
  }

  Expr factor() {
    SourcePos pos = cur().pos;
    if (at(Tok::Int)) return Expr::literal(integer(false), pos);
    if (at(Tok::Minus)) {
      if (next().kind == Tok::Int) return Expr::literal(integer(true), pos);
      ++i_;
      return Expr::binary(Expr::Kind::Sub, Expr::literal(0, pos), factor(),
                          pos);
    }
    if (at(Tok::LParen)) {
      ++i_;
      Expr e = expr();
      expect(Tok::RParen);
      return e;
    }
    if (at(Tok::Ident)) return Expr::variable(toks_[i_++].text, pos);
    fail("expected an expression");
  }

  Cond cond() {
    SourcePos pos = cur().pos;
    Cond left = conj();
    while (at(Tok::OrOr)) {
      ++i_;
      left = Cond::disj(std::move(left), conj(), pos);
    }
    return left;
  }

  Cond conj() {
    SourcePos pos = cur().pos;
    Cond left = unary();
    while (at(Tok::AndAnd)) {
      ++i_;
      left = Cond::conj(std::move(left), unary(), pos);
    }
    return left;
  }

  std::optional<CmpOp> comparator() const {
    switch (cur().kind) {
      case Tok::Lt: return CmpOp::Lt;
      case Tok::Le: return CmpOp::Le;
      case Tok::Eq:
      case Tok::Assign: return CmpOp::Eq;
      case Tok::Ne: return CmpOp::Ne;
      case Tok::Ge: return CmpOp::Ge;
      case Tok::Gt: return CmpOp::Gt;
      default: return std::nullopt;
    }
  }

  Cond comparison() {
    SourcePos pos = cur().pos;
    Expr lhs = expr();
    auto op = comparator();
    if (!op) fail("expected a comparison operator");
    ++i_;
    return Cond::compare(*op, std::move(lhs), expr(), pos);
  }

  Cond unary() {
    SourcePos pos = cur().pos;
    if (at(Tok::Bang)) {
      ++i_;
      return Cond::negate(unary(), pos);
    }
    if (is_word("true") || is_word("false")) {
      bool b = cur().text == "true";
      ++i_;
      return Cond::constant(b, pos);
    }
    if (at(Tok::LParen)) {
      // Either a parenthesised expression starting a comparison, or a
      // parenthesised condition.
      std::size_t mark = i_;
      try {
        return comparison();
      } catch (const ParseError&) {
        i_ = mark;
      }
      ++i_;
      Cond c = cond();
      expect(Tok::RParen);
      return c;
    }
    return comparison();
  }
};

}  // namespace

ChoreographyDef parse_model(const std::string& text) {
  return Parser(dsl::tokenize(text)).model();
}

Activity parse_activity(const std::string& text) {
  return Parser(dsl::tokenize(text)).activity_only();
}

Expr parse_expr(const std::string& text) {
  return Parser(dsl::tokenize(text)).expr_only();
}

Cond parse_cond(const std::string& text) {
  return Parser(dsl::tokenize(text)).cond_only();
}

Cond parse_resource_cond(const std::string& text, const std::string& epr) {
  return rename_var(parse_cond(text), epr);
}

OpDef parse_op(const std::string& text) {
  return Parser(dsl::tokenize(text)).op_only();
}

SourceModel load_model_text(std::string text, std::string path) {
  SourceModel m;
  m.path = std::move(path);
  m.text = std::move(text);
  try {
    m.def = parse_model(m.text);
  } catch (const ParseError& e) {
    m.diagnostics.push_back({Severity::Error, e.message(), e.pos()});
    return m;
  }
  m.diagnostics = validate_model(*m.def);
  return m;
}

}  // namespace chorsem
