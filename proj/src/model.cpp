#include "chorsem/model.hpp"

#include <algorithm>
#include <sstream>

namespace chorsem {

// ---------------------------------------------------------------------------
// Expr

struct Expr::Node {
  Kind kind = Kind::Literal;
  Value value = 0;
  std::string name;
  Expr lhs, rhs;
  SourcePos pos;
  // Children of leaves hold null nodes and are never accessed.
  explicit Node(bool) : lhs(nullptr), rhs(nullptr) {}
};

Expr::Expr() {
  static const Expr zero = literal(0);
  node_ = zero.node_;
}

Expr Expr::literal(Value v, SourcePos pos) {
  auto n = std::make_shared<Node>(true);
  n->kind = Kind::Literal;
  n->value = v;
  n->pos = pos;
  return Expr(std::move(n));
}

Expr Expr::variable(std::string name, SourcePos pos) {
  auto n = std::make_shared<Node>(true);
  n->kind = Kind::Variable;
  n->name = std::move(name);
  n->pos = pos;
  return Expr(std::move(n));
}

Expr Expr::binary(Kind op, Expr lhs, Expr rhs, SourcePos pos) {
  auto n = std::make_shared<Node>(true);
  n->kind = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->pos = pos;
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
Value Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const Expr& Expr::lhs() const { return node_->lhs; }
const Expr& Expr::rhs() const { return node_->rhs; }
SourcePos Expr::pos() const { return node_->pos; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::Literal:
      return a.value() == b.value();
    case Expr::Kind::Variable:
      return a.name() == b.name();
    default:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

// ---------------------------------------------------------------------------
// Cond

struct Cond::Node {
  Kind kind = Kind::True;
  CmpOp cmp = CmpOp::Eq;
  Expr lhs, rhs;
  Cond left{nullptr}, right{nullptr};
  SourcePos pos;
  explicit Node(bool) {}
};

Cond::Cond() {
  static const Cond yes = constant(true);
  node_ = yes.node_;
}

Cond Cond::constant(bool b, SourcePos pos) {
  auto n = std::make_shared<Node>(true);
  n->kind = b ? Kind::True : Kind::False;
  n->pos = pos;
  return Cond(std::move(n));
}

Cond Cond::compare(CmpOp op, Expr lhs, Expr rhs, SourcePos pos) {
  auto n = std::make_shared<Node>(true);
  n->kind = Kind::Compare;
  n->cmp = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->pos = pos;
  return Cond(std::move(n));
}

Cond Cond::conj(Cond a, Cond b, SourcePos pos) {
  auto n = std::make_shared<Node>(true);
  n->kind = Kind::And;
  n->left = std::move(a);
  n->right = std::move(b);
  n->pos = pos;
  return Cond(std::move(n));
}

Cond Cond::disj(Cond a, Cond b, SourcePos pos) {
  auto n = std::make_shared<Node>(true);
  n->kind = Kind::Or;
  n->left = std::move(a);
  n->right = std::move(b);
  n->pos = pos;
  return Cond(std::move(n));
}

Cond Cond::negate(Cond a, SourcePos pos) {
  auto n = std::make_shared<Node>(true);
  n->kind = Kind::Not;
  n->left = std::move(a);
  n->pos = pos;
  return Cond(std::move(n));
}

Cond::Kind Cond::kind() const { return node_->kind; }
CmpOp Cond::cmp() const { return node_->cmp; }
const Expr& Cond::lhs() const { return node_->lhs; }
const Expr& Cond::rhs() const { return node_->rhs; }
const Cond& Cond::left() const { return node_->left; }
const Cond& Cond::right() const { return node_->right; }
SourcePos Cond::pos() const { return node_->pos; }

bool operator==(const Cond& a, const Cond& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Cond::Kind::True:
    case Cond::Kind::False:
      return true;
    case Cond::Kind::Compare:
      return a.cmp() == b.cmp() && a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case Cond::Kind::Not:
      return a.left() == b.left();
    default:
      return a.left() == b.left() && a.right() == b.right();
  }
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

template <typename Lookup>
Value eval_with(const Expr& e, const Lookup& lookup) {
  Value out = 0;
  switch (e.kind()) {
    case Expr::Kind::Literal:
      return e.value();
    case Expr::Kind::Variable:
      return lookup(e.name());
    case Expr::Kind::Add:
      if (__builtin_add_overflow(eval_with(e.lhs(), lookup),
                                 eval_with(e.rhs(), lookup), &out))
        throw ArithmeticOverflow();
      return out;
    case Expr::Kind::Sub:
      if (__builtin_sub_overflow(eval_with(e.lhs(), lookup),
                                 eval_with(e.rhs(), lookup), &out))
        throw ArithmeticOverflow();
      return out;
    case Expr::Kind::Mul:
      if (__builtin_mul_overflow(eval_with(e.lhs(), lookup),
                                 eval_with(e.rhs(), lookup), &out))
        throw ArithmeticOverflow();
      return out;
  }
  return out;
}

bool compare(CmpOp op, Value a, Value b) {
  switch (op) {
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Ge: return a >= b;
    case CmpOp::Gt: return a > b;
  }
  return false;
}

template <typename Lookup>
bool eval_cond_with(const Cond& c, const Lookup& lookup) {
  switch (c.kind()) {
    case Cond::Kind::True: return true;
    case Cond::Kind::False: return false;
    case Cond::Kind::Compare:
      return compare(c.cmp(), eval_with(c.lhs(), lookup),
                     eval_with(c.rhs(), lookup));
    case Cond::Kind::And:
      return eval_cond_with(c.left(), lookup) &&
             eval_cond_with(c.right(), lookup);
    case Cond::Kind::Or:
      return eval_cond_with(c.left(), lookup) ||
             eval_cond_with(c.right(), lookup);
    case Cond::Kind::Not:
      return !eval_cond_with(c.left(), lookup);
  }
  return false;
}

struct StoreLookup {
  const VarStore& sigma;
  Value operator()(const std::string& name) const {
    auto it = sigma.find(name);
    if (it == sigma.end()) throw UndeclaredVariable(name);
    return it->second;
  }
};

}  // namespace

Value eval_expr(const Expr& e, const VarStore& sigma) {
  return eval_with(e, StoreLookup{sigma});
}

bool eval_cond(const Cond& c, const VarStore& sigma) {
  return eval_cond_with(c, StoreLookup{sigma});
}

bool eval_resource_cond(const Cond& rc, Value value) {
  return eval_cond_with(rc, [&](const std::string& name) -> Value {
    if (name != kResourceSymbol) throw UndeclaredVariable(name);
    return value;
  });
}

void collect_vars(const Expr& e, std::vector<std::string>& out) {
  switch (e.kind()) {
    case Expr::Kind::Literal:
      return;
    case Expr::Kind::Variable:
      if (std::find(out.begin(), out.end(), e.name()) == out.end())
        out.push_back(e.name());
      return;
    default:
      collect_vars(e.lhs(), out);
      collect_vars(e.rhs(), out);
  }
}

void collect_vars(const Cond& c, std::vector<std::string>& out) {
  switch (c.kind()) {
    case Cond::Kind::True:
    case Cond::Kind::False:
      return;
    case Cond::Kind::Compare:
      collect_vars(c.lhs(), out);
      collect_vars(c.rhs(), out);
      return;
    case Cond::Kind::Not:
      collect_vars(c.left(), out);
      return;
    default:
      collect_vars(c.left(), out);
      collect_vars(c.right(), out);
  }
}

VarStore apply_op(const OpDef& op, const std::vector<Value>& args,
                  const VarStore& sigma) {
  if (args.size() != op.params.size())
    throw ModelError("operation '" + op.name + "' expects " +
                     std::to_string(op.params.size()) + " argument(s), got " +
                     std::to_string(args.size()));
  VarStore out = sigma;
  auto lookup = [&](const std::string& name) -> Value {
    for (std::size_t i = 0; i < op.params.size(); ++i)
      if (op.params[i] == name) return args[i];
    auto it = out.find(name);
    if (it == out.end()) throw UndeclaredVariable(name);
    return it->second;
  };
  for (const auto& step : op.body) {
    if (!eval_cond_with(step.guard, lookup)) continue;
    Value v = eval_with(step.rhs, lookup);
    auto it = out.find(step.target);
    if (it == out.end()) throw UndeclaredVariable(step.target);
    it->second = v;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Activity

struct Activity::Node {
  ActivityKind kind = ActivityKind::Empty;
  std::string pl, op, var, epr, orch;
  Expr expr;
  Cond cond;
  Value timeout = 0;
  Value number = 0;
  Activity first, second;
  std::vector<PickBranch> branches;
  SourcePos pos;
  explicit Node(ActivityKind k) : kind(k), first(nullptr), second(nullptr) {}
};

namespace {
const std::shared_ptr<const Activity::Node>& empty_node() {
  static const auto node = std::make_shared<const Activity::Node>(ActivityKind::Empty);
  return node;
}
}  // namespace

Activity::Activity() : node_(empty_node()) {}

#define CHORSEM_NEW_NODE(k)                       \
  auto n = std::make_shared<Node>(ActivityKind::k); \
  n->pos = pos

Activity Activity::empty(SourcePos pos) {
  if (pos.line == 0) return Activity();
  CHORSEM_NEW_NODE(Empty);
  return Activity(std::move(n));
}

Activity Activity::throw_(SourcePos pos) {
  CHORSEM_NEW_NODE(Throw);
  return Activity(std::move(n));
}

Activity Activity::exit(SourcePos pos) {
  CHORSEM_NEW_NODE(Exit);
  return Activity(std::move(n));
}

Activity Activity::receive(std::string pl, std::string op, std::string var,
                           SourcePos pos) {
  CHORSEM_NEW_NODE(Receive);
  n->pl = std::move(pl);
  n->op = std::move(op);
  n->var = std::move(var);
  return Activity(std::move(n));
}

Activity Activity::invoke(std::string pl, std::string op, std::string var,
                          SourcePos pos) {
  CHORSEM_NEW_NODE(Invoke);
  n->pl = std::move(pl);
  n->op = std::move(op);
  n->var = std::move(var);
  return Activity(std::move(n));
}

Activity Activity::reply(std::string pl, std::string var, SourcePos pos) {
  CHORSEM_NEW_NODE(Reply);
  n->pl = std::move(pl);
  n->var = std::move(var);
  return Activity(std::move(n));
}

Activity Activity::reply_bar(std::string pl, std::string var, SourcePos pos) {
  CHORSEM_NEW_NODE(ReplyBar);
  n->pl = std::move(pl);
  n->var = std::move(var);
  return Activity(std::move(n));
}

Activity Activity::assign(Expr e, std::string var, SourcePos pos) {
  CHORSEM_NEW_NODE(Assign);
  n->expr = std::move(e);
  n->var = std::move(var);
  return Activity(std::move(n));
}

Activity Activity::wait(Value t, SourcePos pos) {
  CHORSEM_NEW_NODE(Wait);
  n->timeout = t;
  return Activity(std::move(n));
}

Activity Activity::seq(Activity a, Activity b, SourcePos pos) {
  CHORSEM_NEW_NODE(Seq);
  n->first = std::move(a);
  n->second = std::move(b);
  return Activity(std::move(n));
}

Activity Activity::par(Activity a, Activity b, SourcePos pos) {
  CHORSEM_NEW_NODE(Par);
  n->first = std::move(a);
  n->second = std::move(b);
  return Activity(std::move(n));
}

Activity Activity::while_(Cond c, Activity body, SourcePos pos) {
  CHORSEM_NEW_NODE(While);
  n->cond = std::move(c);
  n->first = std::move(body);
  return Activity(std::move(n));
}

Activity Activity::pick(std::vector<PickBranch> branches, Activity alarm,
                        Value t, SourcePos pos) {
  CHORSEM_NEW_NODE(Pick);
  n->branches = std::move(branches);
  n->first = std::move(alarm);
  n->timeout = t;
  return Activity(std::move(n));
}

Activity Activity::create_resource(std::string epr, Value val, Value t,
                                   Activity handler, SourcePos pos) {
  CHORSEM_NEW_NODE(CreateResource);
  n->epr = std::move(epr);
  n->number = val;
  n->timeout = t;
  n->first = std::move(handler);
  return Activity(std::move(n));
}

Activity Activity::get_prop(std::string epr, std::string var, SourcePos pos) {
  CHORSEM_NEW_NODE(GetProp);
  n->epr = std::move(epr);
  n->var = std::move(var);
  return Activity(std::move(n));
}

Activity Activity::set_prop(std::string epr, Expr val, SourcePos pos) {
  CHORSEM_NEW_NODE(SetProp);
  n->epr = std::move(epr);
  n->expr = std::move(val);
  return Activity(std::move(n));
}

Activity Activity::set_timeout(std::string epr, Value t, SourcePos pos) {
  CHORSEM_NEW_NODE(SetTimeout);
  n->epr = std::move(epr);
  n->timeout = t;
  return Activity(std::move(n));
}

Activity Activity::subscribe(std::string orch, std::string epr, Cond rcond,
                             Activity handler, SourcePos pos) {
  CHORSEM_NEW_NODE(Subscribe);
  n->orch = std::move(orch);
  n->epr = std::move(epr);
  n->cond = std::move(rcond);
  n->first = std::move(handler);
  return Activity(std::move(n));
}

#undef CHORSEM_NEW_NODE

Activity Activity::seq_of(const std::vector<Activity>& items) {
  if (items.empty()) return Activity();
  Activity acc = items.back();
  for (auto it = items.rbegin() + 1; it != items.rend(); ++it)
    acc = seq(*it, acc);
  return acc;
}

Activity Activity::par_of(const std::vector<Activity>& items) {
  if (items.empty()) return Activity();
  Activity acc = items.back();
  for (auto it = items.rbegin() + 1; it != items.rend(); ++it)
    acc = par(*it, acc);
  return acc;
}

ActivityKind Activity::kind() const { return node_->kind; }
const std::string& Activity::pl() const { return node_->pl; }
const std::string& Activity::op() const { return node_->op; }
const std::string& Activity::var() const { return node_->var; }
const std::string& Activity::epr() const { return node_->epr; }
const std::string& Activity::orch() const { return node_->orch; }
const Expr& Activity::expr() const { return node_->expr; }
const Cond& Activity::cond() const { return node_->cond; }
Value Activity::timeout() const { return node_->timeout; }
Value Activity::number() const { return node_->number; }
const Activity& Activity::first() const { return node_->first; }
const Activity& Activity::second() const { return node_->second; }
const std::vector<PickBranch>& Activity::branches() const {
  return node_->branches;
}
SourcePos Activity::pos() const { return node_->pos; }

Activity Activity::with_timeout(Value t) const {
  auto n = std::make_shared<Node>(*node_);
  n->timeout = t;
  return Activity(std::move(n));
}

bool operator==(const Activity& a, const Activity& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case ActivityKind::Empty:
    case ActivityKind::Throw:
    case ActivityKind::Exit:
      return true;
    case ActivityKind::Receive:
    case ActivityKind::Invoke:
      return x.pl == y.pl && x.op == y.op && x.var == y.var;
    case ActivityKind::Reply:
    case ActivityKind::ReplyBar:
      return x.pl == y.pl && x.var == y.var;
    case ActivityKind::Assign:
      return x.var == y.var && x.expr == y.expr;
    case ActivityKind::Wait:
      return x.timeout == y.timeout;
    case ActivityKind::Seq:
    case ActivityKind::Par:
      return x.first == y.first && x.second == y.second;
    case ActivityKind::While:
      return x.cond == y.cond && x.first == y.first;
    case ActivityKind::Pick:
      return x.timeout == y.timeout && x.branches == y.branches &&
             x.first == y.first;
    case ActivityKind::CreateResource:
      return x.epr == y.epr && x.number == y.number &&
             x.timeout == y.timeout && x.first == y.first;
    case ActivityKind::GetProp:
      return x.epr == y.epr && x.var == y.var;
    case ActivityKind::SetProp:
      return x.epr == y.epr && x.expr == y.expr;
    case ActivityKind::SetTimeout:
      return x.epr == y.epr && x.timeout == y.timeout;
    case ActivityKind::Subscribe:
      return x.orch == y.orch && x.epr == y.epr && x.cond == y.cond &&
             x.first == y.first;
  }
  return false;
}

const char* to_string(ActivityKind k) {
  switch (k) {
    case ActivityKind::Throw: return "throw";
    case ActivityKind::Receive: return "receive";
    case ActivityKind::Invoke: return "invoke";
    case ActivityKind::Reply: return "reply";
    case ActivityKind::ReplyBar: return "replybar";
    case ActivityKind::Assign: return "assign";
    case ActivityKind::Wait: return "wait";
    case ActivityKind::Empty: return "empty";
    case ActivityKind::Exit: return "exit";
    case ActivityKind::Seq: return "seq";
    case ActivityKind::Par: return "par";
    case ActivityKind::While: return "while";
    case ActivityKind::Pick: return "pick";
    case ActivityKind::CreateResource: return "createResource";
    case ActivityKind::GetProp: return "getProp";
    case ActivityKind::SetProp: return "setProp";
    case ActivityKind::SetTimeout: return "setTimeout";
    case ActivityKind::Subscribe: return "subscribe";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Formatting

const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

namespace {

int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Mul:
      return 2;
    default:
      return 3;
  }
}

void write_expr(std::string& out, const Expr& e, int min_prec) {
  switch (e.kind()) {
    case Expr::Kind::Literal:
      out += std::to_string(e.value());
      return;
    case Expr::Kind::Variable:
      out += e.name();
      return;
    default:
      break;
  }
  int p = precedence(e.kind());
  bool parens = p < min_prec;
  if (parens) out += '(';
  write_expr(out, e.lhs(), p);
  out += e.kind() == Expr::Kind::Add ? " + "
         : e.kind() == Expr::Kind::Sub ? " - "
                                       : " * ";
  write_expr(out, e.rhs(), p + 1);
  if (parens) out += ')';
}

int precedence(Cond::Kind k) {
  switch (k) {
    case Cond::Kind::Or: return 1;
    case Cond::Kind::And: return 2;
    default: return 3;
  }
}

void write_cond(std::string& out, const Cond& c, int min_prec) {
  switch (c.kind()) {
    case Cond::Kind::True:
      out += "true";
      return;
    case Cond::Kind::False:
      out += "false";
      return;
    case Cond::Kind::Compare:
      write_expr(out, c.lhs(), 0);
      out += ' ';
      out += to_string(c.cmp());
      out += ' ';
      write_expr(out, c.rhs(), 0);
      return;
    case Cond::Kind::Not:
      out += '!';
      if (c.left().kind() == Cond::Kind::True ||
          c.left().kind() == Cond::Kind::False ||
          c.left().kind() == Cond::Kind::Not) {
        write_cond(out, c.left(), 3);
      } else {
        out += '(';
        write_cond(out, c.left(), 0);
        out += ')';
      }
      return;
    default:
      break;
  }
  int p = precedence(c.kind());
  bool parens = p < min_prec;
  if (parens) out += '(';
  write_cond(out, c.left(), p);
  out += c.kind() == Cond::Kind::And ? " && " : " || ";
  write_cond(out, c.right(), p + 1);
  if (parens) out += ')';
}

void write_activity(std::string& out, const Activity& a);

void write_block(std::string& out, const Activity& a) {
  out += '{';
  write_activity(out, a);
  out += '}';
}

void write_activity(std::string& out, const Activity& a) {
  switch (a.kind()) {
    case ActivityKind::Empty: out += "empty"; return;
    case ActivityKind::Throw: out += "throw"; return;
    case ActivityKind::Exit: out += "exit"; return;
    case ActivityKind::Receive:
    case ActivityKind::Invoke:
      out += to_string(a.kind());
      out += '(' + a.pl() + ',' + a.op() + ',' + a.var() + ')';
      return;
    case ActivityKind::Reply:
    case ActivityKind::ReplyBar:
      out += to_string(a.kind());
      out += '(' + a.pl() + ',' + a.var() + ')';
      return;
    case ActivityKind::Assign:
      out += "assign(";
      write_expr(out, a.expr(), 0);
      out += ',' + a.var() + ')';
      return;
    case ActivityKind::Wait:
      out += "wait(" + std::to_string(a.timeout()) + ')';
      return;
    case ActivityKind::Seq: {
      const auto& l = a.first();
      const auto& r = a.second();
      bool lp = l.kind() == ActivityKind::Seq || l.kind() == ActivityKind::Par;
      bool rp = r.kind() == ActivityKind::Par;
      if (lp) out += '(';
      write_activity(out, l);
      if (lp) out += ')';
      out += "; ";
      if (rp) out += '(';
      write_activity(out, r);
      if (rp) out += ')';
      return;
    }
    case ActivityKind::Par: {
      const auto& l = a.first();
      bool lp = l.kind() == ActivityKind::Par;
      if (lp) out += '(';
      write_activity(out, l);
      if (lp) out += ')';
      out += " || ";
      write_activity(out, a.second());
      return;
    }
    case ActivityKind::While:
      out += "while(";
      write_cond(out, a.cond(), 0);
      out += ')';
      write_block(out, a.first());
      return;
    case ActivityKind::Pick:
      out += "pick{";
      for (const auto& b : a.branches()) {
        out += " on(" + b.pl + ',' + b.op + ',' + b.var + ')';
        write_block(out, b.body);
      }
      out += " alarm(" + std::to_string(a.timeout()) + ')';
      write_block(out, a.first());
      out += " }";
      return;
    case ActivityKind::CreateResource:
      out += "createResource(" + a.epr() + ',' + std::to_string(a.number()) +
             ',' + std::to_string(a.timeout()) + ')';
      write_block(out, a.first());
      return;
    case ActivityKind::GetProp:
      out += "getProp(" + a.epr() + ',' + a.var() + ')';
      return;
    case ActivityKind::SetProp:
      out += "setProp(" + a.epr() + ',';
      write_expr(out, a.expr(), 0);
      out += ')';
      return;
    case ActivityKind::SetTimeout:
      out += "setTimeout(" + a.epr() + ',' + std::to_string(a.timeout()) + ')';
      return;
    case ActivityKind::Subscribe:
      out += "subscribe(" + a.orch() + ',' + a.epr() + ',';
      write_cond(out, a.cond(), 0);
      out += ')';
      write_block(out, a.first());
      return;
  }
}

}  // namespace

std::string format(const Expr& e) {
  std::string out;
  write_expr(out, e, 0);
  return out;
}

std::string format(const Cond& c) {
  std::string out;
  write_cond(out, c, 0);
  return out;
}

std::string format(const Activity& a) {
  std::string out;
  write_activity(out, a);
  return out;
}

// ---------------------------------------------------------------------------
// Resource store

namespace {
Resource& find_resource(ResourceStore& rho, const std::string& epr) {
  auto it = rho.find(epr);
  if (it == rho.end()) throw UnknownResource(epr);
  return it->second;
}
}  // namespace

ResourceStore resource_set_value(const ResourceStore& rho,
                                 const std::string& epr, Value w) {
  ResourceStore out = rho;
  find_resource(out, epr).value = w;
  return out;
}

ResourceStore resource_set_lifetime(const ResourceStore& rho,
                                    const std::string& epr, Value t) {
  ResourceStore out = rho;
  auto& r = find_resource(out, epr);
  if (t < 1) throw NonPositiveLifetime();
  r.lifetime = t;
  return out;
}

ResourceStore resource_add_subscription(const ResourceStore& rho,
                                        const std::string& epr,
                                        const std::string& orch,
                                        const Cond& rcond,
                                        const Activity& handler) {
  ResourceStore out = rho;
  auto& subs = find_resource(out, epr).subs;
  auto it = std::lower_bound(
      subs.begin(), subs.end(), orch,
      [](const Subscription& s, const std::string& o) { return s.subscriber < o; });
  if (it != subs.end() && it->subscriber == orch) {
    it->condition = rcond;
    it->handler = handler;
  } else {
    subs.insert(it, Subscription{orch, rcond, handler});
  }
  return out;
}

ResourceStore resource_tick(const ResourceStore& rho) {
  ResourceStore out;
  for (const auto& [epr, r] : rho) {
    if (r.lifetime <= 1) continue;
    Resource copy = r;
    --copy.lifetime;
    out.emplace_hint(out.end(), epr, std::move(copy));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Handler sets

HandlerOrigin HandlerOrigin::declared(int index) {
  HandlerOrigin o;
  o.kind = Kind::Declared;
  o.index = index;
  return o;
}

HandlerOrigin HandlerOrigin::expiry(std::string epr) {
  HandlerOrigin o;
  o.kind = Kind::Expiry;
  o.epr = std::move(epr);
  return o;
}

HandlerOrigin HandlerOrigin::subscription(std::string epr,
                                          std::string subscriber) {
  HandlerOrigin o;
  o.kind = Kind::Subscription;
  o.epr = std::move(epr);
  o.subscriber = std::move(subscriber);
  return o;
}

std::string HandlerOrigin::to_string() const {
  switch (kind) {
    case Kind::Declared: return "declared:" + std::to_string(index);
    case Kind::Expiry: return "expiry:" + epr;
    case Kind::Subscription: return "subscription:" + epr + ":" + subscriber;
  }
  return "?";
}

std::vector<HandlerInstance> notif_set(const std::string& orch,
                                       const ResourceStore& rho) {
  std::vector<HandlerInstance> out;
  for (const auto& [epr, r] : rho) {
    for (const auto& s : r.subs) {
      if (s.subscriber != orch) continue;
      if (!eval_resource_cond(s.condition, r.value)) continue;
      if (s.handler.is_empty()) continue;
      out.push_back({HandlerOrigin::subscription(epr, orch), s.handler});
    }
  }
  return out;
}

std::vector<HandlerInstance> expiry_set(const std::string& orch,
                                        const ResourceStore& rho,
                                        ExpiryTarget target) {
  std::vector<HandlerInstance> out;
  for (const auto& [epr, r] : rho) {
    if (r.lifetime != 1 || r.expiry_handler.is_empty()) continue;
    bool to_creator = target != ExpiryTarget::Subscribers && r.creator == orch;
    bool to_subscriber =
        target != ExpiryTarget::Creator &&
        std::any_of(r.subs.begin(), r.subs.end(),
                    [&](const Subscription& s) { return s.subscriber == orch; });
    if (to_creator || to_subscriber)
      out.push_back({HandlerOrigin::expiry(epr), r.expiry_handler});
  }
  return out;
}

const char* to_string(ExpiryTarget t) {
  switch (t) {
    case ExpiryTarget::Creator: return "creator";
    case ExpiryTarget::Subscribers: return "subscribers";
    case ExpiryTarget::Both: return "both";
  }
  return "?";
}

std::optional<ExpiryTarget> parse_expiry_target(const std::string& s) {
  if (s == "creator") return ExpiryTarget::Creator;
  if (s == "subscribers") return ExpiryTarget::Subscribers;
  if (s == "both") return ExpiryTarget::Both;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Canonical key

namespace {
void put(std::string& out, const std::string& field) {
  out += std::to_string(field.size());
  out += ':';
  out += field;
}
void put(std::string& out, Value v) { put(out, std::to_string(v)); }
}  // namespace

std::string canonical_key(const ChorState& cs) {
  std::string out;
  out.reserve(256);
  for (const auto& l : cs.locals) {
    out += 'L';
    put(out, l.orch);
    put(out, format(l.activity));
    std::vector<std::pair<std::string, std::string>> pool;
    pool.reserve(l.pool.size());
    for (const auto& h : l.pool)
      pool.emplace_back(h.origin.to_string(), format(h.remaining));
    std::sort(pool.begin(), pool.end());
    put(out, static_cast<Value>(pool.size()));
    for (const auto& [origin, act] : pool) {
      put(out, origin);
      put(out, act);
    }
    put(out, static_cast<Value>(l.sigma.size()));
    for (const auto& [name, v] : l.sigma) {
      put(out, name);
      put(out, v);
    }
  }
  out += 'R';
  for (const auto& [epr, r] : cs.rho) {
    put(out, epr);
    put(out, r.value);
    put(out, r.lifetime);
    put(out, r.creator);
    put(out, format(r.expiry_handler));
    put(out, static_cast<Value>(r.subs.size()));
    for (const auto& s : r.subs) {
      put(out, s.subscriber);
      put(out, format(s.condition));
      put(out, format(s.handler));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Labels

const char* to_string(LabelKind k) {
  switch (k) {
    case LabelKind::Delay: return "delay";
    case LabelKind::Tau: return "tau";
    case LabelKind::Throw: return "throw";
    case LabelKind::Exit: return "exit";
    case LabelKind::Receive: return "receive";
    case LabelKind::Reply: return "reply";
    case LabelKind::Invoke: return "invoke";
    case LabelKind::ReplyBar: return "replybar";
    case LabelKind::Assign: return "assign";
    case LabelKind::Pick: return "pick";
    case LabelKind::CreateResource: return "createResource";
    case LabelKind::SetProp: return "setProp";
    case LabelKind::GetProp: return "getProp";
    case LabelKind::SetTimeout: return "setTimeout";
    case LabelKind::Subscribe: return "subscribe";
  }
  return "?";
}

TransitionLabel TransitionLabel::delay() {
  TransitionLabel l;
  l.kind = LabelKind::Delay;
  l.text = "delay";
  return l;
}

TransitionLabel TransitionLabel::tau() {
  TransitionLabel l;
  l.kind = LabelKind::Tau;
  l.text = "tau";
  return l;
}

}  // namespace chorsem
