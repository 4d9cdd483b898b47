// Core terms of the orchestration algebra: expressions, conditions,
// activities, stores, resources and choreography states.
//
// Every type here is an immutable value. Recursive terms share their
// subterms through shared_ptr<const ...>, so copying a term is cheap and
// structural equality never depends on identity.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chorsem {

using Value = std::int64_t;

/// Position in a source file. Not part of structural equality.
struct SourcePos {
  int line = 0;
  int column = 0;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UndeclaredVariable : public ModelError {
 public:
  explicit UndeclaredVariable(const std::string& name)
      : ModelError("undeclared variable '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class UnknownResource : public ModelError {
 public:
  explicit UnknownResource(const std::string& epr)
      : ModelError("unknown resource '" + epr + "'") {}
};

class NonPositiveLifetime : public ModelError {
 public:
  NonPositiveLifetime() : ModelError("resource lifetime must be >= 1") {}
};

class ArithmeticOverflow : public ModelError {
 public:
  ArithmeticOverflow() : ModelError("integer overflow") {}
};

// ---------------------------------------------------------------------------
// Expressions and conditions

class Expr {
 public:
  enum class Kind { Literal, Variable, Add, Sub, Mul };

  Expr();  // literal 0
  static Expr literal(Value v, SourcePos pos = {});
  static Expr variable(std::string name, SourcePos pos = {});
  static Expr binary(Kind op, Expr lhs, Expr rhs, SourcePos pos = {});

  Kind kind() const;
  Value value() const;
  const std::string& name() const;
  const Expr& lhs() const;
  const Expr& rhs() const;
  SourcePos pos() const;

  friend bool operator==(const Expr& a, const Expr& b);

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

enum class CmpOp { Lt, Le, Eq, Ne, Ge, Gt };

/// Boolean predicate. Used both for local conditions (variables of one
/// orchestrator) and for resource conditions, where the only variable is
/// the distinguished symbol `EPR`.
class Cond {
 public:
  enum class Kind { True, False, Compare, And, Or, Not };

  Cond();  // true
  static Cond constant(bool b, SourcePos pos = {});
  static Cond compare(CmpOp op, Expr lhs, Expr rhs, SourcePos pos = {});
  static Cond conj(Cond a, Cond b, SourcePos pos = {});
  static Cond disj(Cond a, Cond b, SourcePos pos = {});
  static Cond negate(Cond a, SourcePos pos = {});

  Kind kind() const;
  CmpOp cmp() const;
  const Expr& lhs() const;
  const Expr& rhs() const;
  const Cond& left() const;
  const Cond& right() const;
  SourcePos pos() const;

  friend bool operator==(const Cond& a, const Cond& b);

  struct Node;

 private:
  explicit Cond(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// The symbol a resource condition uses for the resource's current value.
inline constexpr const char* kResourceSymbol = "EPR";

// ---------------------------------------------------------------------------
// Stores

using VarStore = std::map<std::string, Value>;

Value eval_expr(const Expr& e, const VarStore& sigma);
bool eval_cond(const Cond& c, const VarStore& sigma);
bool eval_resource_cond(const Cond& rc, Value value);

/// Variables read by an expression / condition, in first-occurrence order.
void collect_vars(const Expr& e, std::vector<std::string>& out);
void collect_vars(const Cond& c, std::vector<std::string>& out);

/// A guarded assignment inside an operation body.
struct GuardedAssign {
  Cond guard;
  std::string target;
  Expr rhs;
  friend bool operator==(const GuardedAssign&, const GuardedAssign&) = default;
};

/// Operation run by the receiving side of a message exchange.
struct OpDef {
  std::string name;
  std::vector<std::string> params;
  std::vector<GuardedAssign> body;
  SourcePos pos;
  friend bool operator==(const OpDef& a, const OpDef& b) {
    return a.name == b.name && a.params == b.params && a.body == b.body;
  }
};

/// Runs the op body on a copy of sigma. Parameters are a read-only overlay
/// bound positionally to args; assignments apply top to bottom.
VarStore apply_op(const OpDef& op, const std::vector<Value>& args,
                  const VarStore& sigma);

// ---------------------------------------------------------------------------
// Activities

enum class ActivityKind {
  Throw,
  Receive,
  Invoke,
  Reply,
  ReplyBar,
  Assign,
  Wait,
  Empty,
  Exit,
  Seq,
  Par,
  While,
  Pick,
  CreateResource,
  GetProp,
  SetProp,
  SetTimeout,
  Subscribe,
};

const char* to_string(ActivityKind k);

class Activity;

struct PickBranch;

class Activity {
 public:
  Activity();  // empty

  static Activity empty(SourcePos pos = {});
  static Activity throw_(SourcePos pos = {});
  static Activity exit(SourcePos pos = {});
  static Activity receive(std::string pl, std::string op, std::string var,
                          SourcePos pos = {});
  static Activity invoke(std::string pl, std::string op, std::string var,
                         SourcePos pos = {});
  static Activity reply(std::string pl, std::string var, SourcePos pos = {});
  static Activity reply_bar(std::string pl, std::string var,
                            SourcePos pos = {});
  static Activity assign(Expr e, std::string var, SourcePos pos = {});
  static Activity wait(Value t, SourcePos pos = {});
  static Activity seq(Activity a, Activity b, SourcePos pos = {});
  static Activity par(Activity a, Activity b, SourcePos pos = {});
  static Activity while_(Cond c, Activity body, SourcePos pos = {});
  static Activity pick(std::vector<PickBranch> branches, Activity alarm,
                       Value t, SourcePos pos = {});
  static Activity create_resource(std::string epr, Value val, Value t,
                                  Activity handler, SourcePos pos = {});
  static Activity get_prop(std::string epr, std::string var,
                           SourcePos pos = {});
  static Activity set_prop(std::string epr, Expr val, SourcePos pos = {});
  static Activity set_timeout(std::string epr, Value t, SourcePos pos = {});
  static Activity subscribe(std::string orch, std::string epr, Cond rcond,
                            Activity handler, SourcePos pos = {});

  /// Right-nested sequence of a list (`a; (b; c)`); empty list gives Empty.
  static Activity seq_of(const std::vector<Activity>& items);
  static Activity par_of(const std::vector<Activity>& items);

  ActivityKind kind() const;
  bool is_empty() const { return kind() == ActivityKind::Empty; }

  // Accessors; each is only meaningful for the kinds that carry the field.
  const std::string& pl() const;
  const std::string& op() const;
  const std::string& var() const;
  const std::string& epr() const;
  const std::string& orch() const;
  const Expr& expr() const;
  const Cond& cond() const;
  /// Timeout for Wait/Pick/CreateResource/SetTimeout.
  Value timeout() const;
  /// Initial value for CreateResource.
  Value number() const;
  /// Seq/Par left side, While body, Pick alarm, CR/Subscribe handler.
  const Activity& first() const;
  /// Seq/Par right side.
  const Activity& second() const;
  const std::vector<PickBranch>& branches() const;
  SourcePos pos() const;

  /// Same term with a different Wait/Pick timeout.
  Activity with_timeout(Value t) const;

  friend bool operator==(const Activity& a, const Activity& b);

  struct Node;

 private:
  explicit Activity(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct PickBranch {
  std::string pl;
  std::string op;
  std::string var;
  Activity body;
  friend bool operator==(const PickBranch&, const PickBranch&) = default;
};

// Textual forms, identical to the model language.
std::string format(const Expr& e);
std::string format(const Cond& c);
std::string format(const Activity& a);
const char* to_string(CmpOp op);

// ---------------------------------------------------------------------------
// Resources

struct Subscription {
  std::string subscriber;
  Cond condition;
  Activity handler;
  friend bool operator==(const Subscription&, const Subscription&) = default;
};

struct Resource {
  std::string epr;
  Value value = 0;
  /// Sorted by subscriber; at most one entry per subscriber.
  std::vector<Subscription> subs;
  Value lifetime = 1;
  Activity expiry_handler;
  std::string creator;
  friend bool operator==(const Resource&, const Resource&) = default;
};

using ResourceStore = std::map<std::string, Resource>;

ResourceStore resource_set_value(const ResourceStore& rho,
                                 const std::string& epr, Value w);
ResourceStore resource_set_lifetime(const ResourceStore& rho,
                                    const std::string& epr, Value t);
ResourceStore resource_add_subscription(const ResourceStore& rho,
                                        const std::string& epr,
                                        const std::string& orch,
                                        const Cond& rcond,
                                        const Activity& handler);
/// One time unit: lifetimes > 1 decrement, lifetime-1 resources disappear.
ResourceStore resource_tick(const ResourceStore& rho);

// ---------------------------------------------------------------------------
// Handler pools and states

struct HandlerOrigin {
  enum class Kind { Declared, Expiry, Subscription };
  Kind kind = Kind::Declared;
  std::string epr;         // Expiry, Subscription
  std::string subscriber;  // Subscription
  int index = 0;           // Declared

  static HandlerOrigin declared(int index);
  static HandlerOrigin expiry(std::string epr);
  static HandlerOrigin subscription(std::string epr, std::string subscriber);

  std::string to_string() const;
  friend bool operator==(const HandlerOrigin&, const HandlerOrigin&) = default;
  friend auto operator<=>(const HandlerOrigin&, const HandlerOrigin&) = default;
};

struct HandlerInstance {
  HandlerOrigin origin;
  Activity remaining;
  friend bool operator==(const HandlerInstance&,
                         const HandlerInstance&) = default;
};

using HandlerPool = std::vector<HandlerInstance>;

struct LocalState {
  std::string orch;
  Activity activity;
  HandlerPool pool;
  VarStore sigma;
  friend bool operator==(const LocalState&, const LocalState&) = default;
};

struct ChorState {
  std::vector<LocalState> locals;
  ResourceStore rho;
  friend bool operator==(const ChorState&, const ChorState&) = default;
};

/// Which orchestrators receive a resource's expiry handler.
enum class ExpiryTarget { Creator, Subscribers, Both };

const char* to_string(ExpiryTarget t);
std::optional<ExpiryTarget> parse_expiry_target(const std::string& s);

/// N(O,s): subscription handlers of `orch` whose condition holds now.
std::vector<HandlerInstance> notif_set(const std::string& orch,
                                       const ResourceStore& rho);

/// T(O,s): expiry handlers of resources at lifetime exactly 1.
std::vector<HandlerInstance> expiry_set(const std::string& orch,
                                        const ResourceStore& rho,
                                        ExpiryTarget target);

/// Injective encoding of a state; pools are compared as multisets.
std::string canonical_key(const ChorState& cs);

// ---------------------------------------------------------------------------
// Transition labels

enum class LabelKind {
  Delay,
  Tau,
  Throw,
  Exit,
  Receive,
  Reply,
  Invoke,
  ReplyBar,
  Assign,
  Pick,
  CreateResource,
  SetProp,
  GetProp,
  SetTimeout,
  Subscribe,
};

const char* to_string(LabelKind k);

struct TransitionLabel {
  LabelKind kind = LabelKind::Tau;
  std::string pl;
  std::string op;
  /// Transmitted or observed value, when the label carries one.
  std::optional<Value> value;
  std::string text;

  static TransitionLabel delay();
  static TransitionLabel tau();

  bool is_delay() const { return kind == LabelKind::Delay; }
  bool is_fault_or_exit() const {
    return kind == LabelKind::Throw || kind == LabelKind::Exit;
  }
  friend bool operator==(const TransitionLabel& a, const TransitionLabel& b) {
    return a.kind == b.kind && a.text == b.text;
  }
};

}  // namespace chorsem
