#include <map>
#include <set>

#include "chorsem/dsl.hpp"

namespace chorsem {

std::string to_string(const Diagnostic& d) {
  return std::to_string(d.pos.line) + ":" + std::to_string(d.pos.column) +
         (d.severity == Severity::Error ? ": error: " : ": warning: ") +
         d.message;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == Severity::Error) return true;
  return false;
}

namespace {

struct VarUse {
  std::string name;
  SourcePos pos;
};

void var_uses(const Expr& e, std::vector<VarUse>& out) {
  switch (e.kind()) {
    case Expr::Kind::Literal: return;
    case Expr::Kind::Variable: out.push_back({e.name(), e.pos()}); return;
    default:
      var_uses(e.lhs(), out);
      var_uses(e.rhs(), out);
  }
}

void var_uses(const Cond& c, std::vector<VarUse>& out) {
  switch (c.kind()) {
    case Cond::Kind::True:
    case Cond::Kind::False: return;
    case Cond::Kind::Compare:
      var_uses(c.lhs(), out);
      var_uses(c.rhs(), out);
      return;
    case Cond::Kind::Not: var_uses(c.left(), out); return;
    default:
      var_uses(c.left(), out);
      var_uses(c.right(), out);
  }
}

template <typename F>
void for_each_activity(const Activity& a, F&& f) {
  f(a);
  switch (a.kind()) {
    case ActivityKind::Seq:
    case ActivityKind::Par:
      for_each_activity(a.first(), f);
      for_each_activity(a.second(), f);
      return;
    case ActivityKind::While:
    case ActivityKind::CreateResource:
    case ActivityKind::Subscribe:
      for_each_activity(a.first(), f);
      return;
    case ActivityKind::Pick:
      for (const auto& b : a.branches()) for_each_activity(b.body, f);
      for_each_activity(a.first(), f);
      return;
    default:
      return;
  }
}

class Checker {
 public:
  explicit Checker(const ChoreographyDef& def) : def_(def) {}

  std::vector<Diagnostic> run() {
    if (def_.orchestrators.empty())
      error("a choreography needs at least one orchestrator", {1, 1});
    unique_names();
    partnerlinks();
    survey();
    for (std::size_t i = 0; i < def_.orchestrators.size(); ++i) {
      const auto& o = def_.orchestrators[i];
      check(o.main, i);
      check(o.fault_handler, i);
      for (const auto& h : o.handlers) check(h.activity, i);
    }
    return std::move(diags_);
  }

 private:
  const ChoreographyDef& def_;
  std::vector<Diagnostic> diags_;
  std::map<std::string, std::vector<SourcePos>> created_;
  std::map<std::string, std::set<std::string>> subscribers_;
  std::set<std::pair<std::string, std::size_t>> ops_checked_;

  void error(std::string msg, SourcePos pos) {
    diags_.push_back({Severity::Error, std::move(msg), pos});
  }
  void warning(std::string msg, SourcePos pos) {
    diags_.push_back({Severity::Warning, std::move(msg), pos});
  }

  void unique_names() {
    std::set<std::string> seen;
    for (const auto& o : def_.orchestrators) {
      if (!seen.insert(o.id).second)
        error("duplicate orchestrator '" + o.id + "'", o.pos);
      std::set<std::string> vars;
      for (const auto& [name, v] : o.vars)
        if (!vars.insert(name).second)
          error("duplicate variable '" + name + "' in '" + o.id + "'", o.pos);
    }
    seen.clear();
    for (const auto& pl : def_.partnerlinks)
      if (!seen.insert(pl.name).second)
        error("duplicate partnerlink '" + pl.name + "'", pl.pos);
    seen.clear();
    for (const auto& op : def_.op_list)
      if (!seen.insert(op.name).second)
        error("duplicate operation '" + op.name + "'", op.pos);
  }

  void partnerlinks() {
    for (const auto& pl : def_.partnerlinks) {
      for (const auto* end : {&pl.sender, &pl.receiver})
        if (!def_.orch_index(*end))
          error("partnerlink '" + pl.name + "' names unknown orchestrator '" +
                    *end + "'",
                pl.pos);
      if (pl.sender == pl.receiver)
        error("partnerlink '" + pl.name + "' connects '" + pl.sender +
                  "' to itself",
              pl.pos);
    }
  }

  void survey() {
    auto visit = [&](const Activity& a) {
      if (a.kind() == ActivityKind::CreateResource)
        created_[a.epr()].push_back(a.pos());
      if (a.kind() == ActivityKind::Subscribe)
        subscribers_[a.epr()].insert(a.orch());
    };
    for (const auto& o : def_.orchestrators) {
      for_each_activity(o.main, visit);
      for_each_activity(o.fault_handler, visit);
      for (const auto& h : o.handlers) for_each_activity(h.activity, visit);
    }
    for (const auto& [epr, sites] : created_) {
      for (std::size_t k = 1; k < sites.size(); ++k)
        warning("createResource(" + epr +
                    ") appears more than once; once the resource exists the "
                    "later creation is a no-op (rule CR: otherwise rho' = rho)",
                sites[k]);
    }
  }

  bool declared(std::size_t owner, const std::string& var) const {
    for (const auto& [name, v] : def_.orchestrators[owner].vars)
      if (name == var) return true;
    return false;
  }

  void need_var(std::size_t owner, const std::string& var, SourcePos pos) {
    if (!declared(owner, var))
      error("variable '" + var + "' is not declared in '" +
                def_.orchestrators[owner].id + "'",
            pos);
  }

  template <typename T>
  void need_vars(std::size_t owner, const T& term, SourcePos fallback) {
    std::vector<VarUse> uses;
    var_uses(term, uses);
    for (const auto& u : uses)
      need_var(owner, u.name, u.pos.line ? u.pos : fallback);
  }

  const PartnerLink* need_pl(const std::string& name, SourcePos pos) {
    const PartnerLink* pl = def_.find_pl(name);
    if (!pl) error("unknown partnerlink '" + name + "'", pos);
    return pl;
  }

  void need_op(const std::string& name, std::size_t owner, SourcePos pos,
               bool executes) {
    auto it = def_.ops.find(name);
    if (it == def_.ops.end()) {
      error("unknown operation '" + name + "'", pos);
      return;
    }
    if (!executes || !ops_checked_.emplace(name, owner).second) return;
    const OpDef& op = it->second;
    std::set<std::string> params(op.params.begin(), op.params.end());
    const std::string& oid = def_.orchestrators[owner].id;
    auto visible = [&](const VarUse& u) {
      if (params.count(u.name) || declared(owner, u.name)) return;
      error("operation '" + name + "' reads '" + u.name +
                "', which is not declared in receiver '" + oid + "'",
            u.pos.line ? u.pos : pos);
    };
    for (const auto& g : op.body) {
      std::vector<VarUse> uses;
      var_uses(g.guard, uses);
      var_uses(g.rhs, uses);
      for (const auto& u : uses) visible(u);
      if (!declared(owner, g.target))
        error("operation '" + name + "' assigns '" + g.target +
                  "', which is not declared in receiver '" + oid + "'",
              pos);
    }
  }

  void receiving(const std::string& pl_name, const std::string& op,
                 const std::string& var, std::size_t owner, SourcePos pos) {
    const PartnerLink* pl = need_pl(pl_name, pos);
    const std::string& oid = def_.orchestrators[owner].id;
    if (pl && pl->receiver != oid)
      warning("'" + oid + "' receives on '" + pl_name +
                  "' but is not its receiver; no invoke can reach it",
              pos);
    need_op(op, owner, pos, true);
    need_var(owner, var, pos);
  }

  void resource_known(const std::string& epr, SourcePos pos) {
    if (!created_.count(epr))
      warning("resource '" + epr + "' is never created; this step always throws",
              pos);
  }

  void check(const Activity& a, std::size_t owner) {
    const std::string& oid = def_.orchestrators[owner].id;
    SourcePos pos = a.pos();
    switch (a.kind()) {
      case ActivityKind::Empty:
      case ActivityKind::Throw:
      case ActivityKind::Exit:
        return;
      case ActivityKind::Receive:
        receiving(a.pl(), a.op(), a.var(), owner, pos);
        return;
      case ActivityKind::Invoke: {
        const PartnerLink* pl = need_pl(a.pl(), pos);
        if (pl && pl->sender != oid)
          warning("'" + oid + "' invokes on '" + a.pl() +
                      "' but is not its sender; the invoke never synchronises",
                  pos);
        need_op(a.op(), owner, pos, false);
        need_var(owner, a.var(), pos);
        return;
      }
      case ActivityKind::Reply:
      case ActivityKind::ReplyBar: {
        const PartnerLink* pl = need_pl(a.pl(), pos);
        if (pl && pl->sender != oid && pl->receiver != oid)
          warning("'" + oid + "' is not an endpoint of '" + a.pl() + "'", pos);
        need_var(owner, a.var(), pos);
        return;
      }
      case ActivityKind::Assign:
        need_vars(owner, a.expr(), pos);
        need_var(owner, a.var(), pos);
        return;
      case ActivityKind::Wait:
        if (a.timeout() < 1) error("wait needs a timeout of at least 1", pos);
        return;
      case ActivityKind::Seq:
      case ActivityKind::Par:
        check(a.first(), owner);
        check(a.second(), owner);
        return;
      case ActivityKind::While:
        need_vars(owner, a.cond(), pos);
        check(a.first(), owner);
        return;
      case ActivityKind::Pick:
        if (a.branches().empty()) error("pick needs at least one branch", pos);
        if (a.timeout() < 1) error("pick alarm needs a timeout of at least 1", pos);
        for (const auto& b : a.branches()) {
          receiving(b.pl, b.op, b.var, owner, pos);
          check(b.body, owner);
        }
        check(a.first(), owner);
        return;
      case ActivityKind::CreateResource: {
        if (a.timeout() < 1)
          error("createResource needs a lifetime of at least 1", pos);
        ExpiryTarget t = def_.config.expiry_target;
        if (t != ExpiryTarget::Subscribers) check(a.first(), owner);
        if (t != ExpiryTarget::Creator) {
          auto it = subscribers_.find(a.epr());
          if (it != subscribers_.end())
            for (const auto& s : it->second)
              if (auto k = def_.orch_index(s); k && *k != owner)
                check(a.first(), *k);
        }
        return;
      }
      case ActivityKind::GetProp:
        resource_known(a.epr(), pos);
        need_var(owner, a.var(), pos);
        return;
      case ActivityKind::SetProp:
        resource_known(a.epr(), pos);
        need_vars(owner, a.expr(), pos);
        return;
      case ActivityKind::SetTimeout:
        resource_known(a.epr(), pos);
        if (a.timeout() < 0) error("setTimeout needs a non-negative time", pos);
        return;
      case ActivityKind::Subscribe: {
        resource_known(a.epr(), pos);
        std::vector<VarUse> uses;
        var_uses(a.cond(), uses);
        for (const auto& u : uses)
          if (u.name != kResourceSymbol)
            error("resource condition may only refer to " +
                      std::string(kResourceSymbol) + ", found '" + u.name + "'",
                  u.pos.line ? u.pos : pos);
        auto k = def_.orch_index(a.orch());
        if (!k) {
          error("unknown orchestrator '" + a.orch() + "'", pos);
          return;
        }
        check(a.first(), *k);
        return;
      }
    }
  }
};

}  // namespace

std::vector<Diagnostic> validate_model(const ChoreographyDef& def) {
  return Checker(def).run();
}

}  // namespace chorsem
