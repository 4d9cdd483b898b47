#include "chorsem/activity_semantics.hpp"

namespace chorsem {

namespace {

TransitionLabel make_label(LabelKind kind, std::string text,
                           std::string pl = {}, std::string op = {},
                           std::optional<Value> value = std::nullopt) {
  TransitionLabel l;
  l.kind = kind;
  l.text = std::move(text);
  l.pl = std::move(pl);
  l.op = std::move(op);
  l.value = value;
  return l;
}

VarStore write_var(const VarStore& sigma, const std::string& var, Value v) {
  VarStore out = sigma;
  auto it = out.find(var);
  if (it == out.end()) throw UndeclaredVariable(var);
  it->second = v;
  return out;
}

Value read_var(const VarStore& sigma, const std::string& var) {
  auto it = sigma.find(var);
  if (it == sigma.end()) throw UndeclaredVariable(var);
  return it->second;
}

const OpDef& lookup_op(const StepContext& ctx, const std::string& name) {
  if (ctx.ops) {
    auto it = ctx.ops->find(name);
    if (it != ctx.ops->end()) return it->second;
  }
  throw ModelError("unknown operation '" + name + "'");
}

// op(sigma[v'/v]); every declared parameter sees the transmitted value.
VarStore receive_into(const StepContext& ctx, const std::string& op_name,
                      const std::string& var, Value v, const VarStore& sigma) {
  const OpDef& op = lookup_op(ctx, op_name);
  return apply_op(op, std::vector<Value>(op.params.size(), v),
                  write_var(sigma, var, v));
}

ActivityStep throw_step(const VarStore& sigma, const ResourceStore& rho,
                        std::string rule) {
  return {make_label(LabelKind::Throw, "throw"), Activity(), sigma, rho,
          {std::move(rule)}};
}

void steps_into(std::vector<ActivityStep>& out, const Activity& a,
                const VarStore& sigma, const ResourceStore& rho,
                const StepContext& ctx);

void seq_steps(std::vector<ActivityStep>& out, const Activity& a,
               const VarStore& sigma, const ResourceStore& rho,
               const StepContext& ctx) {
  std::vector<ActivityStep> head;
  steps_into(head, a.first(), sigma, rho, ctx);
  for (auto& s : head) {
    if (s.label.is_fault_or_exit()) {
      s.residual = Activity();
      s.rules.push_back("Seq3");
    } else if (s.residual.is_empty()) {
      s.residual = a.second();
      s.rules.push_back("Seq2");
    } else {
      s.residual = Activity::seq(s.residual, a.second());
      s.rules.push_back("Seq1");
    }
    out.push_back(std::move(s));
  }
}

void par_steps(std::vector<ActivityStep>& out, const Activity& a,
               const VarStore& sigma, const ResourceStore& rho,
               const StepContext& ctx) {
  if (a.first().is_empty() && a.second().is_empty()) {
    out.push_back({TransitionLabel::tau(), Activity(), sigma, rho, {"Par5"}});
    return;
  }
  std::vector<ActivityStep> side;
  steps_into(side, a.first(), sigma, rho, ctx);
  for (auto& s : side) {
    if (s.label.is_fault_or_exit()) {
      s.residual = Activity();
      s.rules.push_back("Par3");
    } else {
      s.residual = Activity::par(s.residual, a.second());
      s.rules.push_back("Par1");
    }
    out.push_back(std::move(s));
  }
  side.clear();
  steps_into(side, a.second(), sigma, rho, ctx);
  for (auto& s : side) {
    if (s.label.is_fault_or_exit()) {
      s.residual = Activity();
      s.rules.push_back("Par4");
    } else {
      s.residual = Activity::par(a.first(), s.residual);
      s.rules.push_back("Par2");
    }
    out.push_back(std::move(s));
  }
}

void steps_into(std::vector<ActivityStep>& out, const Activity& a,
                const VarStore& sigma, const ResourceStore& rho,
                const StepContext& ctx) {
  switch (a.kind()) {
    case ActivityKind::Empty:
      return;
    case ActivityKind::Throw:
      out.push_back(throw_step(sigma, rho, "Throw"));
      return;
    case ActivityKind::Exit:
      out.push_back({make_label(LabelKind::Exit, "exit"), Activity(), sigma,
                     rho, {"Exit"}});
      return;
    case ActivityKind::Receive:
      if (!ctx.mode.open) return;
      for (Value v : ctx.mode.domain) {
        out.push_back(
            {make_label(LabelKind::Receive,
                        "receive(" + a.pl() + "," + a.op() + "," +
                            std::to_string(v) + ")",
                        a.pl(), a.op(), v),
             Activity(), receive_into(ctx, a.op(), a.var(), v, sigma), rho,
             {"Receive"}});
      }
      return;
    case ActivityKind::Invoke:
      if (!ctx.mode.open) return;
      out.push_back({make_label(LabelKind::Invoke,
                                "invoke(" + a.pl() + "," + a.op() + "," +
                                    a.var() + ")",
                                a.pl(), a.op(), read_var(sigma, a.var())),
                     Activity(), sigma, rho, {"Invoke"}});
      return;
    case ActivityKind::Reply:
      if (!ctx.mode.open) return;
      out.push_back(
          {make_label(LabelKind::Reply, "reply(" + a.pl() + "," + a.var() + ")",
                      a.pl(), {}, read_var(sigma, a.var())),
           Activity(), sigma, rho, {"Reply"}});
      return;
    case ActivityKind::ReplyBar:
      if (!ctx.mode.open) return;
      for (Value v : ctx.mode.domain) {
        out.push_back({make_label(LabelKind::ReplyBar,
                                  "replybar(" + a.pl() + "," +
                                      std::to_string(v) + ")",
                                  a.pl(), {}, v),
                       Activity(), write_var(sigma, a.var(), v), rho,
                       {"ReplyBar"}});
      }
      return;
    case ActivityKind::Assign: {
      Value v = eval_expr(a.expr(), sigma);
      out.push_back({make_label(LabelKind::Assign,
                                "assign(" + format(a.expr()) + "," + a.var() +
                                    ")",
                                {}, {}, v),
                     Activity(), write_var(sigma, a.var(), v), rho,
                     {"Assign"}});
      return;
    }
    case ActivityKind::Wait:
      return;
    case ActivityKind::Seq:
      seq_steps(out, a, sigma, rho, ctx);
      return;
    case ActivityKind::Par:
      par_steps(out, a, sigma, rho, ctx);
      return;
    case ActivityKind::While:
      if (eval_cond(a.cond(), sigma)) {
        out.push_back({TransitionLabel::tau(), Activity::seq(a.first(), a),
                       sigma, rho, {"While1"}});
      } else {
        out.push_back({TransitionLabel::tau(), Activity(), sigma, rho,
                       {"While2"}});
      }
      return;
    case ActivityKind::Pick:
      if (!ctx.mode.open || a.timeout() < 1) return;
      for (const auto& b : a.branches()) {
        for (Value v : ctx.mode.domain) {
          out.push_back({make_label(LabelKind::Pick,
                                    "pick(" + b.pl + "," + b.op + "," +
                                        std::to_string(v) + ")",
                                    b.pl, b.op, v),
                         b.body, receive_into(ctx, b.op, b.var, v, sigma), rho,
                         {"Pick"}});
        }
      }
      return;
    case ActivityKind::CreateResource: {
      ResourceStore next = rho;
      if (!rho.count(a.epr())) {
        Resource r;
        r.epr = a.epr();
        r.value = a.number();
        r.lifetime = a.timeout();
        r.expiry_handler = a.first();
        r.creator = ctx.self;
        if (r.lifetime < 1) throw NonPositiveLifetime();
        next.emplace(a.epr(), std::move(r));
      }
      out.push_back({make_label(LabelKind::CreateResource,
                                "createResource(" + a.epr() + "," +
                                    std::to_string(a.number()) + "," +
                                    std::to_string(a.timeout()) + ")",
                                {}, {}, a.number()),
                     Activity(), sigma, std::move(next), {"CR"}});
      return;
    }
    case ActivityKind::GetProp: {
      auto it = rho.find(a.epr());
      if (it == rho.end()) {
        out.push_back(throw_step(sigma, rho, "GetProp2"));
        return;
      }
      Value v = it->second.value;
      out.push_back({make_label(LabelKind::GetProp,
                                "getProp(" + a.epr() + "," +
                                    std::to_string(v) + ")",
                                {}, {}, v),
                     Activity(), write_var(sigma, a.var(), v), rho,
                     {"GetProp"}});
      return;
    }
    case ActivityKind::SetProp: {
      if (!rho.count(a.epr())) {
        out.push_back(throw_step(sigma, rho, "SetProp2"));
        return;
      }
      Value w = eval_expr(a.expr(), sigma);
      out.push_back({make_label(LabelKind::SetProp,
                                "setProp(" + a.epr() + "," +
                                    std::to_string(w) + ")",
                                {}, {}, w),
                     Activity(), sigma, resource_set_value(rho, a.epr(), w),
                     {"SetProp"}});
      return;
    }
    case ActivityKind::SetTimeout:
      if (!rho.count(a.epr())) {
        out.push_back(throw_step(sigma, rho, "SetTime2"));
      } else if (a.timeout() == 0) {
        out.push_back(throw_step(sigma, rho, "SetTime3"));
      } else {
        out.push_back(
            {make_label(LabelKind::SetTimeout,
                        "setTimeout(" + a.epr() + "," +
                            std::to_string(a.timeout()) + ")",
                        {}, {}, a.timeout()),
             Activity(), sigma,
             resource_set_lifetime(rho, a.epr(), a.timeout()), {"SetTime"}});
      }
      return;
    case ActivityKind::Subscribe:
      if (!rho.count(a.epr())) {
        out.push_back(throw_step(sigma, rho, "Subs2"));
        return;
      }
      out.push_back(
          {make_label(LabelKind::Subscribe,
                      "subscribe(" + a.orch() + "," + a.epr() + "," +
                          format(a.cond()) + ")"),
           Activity(), sigma,
           resource_add_subscription(rho, a.epr(), a.orch(), a.cond(),
                                     a.first()),
           {"Subs"}});
      return;
  }
}

void delay_rules_into(std::vector<std::string>& out, const Activity& a) {
  switch (a.kind()) {
    case ActivityKind::Wait:
      out.push_back(a.timeout() > 1 ? "Wait1D" : "Wait2D");
      return;
    case ActivityKind::Receive:
      out.push_back("ReceiveD");
      return;
    case ActivityKind::Invoke:
      out.push_back("InvokeD");
      return;
    case ActivityKind::Empty:
      out.push_back("EmptyD");
      return;
    case ActivityKind::Seq:
      delay_rules_into(out, a.first());
      out.push_back("SequenceD");
      return;
    case ActivityKind::Par:
      delay_rules_into(out, a.first());
      delay_rules_into(out, a.second());
      out.push_back("ParallelD");
      return;
    case ActivityKind::Pick:
      out.push_back(a.timeout() > 1 ? "Pick2D" : "Pick1D");
      return;
    default:
      throw NotDelayable(std::string("no delay rule for ") +
                         to_string(a.kind()));
  }
}

void offers_into(std::vector<SyncOffer>& out, const Activity& a) {
  switch (a.kind()) {
    case ActivityKind::Receive:
    case ActivityKind::Invoke:
      out.push_back({a.kind(), a.pl(), a.op(), a.var()});
      return;
    case ActivityKind::Reply:
    case ActivityKind::ReplyBar:
      out.push_back({a.kind(), a.pl(), {}, a.var()});
      return;
    case ActivityKind::Pick:
      if (a.timeout() < 1) return;
      for (const auto& b : a.branches())
        out.push_back({ActivityKind::Pick, b.pl, b.op, b.var});
      return;
    case ActivityKind::Seq:
      offers_into(out, a.first());
      return;
    case ActivityKind::Par:
      offers_into(out, a.first());
      offers_into(out, a.second());
      return;
    default:
      return;
  }
}

}  // namespace

std::vector<ActivityStep> action_steps(const Activity& a, const VarStore& sigma,
                                       const ResourceStore& rho,
                                       const StepContext& ctx) {
  std::vector<ActivityStep> out;
  steps_into(out, a, sigma, rho, ctx);
  return out;
}

bool can_delay(const Activity& a) {
  switch (a.kind()) {
    case ActivityKind::Wait:
    case ActivityKind::Receive:
    case ActivityKind::Invoke:
    case ActivityKind::Empty:
    case ActivityKind::Pick:
      return true;
    case ActivityKind::Seq:
      return can_delay(a.first());
    case ActivityKind::Par:
      return can_delay(a.first()) && can_delay(a.second());
    default:
      return false;
  }
}

Activity delay_step(const Activity& a) {
  switch (a.kind()) {
    case ActivityKind::Wait:
      return a.timeout() > 1 ? a.with_timeout(a.timeout() - 1) : Activity();
    case ActivityKind::Receive:
    case ActivityKind::Invoke:
    case ActivityKind::Empty:
      return a;
    case ActivityKind::Seq: {
      // A head that runs out of time hands over to the continuation, the
      // delay counterpart of Seq2.
      Activity head = delay_step(a.first());
      if (head.is_empty()) return a.second();
      return Activity::seq(std::move(head), a.second());
    }
    case ActivityKind::Par:
      return Activity::par(delay_step(a.first()), delay_step(a.second()));
    case ActivityKind::Pick:
      return a.timeout() > 1 ? a.with_timeout(a.timeout() - 1) : a.first();
    default:
      throw NotDelayable(std::string("no delay rule for ") +
                         to_string(a.kind()));
  }
}

std::vector<std::string> delay_rules(const Activity& a) {
  std::vector<std::string> out;
  delay_rules_into(out, a);
  return out;
}

std::vector<SyncOffer> sync_offers(const Activity& a) {
  std::vector<SyncOffer> out;
  offers_into(out, a);
  return out;
}

}  // namespace chorsem
