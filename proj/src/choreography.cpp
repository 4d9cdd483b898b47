#include "chorsem/choreography.hpp"

#include <algorithm>

namespace chorsem {

void ChoreographyDef::index_ops() {
  ops.clear();
  for (const auto& op : op_list) ops[op.name] = op;
}

std::optional<std::size_t> ChoreographyDef::orch_index(
    const std::string& id) const {
  for (std::size_t i = 0; i < orchestrators.size(); ++i)
    if (orchestrators[i].id == id) return i;
  return std::nullopt;
}

const PartnerLink* ChoreographyDef::find_pl(const std::string& name) const {
  for (const auto& pl : partnerlinks)
    if (pl.name == name) return &pl;
  return nullptr;
}

bool operator==(const ChoreographyDef& a, const ChoreographyDef& b) {
  return a.name == b.name && a.orchestrators == b.orchestrators &&
         a.partnerlinks == b.partnerlinks && a.op_list == b.op_list &&
         a.config == b.config;
}

const char* to_string(BlockReason r) {
  switch (r) {
    case BlockReason::None: return "none";
    case BlockReason::CommPending: return "communication pending";
    case BlockReason::UrgentActivity: return "urgent activity";
    case BlockReason::InternalPending: return "internal action pending";
  }
  return "?";
}

ChorState initial_state(const ChoreographyDef& def) {
  ChorState cs;
  for (const auto& o : def.orchestrators) {
    LocalState local;
    local.orch = o.id;
    local.activity = o.main;
    local.sigma = o.initial_sigma();
    std::vector<HandlerInstance> seeds;
    for (std::size_t k = 0; k < o.handlers.size(); ++k) {
      if (o.handlers[k].at_start)
        seeds.push_back({HandlerOrigin::declared(static_cast<int>(k)),
                         o.handlers[k].activity});
    }
    local.pool = spawn_handlers({}, std::move(seeds));
    cs.locals.push_back(std::move(local));
  }
  return cs;
}

bool is_terminal(const ChorState& cs) {
  return std::all_of(cs.locals.begin(), cs.locals.end(),
                     [](const LocalState& l) {
                       return l.activity.is_empty() && l.pool.empty();
                     });
}

namespace {

bool is_comm(LabelKind k) {
  return k == LabelKind::Receive || k == LabelKind::Invoke ||
         k == LabelKind::Reply || k == LabelKind::ReplyBar ||
         k == LabelKind::Pick;
}

OrchContext context(const ChoreographyDef& def, std::size_t i, Mode mode) {
  return {&def.orchestrators[i], &def.ops, std::move(mode)};
}

// Bystanders keep their activity and gain N against the new store.
void spawn_bystanders(ChorState& cs, std::size_t i, std::size_t j) {
  for (std::size_t k = 0; k < cs.locals.size(); ++k) {
    if (k == i || k == j) continue;
    auto& l = cs.locals[k];
    l.pool = spawn_handlers(l.pool, notif_set(l.orch, cs.rho));
  }
}

ChorEdge single_edge(const ChorState& cs, std::size_t i, OrchStep& s,
                     std::string rule) {
  ChorEdge e;
  e.target = cs;
  e.target.locals[i] = std::move(s.local);
  e.target.rho = std::move(s.rho);
  spawn_bystanders(e.target, i, i);
  e.label = std::move(s.label);
  e.rules = std::move(s.rules);
  e.rules.push_back(rule);
  e.rule = std::move(rule);
  e.actors = {i};
  return e;
}

ChorEdge exit_edge(const ChorState& cs, std::size_t i, OrchStep& s) {
  ChorEdge e;
  e.target = cs;
  for (auto& l : e.target.locals) {
    l.activity = Activity();
    l.pool.clear();
  }
  e.label = std::move(s.label);
  e.rules = std::move(s.rules);
  e.rules.push_back("Chor1");
  e.rule = "Chor1";
  e.actors = {i};
  return e;
}

// Partner of `orch` on `pl`, if `orch` is one of its endpoints.
std::optional<std::size_t> other_end(const ChoreographyDef& def,
                                     const PartnerLink& pl,
                                     const std::string& orch) {
  if (pl.sender == orch) return def.orch_index(pl.receiver);
  if (pl.receiver == orch) return def.orch_index(pl.sender);
  return std::nullopt;
}

void sync_edges(std::vector<ChorEdge>& out, const ChoreographyDef& def,
                const ChorState& cs, std::size_t i) {
  const auto& li = cs.locals[i];
  for (auto& si : orch_action_steps(context(def, i, Mode::open_with()), li,
                                    cs.rho)) {
    LabelKind k = si.label.kind;
    if (k != LabelKind::Invoke && k != LabelKind::Reply) continue;
    const PartnerLink* pl = def.find_pl(si.label.pl);
    if (!pl || !si.label.value) continue;
    std::optional<std::size_t> j;
    if (k == LabelKind::Invoke) {
      if (pl->sender != li.orch) continue;
      j = def.orch_index(pl->receiver);
    } else {
      j = other_end(def, *pl, li.orch);
    }
    if (!j || *j == i) continue;
    Value v = *si.label.value;
    const auto& lj = cs.locals[*j];
    for (auto& sj : orch_action_steps(context(def, *j, Mode::open_with({v})),
                                      lj, cs.rho)) {
      std::string rule;
      if (k == LabelKind::Invoke) {
        if (sj.label.pl != pl->name || sj.label.op != si.label.op) continue;
        if (sj.label.kind == LabelKind::Receive) rule = "Chor4";
        else if (sj.label.kind == LabelKind::Pick) rule = "Chor6";
        else continue;
      } else {
        if (sj.label.kind != LabelKind::ReplyBar || sj.label.pl != pl->name)
          continue;
        rule = "Chor5";
      }
      ChorEdge e;
      e.target = cs;
      e.target.locals[i] = si.local;
      e.target.locals[*j] = std::move(sj.local);
      e.target.rho = std::move(sj.rho);
      spawn_bystanders(e.target, i, *j);
      e.label = si.label;
      if (k == LabelKind::Reply)
        e.label.text = "reply(" + pl->name + "," + std::to_string(v) + ")";
      e.rules = si.rules;
      e.rules.insert(e.rules.end(), sj.rules.begin(), sj.rules.end());
      e.rules.push_back(rule);
      e.rule = std::move(rule);
      e.actors = {i, *j};
      out.push_back(std::move(e));
    }
  }
}

}  // namespace

std::vector<ChorEdge> chor_action_steps(const ChoreographyDef& def,
                                        const ChorState& cs) {
  std::vector<ChorEdge> out;
  for (std::size_t i = 0; i < cs.locals.size(); ++i) {
    for (auto& s : orch_action_steps(context(def, i, Mode::closed()),
                                     cs.locals[i], cs.rho)) {
      if (s.label.kind == LabelKind::Exit)
        out.push_back(exit_edge(cs, i, s));
      else
        out.push_back(single_edge(cs, i, s, "Chor2"));
    }
    sync_edges(out, def, cs, i);
    if (!def.config.open_domain.empty()) {
      Mode env = Mode::open_with(def.config.open_domain);
      for (auto& s : orch_action_steps(context(def, i, env), cs.locals[i],
                                       cs.rho)) {
        if (is_comm(s.label.kind)) out.push_back(single_edge(cs, i, s, "Env"));
      }
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ChorEdge& a, const ChorEdge& b) {
                     if (a.actors[0] != b.actors[0])
                       return a.actors[0] < b.actors[0];
                     if (a.rule != b.rule) return a.rule < b.rule;
                     return a.label.text < b.label.text;
                   });
  return out;
}

DelayResult chor_delay(const ChoreographyDef& def, const ChorState& cs,
                       const std::vector<ChorEdge>* actions) {
  std::vector<ChorEdge> own;
  if (!actions) {
    own = chor_action_steps(def, cs);
    actions = &own;
  }
  DelayResult r;
  for (const auto& e : *actions) {
    if (e.is_sync()) {
      r.reason = BlockReason::CommPending;
      r.detail = e.label.text;
      return r;
    }
  }
  if (def.config.urgent_internal && !actions->empty()) {
    r.reason = BlockReason::InternalPending;
    r.detail = actions->front().label.text;
    return r;
  }
  for (const auto& l : cs.locals) {
    std::string b = delay_blocker(l);
    if (!b.empty()) {
      r.reason = BlockReason::UrgentActivity;
      r.detail = b;
      return r;
    }
  }
  ChorState next;
  next.locals.reserve(cs.locals.size());
  for (const auto& l : cs.locals)
    next.locals.push_back(orch_delay_step(l, cs.rho, def.config.expiry_target));
  next.rho = resource_tick(cs.rho);
  r.state = std::move(next);
  return r;
}

}  // namespace chorsem
