#include "chorsem/orchestration.hpp"

#include <algorithm>

namespace chorsem {

VarStore OrchestratorDef::initial_sigma() const {
  VarStore sigma;
  for (const auto& [name, v] : vars) sigma[name] = v;
  return sigma;
}

HandlerPool prune_pool(HandlerPool pool) {
  std::erase_if(pool, [](const HandlerInstance& h) {
    return h.remaining.is_empty();
  });
  return pool;
}

HandlerPool spawn_handlers(const HandlerPool& pool,
                           std::vector<HandlerInstance> fresh) {
  std::sort(fresh.begin(), fresh.end(),
            [](const HandlerInstance& a, const HandlerInstance& b) {
              return a.origin < b.origin;
            });
  HandlerPool out = pool;
  for (auto& h : fresh) {
    if (h.remaining.is_empty()) continue;
    bool live = std::any_of(out.begin(), out.end(), [&](const HandlerInstance& p) {
      return p.origin == h.origin;
    });
    if (!live) out.push_back(std::move(h));
  }
  return out;
}

std::vector<OrchStep> orch_action_steps(const OrchContext& ctx,
                                        const LocalState& local,
                                        const ResourceStore& rho) {
  std::vector<OrchStep> out;
  StepContext sctx{ctx.ops, local.orch, ctx.mode};

  auto faulted = [&](HandlerPool pool, ActivityStep& s) {
    LocalState next = local;
    next.activity = ctx.def->fault_handler;
    next.pool = std::move(pool);
    s.rules.push_back("Notif3");
    out.push_back({std::move(s.label), std::move(next), rho, std::move(s.rules)});
  };
  auto exited = [&](ActivityStep& s) {
    LocalState next = local;
    next.activity = Activity();
    next.pool.clear();
    s.rules.push_back("Notif4");
    out.push_back({std::move(s.label), std::move(next), rho, std::move(s.rules)});
  };

  for (auto& s : action_steps(local.activity, local.sigma, rho, sctx)) {
    if (s.label.kind == LabelKind::Throw) {
      faulted(local.pool, s);
    } else if (s.label.kind == LabelKind::Exit) {
      exited(s);
    } else {
      LocalState next;
      next.orch = local.orch;
      next.activity = s.residual;
      next.sigma = std::move(s.sigma_after);
      next.pool = spawn_handlers(prune_pool(local.pool),
                                 notif_set(local.orch, s.rho_after));
      s.rules.push_back("Notif1");
      out.push_back({std::move(s.label), std::move(next),
                     std::move(s.rho_after), std::move(s.rules)});
    }
  }

  for (std::size_t i = 0; i < local.pool.size(); ++i) {
    const auto& inst = local.pool[i];
    for (auto& s : action_steps(inst.remaining, local.sigma, rho, sctx)) {
      if (s.label.kind == LabelKind::Throw) {
        HandlerPool rest = local.pool;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
        faulted(std::move(rest), s);
      } else if (s.label.kind == LabelKind::Exit) {
        exited(s);
      } else {
        HandlerPool pool = local.pool;
        pool[i].remaining = s.residual;
        LocalState next;
        next.orch = local.orch;
        next.activity = local.activity;
        next.sigma = std::move(s.sigma_after);
        next.pool = spawn_handlers(prune_pool(std::move(pool)),
                                   notif_set(local.orch, s.rho_after));
        s.rules.push_back("Notif2");
        out.push_back({std::move(s.label), std::move(next),
                       std::move(s.rho_after), std::move(s.rules)});
      }
    }
  }
  return out;
}

bool orch_can_delay(const LocalState& local) {
  return delay_blocker(local).empty();
}

std::string delay_blocker(const LocalState& local) {
  if (!can_delay(local.activity)) return local.orch + ":main";
  for (const auto& h : local.pool)
    if (!can_delay(h.remaining)) return local.orch + ":" + h.origin.to_string();
  return {};
}

LocalState orch_delay_step(const LocalState& local, const ResourceStore& rho,
                           ExpiryTarget target) {
  std::string blocker = delay_blocker(local);
  if (!blocker.empty()) throw NotDelayable("time blocked by " + blocker);
  LocalState next;
  next.orch = local.orch;
  next.sigma = local.sigma;
  next.activity = delay_step(local.activity);
  HandlerPool pool;
  pool.reserve(local.pool.size());
  for (const auto& h : local.pool)
    pool.push_back({h.origin, delay_step(h.remaining)});
  next.pool = spawn_handlers(prune_pool(std::move(pool)),
                             expiry_set(local.orch, rho, target));
  return next;
}

}  // namespace chorsem
