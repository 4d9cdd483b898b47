#include "chorsem/explorer.hpp"

#include <deque>
#include <random>
#include <set>

namespace chorsem {

std::vector<std::string> flag_names(unsigned flags) {
  std::vector<std::string> out;
  if (flags & kTerminalSuccess) out.push_back("terminal-success");
  if (flags & kDeadlock) out.push_back("deadlock");
  if (flags & kTimelock) out.push_back("timelock");
  if (flags & kFrontierCut) out.push_back("frontier-cut");
  return out;
}

std::optional<std::size_t> Lts::find(const ChorState& cs) const {
  auto it = index.find(canonical_key(cs));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::size_t Lts::count(unsigned flag) const {
  std::size_t n = 0;
  for (unsigned f : flags)
    if (f & flag) ++n;
  return n;
}

namespace {

struct Builder {
  Lts& lts;
  std::set<std::tuple<std::size_t, std::string, std::size_t>> seen_edges;

  std::optional<std::size_t> intern(ChorState cs, std::string key,
                                    std::size_t depth, std::size_t delays,
                                    std::size_t max_states, bool& fresh) {
    fresh = false;
    auto it = lts.index.find(key);
    if (it != lts.index.end()) return it->second;
    if (lts.states.size() >= max_states) return std::nullopt;
    std::size_t id = lts.states.size();
    lts.index.emplace(key, id);
    lts.keys.push_back(std::move(key));
    lts.states.push_back(std::move(cs));
    lts.out.emplace_back();
    lts.flags.push_back(0);
    lts.depth.push_back(depth);
    lts.delays.push_back(delays);
    fresh = true;
    return id;
  }

  void add_edge(std::size_t from, TransitionLabel label, std::size_t to,
                std::string rule) {
    if (!seen_edges.emplace(from, label.text, to).second) return;
    lts.out[from].push_back(lts.edges.size());
    lts.edges.push_back({from, std::move(label), to, std::move(rule)});
  }
};

}  // namespace

Lts explore(const ChoreographyDef& def, const Limits& limits) {
  Lts lts;
  Builder b{lts, {}};
  std::deque<std::size_t> queue;
  bool fresh = false;
  ChorState init = initial_state(def);
  std::string key = canonical_key(init);
  b.intern(std::move(init), std::move(key), 0, 0,
           std::max<std::size_t>(limits.max_states, 1), fresh);
  lts.initial = 0;
  queue.push_back(0);

  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    if (lts.depth[s] >= limits.max_depth) {
      lts.flags[s] |= kFrontierCut;
      lts.limits_hit = true;
      continue;
    }
    // Copy: `states` may reallocate while successors are interned.
    ChorState cs = lts.states[s];
    auto actions = chor_action_steps(def, cs);
    DelayResult delay = chor_delay(def, cs, &actions);

    auto follow = [&](ChorState target, TransitionLabel label,
                      std::string rule, bool is_delay) {
      std::string k = canonical_key(target);
      std::size_t d = lts.delays[s] + (is_delay ? 1 : 0);
      if (is_delay && d > limits.max_delay_steps && !lts.index.count(k)) {
        lts.flags[s] |= kFrontierCut;
        lts.limits_hit = true;
        return;
      }
      auto id = b.intern(std::move(target), std::move(k), lts.depth[s] + 1, d,
                         limits.max_states, fresh);
      if (!id) {
        lts.flags[s] |= kFrontierCut;
        lts.limits_hit = true;
        return;
      }
      if (fresh) queue.push_back(*id);
      b.add_edge(s, std::move(label), *id, std::move(rule));
    };

    for (auto& e : actions)
      follow(std::move(e.target), std::move(e.label), std::move(e.rule), false);
    if (delay.state)
      follow(std::move(*delay.state), TransitionLabel::delay(), "Chor3", true);
  }
  classify(lts);
  return lts;
}

void classify(Lts& lts) {
  for (std::size_t s = 0; s < lts.states.size(); ++s) {
    unsigned f = lts.flags[s] & kFrontierCut;
    if (is_terminal(lts.states[s])) {
      f |= kTerminalSuccess;
    } else if (!(f & kFrontierCut)) {
      bool action = false, delay = false;
      for (std::size_t e : lts.out[s]) {
        if (lts.edges[e].label.is_delay()) delay = true;
        else action = true;
      }
      if (!action && !delay) {
        f |= kTimelock;
      } else if (!action) {
        bool only_self = true;
        for (std::size_t e : lts.out[s])
          if (lts.edges[e].to != s) only_self = false;
        if (only_self) f |= kDeadlock;
      }
    }
    lts.flags[s] = f;
  }
}

std::optional<Trace> find_trace(const Lts& lts,
                                const std::function<bool(std::size_t)>& pred) {
  if (lts.states.empty()) return std::nullopt;
  std::vector<std::ptrdiff_t> via(lts.states.size(), -3);
  std::deque<std::size_t> queue{lts.initial};
  via[lts.initial] = -1;
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    if (pred(s)) {
      Trace t;
      std::vector<std::size_t> edges;
      for (std::size_t n = s; via[n] >= 0;) {
        edges.push_back(static_cast<std::size_t>(via[n]));
        n = lts.edges[static_cast<std::size_t>(via[n])].from;
      }
      t.states.push_back(lts.initial);
      for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
        t.labels.push_back(lts.edges[*it].label);
        t.states.push_back(lts.edges[*it].to);
      }
      return t;
    }
    for (std::size_t e : lts.out[s]) {
      std::size_t to = lts.edges[e].to;
      if (via[to] != -3) continue;
      via[to] = static_cast<std::ptrdiff_t>(e);
      queue.push_back(to);
    }
  }
  return std::nullopt;
}

std::optional<Trace> find_trace_labels(
    const Lts& lts, const std::vector<std::string>& patterns) {
  if (lts.states.empty()) return std::nullopt;
  const std::size_t width = patterns.size() + 1;
  const std::size_t goal = patterns.size();
  // BFS over (state, matched prefix length); parent pointers per node.
  std::vector<std::ptrdiff_t> parent(lts.states.size() * width, -2);
  std::vector<std::ptrdiff_t> via(lts.states.size() * width, -1);
  std::deque<std::size_t> queue;
  std::size_t start = lts.initial * width;
  parent[start] = -1;
  queue.push_back(start);
  while (!queue.empty()) {
    std::size_t n = queue.front();
    queue.pop_front();
    std::size_t s = n / width, phase = n % width;
    if (phase == goal) {
      Trace t;
      std::vector<std::size_t> edges;
      for (std::size_t m = n; parent[m] >= 0;
           m = static_cast<std::size_t>(parent[m]))
        edges.push_back(static_cast<std::size_t>(via[m]));
      t.states.push_back(lts.initial);
      for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
        t.labels.push_back(lts.edges[*it].label);
        t.states.push_back(lts.edges[*it].to);
      }
      return t;
    }
    for (std::size_t e : lts.out[s]) {
      const auto& edge = lts.edges[e];
      std::size_t next_phase =
          glob_match(patterns[phase], edge.label.text) ? phase + 1 : phase;
      std::size_t m = edge.to * width + next_phase;
      if (parent[m] != -2) continue;
      parent[m] = static_cast<std::ptrdiff_t>(n);
      via[m] = static_cast<std::ptrdiff_t>(e);
      queue.push_back(m);
    }
  }
  return std::nullopt;
}

bool glob_match(const std::string& pattern, const std::string& text) {
  std::size_t p = 0, t = 0, star = std::string::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (p < pattern.size() && pattern[p] == text[t]) {
      ++p;
      ++t;
    } else if (star != std::string::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

Walk random_walk(const ChoreographyDef& def, std::uint64_t seed,
                 std::size_t steps) {
  std::mt19937_64 rng(seed);
  Walk w;
  w.states.push_back(initial_state(def));
  for (std::size_t i = 0; i < steps; ++i) {
    const ChorState& cs = w.states.back();
    auto actions = chor_action_steps(def, cs);
    DelayResult delay = chor_delay(def, cs, &actions);
    std::size_t n = actions.size() + (delay.state ? 1 : 0);
    if (n == 0) break;
    std::size_t pick = static_cast<std::size_t>(rng() % n);
    if (pick < actions.size()) {
      w.labels.push_back(actions[pick].label);
      w.states.push_back(std::move(actions[pick].target));
    } else {
      w.labels.push_back(TransitionLabel::delay());
      w.states.push_back(std::move(*delay.state));
    }
  }
  return w;
}

}  // namespace chorsem
