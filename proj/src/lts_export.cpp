#include <json.hpp>

#include "chorsem/explorer.hpp"

namespace chorsem {

using nlohmann::ordered_json;

LtsDocument to_document(const Lts& lts) {
  LtsDocument doc;
  doc.initial = lts.initial;
  doc.limits_hit = lts.limits_hit;
  for (std::size_t s = 0; s < lts.states.size(); ++s) {
    const ChorState& cs = lts.states[s];
    StateDoc sd;
    sd.id = s;
    sd.key = lts.keys[s];
    sd.flags = flag_names(lts.flags[s]);
    for (const auto& l : cs.locals) {
      LocalDoc ld;
      ld.orch = l.orch;
      ld.activity = format(l.activity);
      HandlerPool pool = l.pool;
      std::sort(pool.begin(), pool.end(),
                [](const HandlerInstance& a, const HandlerInstance& b) {
                  return a.origin < b.origin;
                });
      for (const auto& h : pool)
        ld.pool.push_back(h.origin.to_string() + " " + format(h.remaining));
      ld.sigma.insert(l.sigma.begin(), l.sigma.end());
      sd.locals.push_back(std::move(ld));
    }
    for (const auto& [epr, r] : cs.rho) {
      ResourceDoc rd{epr, r.value, r.lifetime, {}};
      for (const auto& sub : r.subs)
        rd.subs.push_back({sub.subscriber, format(sub.condition)});
      sd.rho.push_back(std::move(rd));
    }
    doc.states.push_back(std::move(sd));
  }
  for (const auto& e : lts.edges) doc.edges.push_back({e.from, e.label.text, e.to});
  return doc;
}

std::string export_json(const LtsDocument& doc) {
  ordered_json j;
  j["states"] = ordered_json::array();
  for (const auto& s : doc.states) {
    ordered_json js;
    js["id"] = s.id;
    js["key"] = s.key;
    js["flags"] = s.flags;
    js["locals"] = ordered_json::array();
    for (const auto& l : s.locals) {
      ordered_json jl;
      jl["orch"] = l.orch;
      jl["activity"] = l.activity;
      jl["pool"] = l.pool;
      jl["sigma"] = ordered_json::object();
      for (const auto& [k, v] : l.sigma) jl["sigma"][k] = v;
      js["locals"].push_back(std::move(jl));
    }
    js["rho"] = ordered_json::array();
    for (const auto& r : s.rho) {
      ordered_json jr;
      jr["epr"] = r.epr;
      jr["value"] = r.value;
      jr["lifetime"] = r.lifetime;
      jr["subs"] = ordered_json::array();
      for (const auto& sub : r.subs)
        jr["subs"].push_back({{"orch", sub.orch}, {"cond", sub.cond}});
      js["rho"].push_back(std::move(jr));
    }
    j["states"].push_back(std::move(js));
  }
  j["initial"] = doc.initial;
  j["edges"] = ordered_json::array();
  for (const auto& e : doc.edges)
    j["edges"].push_back({{"from", e.from}, {"label", e.label}, {"to", e.to}});
  j["limits_hit"] = doc.limits_hit;
  return j.dump(1) + "\n";
}

LtsDocument load_json(const std::string& text) {
  LtsDocument doc;
  try {
    auto j = nlohmann::json::parse(text);
    for (const auto& js : j.at("states")) {
      StateDoc s;
      s.id = js.at("id").get<std::size_t>();
      s.key = js.at("key").get<std::string>();
      s.flags = js.at("flags").get<std::vector<std::string>>();
      for (const auto& jl : js.at("locals")) {
        LocalDoc l;
        l.orch = jl.at("orch").get<std::string>();
        l.activity = jl.at("activity").get<std::string>();
        l.pool = jl.at("pool").get<std::vector<std::string>>();
        l.sigma = jl.at("sigma").get<std::map<std::string, Value>>();
        s.locals.push_back(std::move(l));
      }
      for (const auto& jr : js.at("rho")) {
        ResourceDoc r;
        r.epr = jr.at("epr").get<std::string>();
        r.value = jr.at("value").get<Value>();
        r.lifetime = jr.at("lifetime").get<Value>();
        for (const auto& sub : jr.at("subs"))
          r.subs.push_back({sub.at("orch").get<std::string>(),
                            sub.at("cond").get<std::string>()});
        s.rho.push_back(std::move(r));
      }
      doc.states.push_back(std::move(s));
    }
    doc.initial = j.at("initial").get<std::size_t>();
    for (const auto& je : j.at("edges"))
      doc.edges.push_back({je.at("from").get<std::size_t>(),
                           je.at("label").get<std::string>(),
                           je.at("to").get<std::size_t>()});
    doc.limits_hit = j.at("limits_hit").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed LTS JSON: ") + e.what());
  }
  for (const auto& e : doc.edges) {
    if (e.from >= doc.states.size() || e.to >= doc.states.size())
      throw ModelError("malformed LTS JSON: edge endpoint out of range");
  }
  return doc;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string export_dot(const LtsDocument& doc) {
  std::string out = "digraph lts {\n  node [shape=circle];\n";
  for (const auto& s : doc.states) {
    out += "  s" + std::to_string(s.id) + " [label=\"" + std::to_string(s.id) +
           "\"";
    std::string flags;
    for (const auto& f : s.flags) flags += (flags.empty() ? "" : ",") + f;
    if (!flags.empty()) out += ", flags=\"" + flags + "\"";
    auto has = [&](const char* f) {
      return std::find(s.flags.begin(), s.flags.end(), f) != s.flags.end();
    };
    if (has("terminal-success")) out += ", shape=doublecircle";
    if (has("deadlock") || has("timelock")) out += ", color=red";
    if (has("frontier-cut")) out += ", style=dashed";
    if (s.id == doc.initial) out += ", penwidth=2";
    out += "];\n";
  }
  for (const auto& e : doc.edges) {
    out += "  s" + std::to_string(e.from) + " -> s" + std::to_string(e.to) +
           " [label=\"" + dot_escape(e.label) + "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace chorsem
