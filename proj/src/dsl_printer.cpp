#include "chorsem/dsl.hpp"

namespace chorsem {

std::string print_model(const ChoreographyDef& def) {
  std::string out = "choreography " + def.name + " {\n";
  bool gap = false;
  auto section = [&] {
    if (gap) out += '\n';
    gap = true;
  };

  for (const auto& op : def.op_list) {
    section();
    out += "  op " + op.name + "(";
    for (std::size_t i = 0; i < op.params.size(); ++i)
      out += (i ? ", " : "") + op.params[i];
    out += ") {\n";
    for (const auto& g : op.body) {
      out += "    if " + format(g.guard) + " then " + g.target +
             " := " + format(g.rhs) + ";\n";
    }
    out += "  }\n";
  }

  if (!def.partnerlinks.empty()) {
    section();
    for (const auto& pl : def.partnerlinks)
      out += "  partnerlink " + pl.name + " = (" + pl.sender + " -> " +
             pl.receiver + ");\n";
  }

  for (const auto& o : def.orchestrators) {
    section();
    out += "  orchestrator " + o.id + " {\n";
    if (!o.vars.empty()) {
      out += "    vars ";
      for (std::size_t i = 0; i < o.vars.size(); ++i) {
        out += (i ? ", " : "") + o.vars[i].first + " = " +
               std::to_string(o.vars[i].second);
      }
      out += ";\n";
    }
    out += "    fault " + format(o.fault_handler) + ";\n";
    for (const auto& h : o.handlers) {
      out += "    handler ";
      if (h.at_start) out += "at-start ";
      out += format(h.activity) + ";\n";
    }
    out += "    main = " + format(o.main) + ";\n";
    out += "  }\n";
  }

  const ChorConfig defaults;
  if (!(def.config == defaults)) {
    section();
    out += "  config {\n";
    if (def.config.expiry_target != defaults.expiry_target)
      out += std::string("    expiry-target = ") +
             to_string(def.config.expiry_target) + ";\n";
    if (def.config.open_domain != defaults.open_domain) {
      out += "    open-domain = {";
      for (std::size_t i = 0; i < def.config.open_domain.size(); ++i)
        out += (i ? ", " : "") + std::to_string(def.config.open_domain[i]);
      out += "};\n";
    }
    if (def.config.urgent_internal) out += "    urgent-internal = true;\n";
    out += "  }\n";
  }
  out += "}\n";
  return out;
}

}  // namespace chorsem
