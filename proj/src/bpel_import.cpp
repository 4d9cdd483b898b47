#include "chorsem/bpel_import.hpp"

#include <json.hpp>

#include "chorsem/dsl.hpp"
#include "xml_dom.hpp"

namespace chorsem {

std::map<std::string, std::string> default_namespaces() {
  return {
      {"bpel", "http://docs.oasis-open.org/wsbpel/2.0/process/executable"},
      {"wsrp", "http://docs.oasis-open.org/wsrf/rp-2"},
      {"wsrl", "http://docs.oasis-open.org/wsrf/rl-2"},
      {"wsnt", "http://docs.oasis-open.org/wsn/b-2"},
  };
}

const std::vector<std::string>& conversion_rows() {
  static const std::vector<std::string> rows = {
      "process", "throw",    "receive",  "reply",      "invoke",
      "empty",   "exit",     "assign",   "wait",       "sequence",
      "flow",    "while",    "pick",     "factory",    "getProp",
      "setProp", "setTimeout", "subscribe", "notify"};
  return rows;
}

Bindings parse_bindings(const std::string& text) {
  Bindings b;
  b.namespaces = default_namespaces();
  try {
    auto j = nlohmann::json::parse(text);
    if (j.contains("choreography"))
      b.choreography = j["choreography"].get<std::string>();
    if (j.contains("partnerLinks")) {
      for (const auto& pl : j["partnerLinks"])
        b.partnerlinks.push_back({pl.at("name").get<std::string>(),
                                  pl.at("sender").get<std::string>(),
                                  pl.at("receiver").get<std::string>(),
                                  {}});
    }
    if (j.contains("operations"))
      b.operations = j["operations"].get<std::vector<std::string>>();
    if (j.contains("variables")) {
      for (const auto& [orch, vars] : j["variables"].items())
        b.variables[orch] = vars.get<std::map<std::string, Value>>();
    }
    if (j.contains("factories")) {
      for (const auto& [name, f] : j["factories"].items()) {
        FactoryBinding fb;
        fb.epr = f.at("epr").get<std::string>();
        fb.value = f.value("value", Value{0});
        fb.timeout = f.value("timeout", Value{1});
        fb.handler = f.value("handler", std::string("empty"));
        b.factories[name] = fb;
      }
    }
    if (j.contains("namespaces")) {
      for (const auto& [prefix, uri] : j["namespaces"].items())
        b.namespaces[prefix] = uri.get<std::string>();
    }
    if (j.contains("config")) {
      const auto& c = j["config"];
      if (c.contains("expiry-target")) {
        auto t = parse_expiry_target(c["expiry-target"].get<std::string>());
        if (!t) throw ImportError("bad expiry-target in bindings", 0);
        b.config.expiry_target = *t;
      }
      if (c.contains("open-domain"))
        b.config.open_domain = c["open-domain"].get<std::vector<Value>>();
      if (c.contains("urgent-internal"))
        b.config.urgent_internal = c["urgent-internal"].get<bool>();
    }
    if (j.contains("processes"))
      b.processes = j["processes"].get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ImportError(std::string("malformed bindings: ") + e.what(), 0);
  }
  return b;
}

namespace {

using xml::Element;

std::string strip_dollars(std::string s) {
  std::erase(s, '$');
  return s;
}

class Importer {
 public:
  Importer(const Bindings& b, std::set<std::string>* rows)
      : b_(b), rows_(rows) {
    auto uri = [&](const char* p) {
      auto it = b.namespaces.find(p);
      return it == b.namespaces.end() ? std::string() : it->second;
    };
    bpel_ = uri("bpel");
    wsrp_ = uri("wsrp");
    wsrl_ = uri("wsrl");
    wsnt_ = uri("wsnt");
    for (const auto& text : b.operations) {
      try {
        OpDef op = parse_op(text);
        ops_.insert(op.name);
      } catch (const ParseError& e) {
        throw ImportError("operation binding: " + std::string(e.what()), 0);
      }
    }
  }

  OrchestratorDef process(const Element& root) {
    if (!is_bpel(root) || root.local != "process")
      throw UnsupportedElement(root.qname, root.line,
                               "expected a <process> root");
    row("process");
    OrchestratorDef o;
    o.pos = {root.line, 1};
    const std::string* name = root.attr("name");
    if (!name || name->empty())
      throw ImportError("<process> needs a name attribute", root.line);
    o.id = *name;
    current_ = o.id;
    std::map<std::string, Value> initial;
    if (auto it = b_.variables.find(o.id); it != b_.variables.end())
      initial = it->second;
    std::vector<const Element*> body;
    for (const auto& c : root.children) {
      if (!is_bpel(*c)) {
        body.push_back(c.get());
        continue;
      }
      if (c->local == "partnerLinks" || c->local == "documentation") continue;
      if (c->local == "variables") {
        for (const auto& v : c->children) {
          if (!is_bpel(*v) || v->local != "variable")
            throw UnsupportedElement(v->qname, v->line);
          const std::string* vn = v->attr("name");
          if (!vn) throw ImportError("<variable> needs a name", v->line);
          auto it = initial.find(*vn);
          o.vars.emplace_back(*vn, it == initial.end() ? 0 : it->second);
        }
      } else if (c->local == "faultHandlers") {
        o.fault_handler = fault_handlers(*c);
      } else if (c->local == "eventHandlers") {
        for (const auto& h : c->children) {
          DeclaredHandler dh;
          const std::string* at = h->attr("atStart");
          dh.at_start = at && (*at == "yes" || *at == "true");
          dh.activity = activity(*h);
          o.handlers.push_back(std::move(dh));
        }
      } else {
        body.push_back(c.get());
      }
    }
    for (const auto& [var, v] : initial) {
      bool found = false;
      for (const auto& d : o.vars) found = found || d.first == var;
      if (!found)
        throw ImportError("binding sets undeclared variable '" + var +
                              "' of '" + o.id + "'",
                          root.line);
    }
    o.main = Activity::seq_of(activities(body));
    return o;
  }

 private:
  const Bindings& b_;
  std::set<std::string>* rows_;
  std::string bpel_, wsrp_, wsrl_, wsnt_;
  std::set<std::string> ops_;
  std::string current_;

  void row(const char* r) {
    if (rows_) rows_->insert(r);
  }

  bool is_bpel(const Element& e) const { return e.ns.empty() || e.ns == bpel_; }

  const std::string& need_attr(const Element& e, const char* name) const {
    const std::string* v = e.attr(name);
    if (!v || v->empty())
      throw ImportError("<" + e.qname + "> needs attribute '" + name + "'",
                        e.line);
    return *v;
  }

  void need_pl(const std::string& pl, int line) const {
    for (const auto& p : b_.partnerlinks)
      if (p.name == pl) return;
    throw MissingBinding("partnerLink '" + pl + "'", line);
  }

  void need_op(const std::string& op, int line) const {
    if (!ops_.count(op)) throw MissingBinding("operation '" + op + "'", line);
  }

  Value integer(const std::string& raw, int line) const {
    std::string s = raw;
    std::erase(s, '\'');
    std::erase(s, '"');
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    if (b == std::string::npos) throw ImportError("expected an integer", line);
    s = s.substr(b, e - b + 1);
    try {
      std::size_t used = 0;
      long long v = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ImportError("expected an integer, found '" + s + "'", line);
    }
  }

  Expr expr(const std::string& text, int line) const {
    try {
      return parse_expr(strip_dollars(text));
    } catch (const ParseError& e) {
      throw ImportError("expression '" + text + "': " + e.message(), line);
    }
  }

  Cond cond(const std::string& text, int line) const {
    try {
      return parse_cond(strip_dollars(text));
    } catch (const ParseError& e) {
      throw ImportError("condition '" + text + "': " + e.message(), line);
    }
  }

  // Exactly one activity child (ignoring the listed helper elements).
  Activity only_activity(const Element& e,
                         std::initializer_list<const char*> skip = {}) {
    std::vector<const Element*> kids;
    for (const auto& c : e.children) {
      bool skipped = false;
      for (const char* s : skip)
        skipped = skipped || (is_bpel(*c) && c->local == s);
      if (!skipped) kids.push_back(c.get());
    }
    if (kids.empty()) return Activity::empty({e.line, 1});
    return Activity::seq_of(activities(kids));
  }

  Activity fault_handlers(const Element& e) {
    std::vector<const Element*> catches;
    for (const auto& c : e.children) {
      if (is_bpel(*c) && (c->local == "catch" || c->local == "catchAll"))
        catches.push_back(c.get());
      else
        throw UnsupportedElement(c->qname, c->line);
    }
    if (catches.empty()) return Activity();
    if (catches.size() > 1)
      throw UnsupportedElement(catches[1]->qname, catches[1]->line,
                               "only one fault handler per process");
    return only_activity(*catches[0]);
  }

  bool is_factory_invoke(const Element& e) const {
    if (!is_bpel(e) || e.local != "invoke") return false;
    const std::string* op = e.attr("operation");
    return op && *op == "CreateResource";
  }

  bool copies_to_factory(const Element& e, const std::string& factory) const {
    if (!is_bpel(e) || e.local != "assign") return false;
    for (const auto& copy : e.children) {
      const Element* to = copy->child(copy->ns, "to");
      if (!to) continue;
      const std::string* pl = to->attr("partnerLink");
      if (pl && *pl == factory) return true;
      if (to->text.find(factory) != std::string::npos) return true;
    }
    return false;
  }

  std::vector<Activity> activities(const std::vector<const Element*>& kids) {
    std::vector<Activity> out;
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const Element& e = *kids[i];
      if (is_bpel(e) && e.local == "documentation") continue;
      if (is_factory_invoke(e)) {
        const std::string& factory = need_attr(e, "partnerLink");
        out.push_back(create_resource(e, factory));
        if (i + 1 < kids.size() && copies_to_factory(*kids[i + 1], factory)) ++i;
        continue;
      }
      out.push_back(activity(e));
    }
    return out;
  }

  std::vector<const Element*> children_of(const Element& e) const {
    std::vector<const Element*> out;
    for (const auto& c : e.children) out.push_back(c.get());
    return out;
  }

  Activity create_resource(const Element& e, const std::string& factory) {
    auto it = b_.factories.find(factory);
    if (it == b_.factories.end())
      throw MissingBinding("factory '" + factory + "'", e.line);
    row("factory");
    const FactoryBinding& f = it->second;
    Activity handler;
    try {
      handler = parse_activity(f.handler);
    } catch (const ParseError& err) {
      throw ImportError("factory '" + factory + "' handler: " + err.message(),
                        e.line);
    }
    return Activity::create_resource(f.epr, f.value, f.timeout, handler,
                                     {e.line, 1});
  }

  Activity activity(const Element& e) {
    SourcePos pos{e.line, 1};
    if (e.ns == wsrp_) return wsrp(e, pos);
    if (e.ns == wsrl_) return wsrl(e, pos);
    if (e.ns == wsnt_) return wsnt(e, pos);
    if (!is_bpel(e)) throw UnsupportedElement(e.qname, e.line);
    const std::string& n = e.local;
    if (n == "throw" || n == "rethrow") {
      row("throw");
      return Activity::throw_(pos);
    }
    if (n == "receive") {
      row("receive");
      const std::string& pl = need_attr(e, "partnerLink");
      const std::string& op = need_attr(e, "operation");
      need_pl(pl, e.line);
      need_op(op, e.line);
      return Activity::receive(pl, op, need_attr(e, "variable"), pos);
    }
    if (n == "reply") {
      row("reply");
      const std::string& pl = need_attr(e, "partnerLink");
      need_pl(pl, e.line);
      return Activity::reply(pl, need_attr(e, "variable"), pos);
    }
    if (n == "invoke") {
      if (is_factory_invoke(e))
        return create_resource(e, need_attr(e, "partnerLink"));
      row("invoke");
      const std::string& pl = need_attr(e, "partnerLink");
      const std::string& op = need_attr(e, "operation");
      need_pl(pl, e.line);
      need_op(op, e.line);
      Activity inv = Activity::invoke(pl, op, need_attr(e, "inputVariable"), pos);
      const std::string* out = e.attr("outputVariable");
      if (!out || out->empty()) return inv;
      return Activity::seq(inv, Activity::reply_bar(pl, *out, pos), pos);
    }
    if (n == "empty") {
      row("empty");
      return Activity::empty(pos);
    }
    if (n == "exit") {
      row("exit");
      return Activity::exit(pos);
    }
    if (n == "assign") return assign(e);
    if (n == "wait") {
      row("wait");
      const Element* f = e.child(e.ns, "for");
      if (!f) throw UnsupportedElement(e.qname, e.line, "only <for> waits");
      return Activity::wait(integer(f->text, f->line), pos);
    }
    if (n == "sequence") {
      row("sequence");
      return Activity::seq_of(activities(children_of(e)));
    }
    if (n == "flow") {
      row("flow");
      std::vector<Activity> parts;
      for (const auto& c : e.children) {
        if (is_bpel(*c) && c->local == "documentation") continue;
        parts.push_back(activity(*c));
      }
      return Activity::par_of(parts);
    }
    if (n == "while") {
      row("while");
      const Element* c = e.child(e.ns, "condition");
      if (!c) throw ImportError("<while> needs a <condition>", e.line);
      return Activity::while_(cond(c->text, c->line),
                              only_activity(e, {"condition"}), pos);
    }
    if (n == "pick") return pick(e);
    if (n == "scope" || n == "compensate" || n == "compensateScope" ||
        n == "terminationHandler" || n == "compensationHandler")
      throw UnsupportedElement(e.qname, e.line,
                               "scopes and compensation are not supported");
    throw UnsupportedElement(e.qname, e.line);
  }

  Activity assign(const Element& e) {
    row("assign");
    std::vector<Activity> parts;
    for (const auto& copy : e.children) {
      if (!is_bpel(*copy) || copy->local != "copy")
        throw UnsupportedElement(copy->qname, copy->line);
      const Element* from = copy->child(copy->ns, "from");
      const Element* to = copy->child(copy->ns, "to");
      if (!from || !to)
        throw ImportError("<copy> needs <from> and <to>", copy->line);
      Expr value;
      if (const std::string* v = from->attr("variable"))
        value = Expr::variable(*v, {from->line, 1});
      else if (const std::string* x = from->attr("expression"))
        value = expr(*x, from->line);
      else
        value = expr(from->text, from->line);
      std::string target;
      if (const std::string* v = to->attr("variable")) target = *v;
      else target = to->trimmed_text();
      if (target.empty()) throw ImportError("<to> names no variable", to->line);
      parts.push_back(Activity::assign(value, target, {copy->line, 1}));
    }
    if (parts.empty()) throw ImportError("<assign> without <copy>", e.line);
    return Activity::seq_of(parts);
  }

  Activity pick(const Element& e) {
    row("pick");
    std::vector<PickBranch> branches;
    std::optional<Activity> alarm;
    Value timeout = 0;
    for (const auto& c : e.children) {
      if (is_bpel(*c) && c->local == "onMessage") {
        PickBranch b;
        b.pl = need_attr(*c, "partnerLink");
        b.op = need_attr(*c, "operation");
        b.var = need_attr(*c, "variable");
        need_pl(b.pl, c->line);
        need_op(b.op, c->line);
        b.body = only_activity(*c);
        branches.push_back(std::move(b));
      } else if (is_bpel(*c) && c->local == "onAlarm") {
        if (alarm)
          throw UnsupportedElement(c->qname, c->line, "only one <onAlarm>");
        const Element* f = c->child(c->ns, "for");
        if (!f) throw UnsupportedElement(c->qname, c->line, "only <for> alarms");
        timeout = integer(f->text, f->line);
        alarm = only_activity(*c, {"for"});
      } else if (!(is_bpel(*c) && c->local == "documentation")) {
        throw UnsupportedElement(c->qname, c->line);
      }
    }
    if (!alarm) throw ImportError("<pick> needs an <onAlarm>", e.line);
    return Activity::pick(std::move(branches), *alarm, timeout, {e.line, 1});
  }

  std::string resource_of(const Element& e) const {
    if (const std::string* r = e.attr("resource")) return *r;
    std::string t = e.trimmed_text();
    if (t.empty())
      throw ImportError("<" + e.qname + "> names no resource", e.line);
    return t;
  }

  Activity wsrp(const Element& e, SourcePos pos) {
    if (e.local == "GetResourceProperty") {
      row("getProp");
      return Activity::get_prop(resource_of(e), need_attr(e, "variable"), pos);
    }
    if (e.local == "SetResourceProperties") {
      const Element* up = e.child(wsrp_, "Update");
      if (!up) throw UnsupportedElement(e.qname, e.line, "only <Update>");
      row("setProp");
      const std::string* r = e.attr("resource");
      if (!r) throw ImportError("<" + e.qname + "> needs attribute 'resource'", e.line);
      return Activity::set_prop(*r, expr(up->text, up->line), pos);
    }
    throw UnsupportedElement(e.qname, e.line);
  }

  Activity wsrl(const Element& e, SourcePos pos) {
    if (e.local == "SetTerminationTime") {
      const Element* t = e.child(wsrl_, "RequestedTerminationTime");
      if (!t)
        throw ImportError("<" + e.qname + "> needs <RequestedTerminationTime>",
                          e.line);
      row("setTimeout");
      const std::string* r = e.attr("resource");
      if (!r) throw ImportError("<" + e.qname + "> needs attribute 'resource'", e.line);
      return Activity::set_timeout(*r, integer(t->text, t->line), pos);
    }
    throw UnsupportedElement(e.qname, e.line);
  }

  Activity wsnt(const Element& e, SourcePos pos) {
    if (e.local == "Notify")
      throw UnsupportedElement(
          e.qname, e.line,
          "a notification is a runtime effect (it spawns the associated event "
          "handler), not an activity");
    if (e.local != "Subscribe") throw UnsupportedElement(e.qname, e.line);
    row("subscribe");
    const Element* consumer = e.child(wsnt_, "ConsumerReference");
    const Element* producer = e.child(wsnt_, "ProducerReference");
    if (!consumer || !producer)
      throw ImportError("<" + e.qname +
                            "> needs <ConsumerReference> and <ProducerReference>",
                        e.line);
    std::string epr = producer->trimmed_text();
    Cond rc;
    if (const Element* pre = e.child(wsnt_, "Precondition")) {
      try {
        rc = parse_resource_cond(strip_dollars(pre->text), epr);
      } catch (const ParseError& err) {
        throw ImportError("precondition: " + err.message(), pre->line);
      }
    }
    std::vector<const Element*> handler;
    for (const auto& c : e.children)
      if (c->ns != wsnt_) handler.push_back(c.get());
    Activity h = handler.empty() ? Activity::empty(pos)
                                 : Activity::seq_of(activities(handler));
    return Activity::subscribe(consumer->trimmed_text(), epr, rc, h, pos);
  }
};

}  // namespace

ChoreographyDef import_bpel(const std::vector<ImportUnit>& units,
                            const Bindings& bindings,
                            std::set<std::string>* rows_used) {
  Importer imp(bindings, rows_used);
  ChoreographyDef def;
  def.name = bindings.choreography;
  def.partnerlinks = bindings.partnerlinks;
  for (const auto& text : bindings.operations)
    def.op_list.push_back(parse_op(text));
  def.index_ops();
  def.config = bindings.config;
  for (const auto& u : units) {
    std::unique_ptr<xml::Element> root;
    try {
      root = xml::parse(u.xml);
    } catch (const ModelError& e) {
      throw ImportError(u.path.empty() ? e.what() : u.path + ": " + e.what(), 0);
    }
    def.orchestrators.push_back(imp.process(*root));
  }
  return def;
}

}  // namespace chorsem
