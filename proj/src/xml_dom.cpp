#include "xml_dom.hpp"

#include <expat.h>

#include "chorsem/model.hpp"

namespace chorsem::xml {

const Element* Element::child(const std::string& ns_uri,
                              const std::string& name) const {
  for (const auto& c : children)
    if (c->ns == ns_uri && c->local == name) return c.get();
  return nullptr;
}

const std::string* Element::attr(const std::string& name) const {
  auto it = attrs.find(name);
  return it == attrs.end() ? nullptr : &it->second;
}

std::string Element::trimmed_text() const {
  auto b = text.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = text.find_last_not_of(" \t\r\n");
  return text.substr(b, e - b + 1);
}

namespace {

constexpr char kSep = '|';

struct Name {
  std::string ns, local, prefix;
};

// Expat reports "uri|local|prefix" for qualified names and "local" otherwise.
Name split(const char* raw) {
  std::string s(raw);
  Name n;
  auto a = s.find(kSep);
  if (a == std::string::npos) {
    n.local = s;
    return n;
  }
  n.ns = s.substr(0, a);
  auto b = s.find(kSep, a + 1);
  if (b == std::string::npos) {
    n.local = s.substr(a + 1);
  } else {
    n.local = s.substr(a + 1, b - a - 1);
    n.prefix = s.substr(b + 1);
  }
  return n;
}

struct Builder {
  XML_Parser parser = nullptr;
  std::unique_ptr<Element> root;
  std::vector<Element*> stack;
};

void on_start(void* data, const XML_Char* name, const XML_Char** atts) {
  auto* b = static_cast<Builder*>(data);
  auto el = std::make_unique<Element>();
  Name n = split(name);
  el->ns = n.ns;
  el->local = n.local;
  el->qname = n.prefix.empty() ? n.local : n.prefix + ":" + n.local;
  el->line = static_cast<int>(XML_GetCurrentLineNumber(b->parser));
  for (int i = 0; atts[i]; i += 2) el->attrs[split(atts[i]).local] = atts[i + 1];
  Element* raw = el.get();
  if (b->stack.empty()) {
    b->root = std::move(el);
  } else {
    b->stack.back()->children.push_back(std::move(el));
  }
  b->stack.push_back(raw);
}

void on_end(void* data, const XML_Char*) {
  static_cast<Builder*>(data)->stack.pop_back();
}

void on_text(void* data, const XML_Char* s, int len) {
  auto* b = static_cast<Builder*>(data);
  if (!b->stack.empty()) b->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

}  // namespace

std::unique_ptr<Element> parse(const std::string& text) {
  Builder b;
  b.parser = XML_ParserCreateNS(nullptr, kSep);
  XML_SetReturnNSTriplet(b.parser, 1);
  XML_SetUserData(b.parser, &b);
  XML_SetElementHandler(b.parser, on_start, on_end);
  XML_SetCharacterDataHandler(b.parser, on_text);
  if (XML_Parse(b.parser, text.data(), static_cast<int>(text.size()), 1) ==
      XML_STATUS_ERROR) {
    std::string msg = "XML line " +
                      std::to_string(XML_GetCurrentLineNumber(b.parser)) +
                      ": " + XML_ErrorString(XML_GetErrorCode(b.parser));
    XML_ParserFree(b.parser);
    throw ModelError(msg);
  }
  XML_ParserFree(b.parser);
  if (!b.root) throw ModelError("XML document has no root element");
  return std::move(b.root);
}

}  // namespace chorsem::xml
