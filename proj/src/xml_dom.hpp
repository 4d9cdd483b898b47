#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace chorsem::xml {

struct Element {
  std::string ns;     // namespace URI, empty when unqualified
  std::string local;  // local name
  std::string qname;  // name as written, for messages
  std::map<std::string, std::string> attrs;  // by local name
  std::vector<std::unique_ptr<Element>> children;
  std::string text;  // concatenated character data
  int line = 0;

  const Element* child(const std::string& ns_uri, const std::string& name) const;
  const std::string* attr(const std::string& name) const;
  /// Character data with surrounding whitespace removed.
  std::string trimmed_text() const;
};

/// Parses a document into a tree. Throws ModelError with the line number on
/// malformed XML.
std::unique_ptr<Element> parse(const std::string& text);

}  // namespace chorsem::xml
