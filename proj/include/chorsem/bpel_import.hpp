// Importer for a WS-BPEL / WSRF XML subset. Each process document becomes
// one orchestrator; a JSON bindings file supplies what the XML leaves open
// (partnerlink roles, operation bodies, initial values, factory settings).

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "chorsem/choreography.hpp"

namespace chorsem {

class ImportError : public ModelError {
 public:
  ImportError(const std::string& message, int line)
      : ModelError(line > 0 ? "line " + std::to_string(line) + ": " + message
                            : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class UnsupportedElement : public ImportError {
 public:
  UnsupportedElement(const std::string& element, int line,
                     const std::string& why = {})
      : ImportError("unsupported element <" + element + ">" +
                        (why.empty() ? "" : ": " + why),
                    line),
        element_(element) {}
  const std::string& element() const { return element_; }

 private:
  std::string element_;
};

class MissingBinding : public ImportError {
 public:
  MissingBinding(const std::string& what, int line)
      : ImportError("missing binding for " + what, line) {}
};

struct FactoryBinding {
  std::string epr;
  Value value = 0;
  Value timeout = 1;
  /// Expiry handler in model syntax.
  std::string handler = "empty";
};

struct Bindings {
  std::string choreography = "imported";
  std::vector<PartnerLink> partnerlinks;
  /// Operation definitions in model syntax.
  std::vector<std::string> operations;
  /// Initial values per orchestrator; undeclared entries default to 0.
  std::map<std::string, std::map<std::string, Value>> variables;
  /// Keyed by factory partnerLink name.
  std::map<std::string, FactoryBinding> factories;
  /// Prefix -> namespace URI for the WSRF/WSN vocabularies.
  std::map<std::string, std::string> namespaces;
  ChorConfig config;
  /// Process documents, relative to the bindings file.
  std::vector<std::string> processes;
};

/// Default prefix table (wsrp, wsrl, wsnt, bpel).
std::map<std::string, std::string> default_namespaces();

/// Throws ImportError on malformed bindings.
Bindings parse_bindings(const std::string& json);

struct ImportUnit {
  std::string path;
  std::string xml;
};

/// Row names of the conversion table recognised by the importer.
const std::vector<std::string>& conversion_rows();

/// Builds a choreography. `rows_used`, when given, receives the names of the
/// conversion rows that matched.
ChoreographyDef import_bpel(const std::vector<ImportUnit>& units,
                            const Bindings& bindings,
                            std::set<std::string>* rows_used = nullptr);

}  // namespace chorsem
