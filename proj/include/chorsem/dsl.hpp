// Text format for choreographies (.brf): parser, validator and printer.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chorsem/choreography.hpp"

namespace chorsem {

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  SourcePos pos;
};

/// "LINE:COL: error: MESSAGE"
std::string to_string(const Diagnostic& d);

class ParseError : public ModelError {
 public:
  ParseError(const std::string& message, SourcePos pos);
  const SourcePos& pos() const { return pos_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  SourcePos pos_;
};

/// Parses a whole model. Throws ParseError on syntax errors and duplicate
/// declarations. The result is not validated.
ChoreographyDef parse_model(const std::string& text);

/// Parses a single activity term (no model context).
Activity parse_activity(const std::string& text);
Expr parse_expr(const std::string& text);
Cond parse_cond(const std::string& text);
/// Resource condition for `epr`; the resource id may stand for EPR.
Cond parse_resource_cond(const std::string& text, const std::string& epr);
/// `op NAME(PARAMS) { if COND then VAR := EXPR; ... }`
OpDef parse_op(const std::string& text);

std::vector<Diagnostic> validate_model(const ChoreographyDef& def);

bool has_errors(const std::vector<Diagnostic>& diags);

/// Canonical text; parse_model(print_model(d)) == d.
std::string print_model(const ChoreographyDef& def);

struct SourceModel {
  std::string path;
  std::string text;
  std::optional<ChoreographyDef> def;
  std::vector<Diagnostic> diagnostics;
};

/// Parses and validates `text`. Parse errors leave `def` empty.
SourceModel load_model_text(std::string text, std::string path = {});

}  // namespace chorsem
