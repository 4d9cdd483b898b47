#pragma once

#include <string>
#include <vector>

#include "chorsem/dsl.hpp"

namespace chorsem::dsl {

enum class Tok {
  Ident,
  Int,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Semi,
  Assign,   // =
  Eq,       // ==
  Ne,       // !=
  Lt,
  Le,
  Gt,
  Ge,
  Plus,
  Minus,
  Star,
  AndAnd,
  OrOr,
  Bang,
  Arrow,    // ->
  ColonEq,  // :=
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

const char* describe(Tok t);

/// Splits `text` into tokens; the last one is End. Throws ParseError.
std::vector<Token> tokenize(const std::string& text);

}  // namespace chorsem::dsl
