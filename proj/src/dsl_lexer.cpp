#include "dsl_lexer.hpp"

#include <cctype>
#include <set>

namespace chorsem {

ParseError::ParseError(const std::string& message, SourcePos pos)
    : ModelError(std::to_string(pos.line) + ":" + std::to_string(pos.column) +
                 ": " + message),
      message_(message),
      pos_(pos) {}

namespace dsl {

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Assign: return "'='";
    case Tok::Eq: return "'=='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::Bang: return "'!'";
    case Tok::Arrow: return "'->'";
    case Tok::ColonEq: return "':='";
    case Tok::End: return "end of input";
  }
  return "?";
}

namespace {

const std::set<std::string> kHyphenated = {"at-start", "expiry-target",
                                           "open-domain", "urgent-internal"};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto peek = [&](std::size_t off) {
    return i + off < text.size() ? text[i + off] : '\0';
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    SourcePos pos{line, col};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      // Merge hyphenated keywords such as at-start.
      if (j < text.size() && text[j] == '-' && j + 1 < text.size() &&
          ident_start(text[j + 1])) {
        std::size_t k = j + 1;
        while (k < text.size() && ident_char(text[k])) ++k;
        if (kHyphenated.count(text.substr(i, k - i))) j = k;
      }
      out.push_back({Tok::Ident, text.substr(i, j - i), pos});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      if (j < text.size() && ident_char(text[j]))
        throw ParseError("malformed number", pos);
      out.push_back({Tok::Int, text.substr(i, j - i), pos});
      advance(j - i);
      continue;
    }
    auto two = [&](char a, char b) { return c == a && peek(1) == b; };
    Tok kind;
    std::size_t len = 2;
    if (two('=', '=')) kind = Tok::Eq;
    else if (two('!', '=')) kind = Tok::Ne;
    else if (two('<', '=')) kind = Tok::Le;
    else if (two('>', '=')) kind = Tok::Ge;
    else if (two('&', '&')) kind = Tok::AndAnd;
    else if (two('|', '|')) kind = Tok::OrOr;
    else if (two('-', '>')) kind = Tok::Arrow;
    else if (two(':', '=')) kind = Tok::ColonEq;
    else {
      len = 1;
      switch (c) {
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case '{': kind = Tok::LBrace; break;
        case '}': kind = Tok::RBrace; break;
        case ',': kind = Tok::Comma; break;
        case ';': kind = Tok::Semi; break;
        case '=': kind = Tok::Assign; break;
        case '<': kind = Tok::Lt; break;
        case '>': kind = Tok::Gt; break;
        case '+': kind = Tok::Plus; break;
        case '-': kind = Tok::Minus; break;
        case '*': kind = Tok::Star; break;
        case '!': kind = Tok::Bang; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'",
                           pos);
      }
    }
    out.push_back({kind, text.substr(i, len), pos});
    advance(len);
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

}  // namespace dsl
}  // namespace chorsem
