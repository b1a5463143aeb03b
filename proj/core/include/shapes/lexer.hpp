#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "shapes/ast.hpp"

namespace shapes {

enum class Tok {
  Ident,
  KwClass,
  KwLayout,
  KwRec,
  KwPools,
  KwLocals,
  KwDef,
  KwNew,
  KwNull,
  KwThis,
  KwNone,
  LShift,    // <<
  RShift,    // >>
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  LParen,
  RParen,
  Colon,
  Semi,
  Comma,
  Plus,
  Assign,    // =
  Dot,
  End,
  Error,
};

struct Token {
  Tok kind;
  std::string text;  // identifier spelling; error message for Tok::Error
  SourcePos pos;
};

const char* token_name(Tok k);

bool is_keyword(std::string_view word);
bool is_identifier(std::string_view word);  // [A-Za-z_][A-Za-z0-9_]* and not a keyword

// Tokenizes the whole input. `//` comments run to end of line. An unexpected
// character yields a single Tok::Error carrying the complaint; the token list
// always ends with Tok::End.
std::vector<Token> lex(std::string_view source);

}  // namespace shapes
