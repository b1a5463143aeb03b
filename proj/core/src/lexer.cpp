#include "shapes/lexer.hpp"

#include <array>
#include <cctype>
#include <utility>

namespace shapes {

namespace {

constexpr std::array<std::pair<std::string_view, Tok>, 11> kKeywords{{
    {"class", Tok::KwClass},
    {"layout", Tok::KwLayout},
    {"rec", Tok::KwRec},
    {"pools", Tok::KwPools},
    {"locals", Tok::KwLocals},
    {"def", Tok::KwDef},
    {"new", Tok::KwNew},
    {"null", Tok::KwNull},
    {"this", Tok::KwThis},
    {"none", Tok::KwNone},
}};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

const char* token_name(Tok k) {
  switch (k) {
    case Tok::Ident: return "identifier";
    case Tok::KwClass: return "'class'";
    case Tok::KwLayout: return "'layout'";
    case Tok::KwRec: return "'rec'";
    case Tok::KwPools: return "'pools'";
    case Tok::KwLocals: return "'locals'";
    case Tok::KwDef: return "'def'";
    case Tok::KwNew: return "'new'";
    case Tok::KwNull: return "'null'";
    case Tok::KwThis: return "'this'";
    case Tok::KwNone: return "'none'";
    case Tok::LShift: return "'<<'";
    case Tok::RShift: return "'>>'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Colon: return "':'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::Plus: return "'+'";
    case Tok::Assign: return "'='";
    case Tok::Dot: return "'.'";
    case Tok::End: return "end of input";
    case Tok::Error: return "invalid input";
  }
  return "?";
}

bool is_keyword(std::string_view word) {
  for (const auto& [kw, _] : kKeywords)
    if (kw == word) return true;
  return false;
}

bool is_identifier(std::string_view word) {
  if (word.empty() || !ident_start(word[0])) return false;
  for (char c : word)
    if (!ident_char(c)) return false;
  return !is_keyword(word);
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](Tok k, std::string text, SourcePos pos) {
    out.push_back(Token{k, std::move(text), pos});
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;  // newline handled above
    }
    SourcePos pos{line, col};
    if (ident_start(c)) {
      size_t start = i;
      while (i < src.size() && ident_char(src[i])) ++i;
      std::string word(src.substr(start, i - start));
      col += static_cast<int>(i - start);
      Tok kind = Tok::Ident;
      for (const auto& [kw, k] : kKeywords)
        if (kw == word) {
          kind = k;
          break;
        }
      push(kind, std::move(word), pos);
      continue;
    }
    if (c == '<' && i + 1 < src.size() && src[i + 1] == '<') {
      push(Tok::LShift, "<<", pos);
      i += 2;
      col += 2;
      continue;
    }
    if (c == '>' && i + 1 < src.size() && src[i + 1] == '>') {
      push(Tok::RShift, ">>", pos);
      i += 2;
      col += 2;
      continue;
    }
    Tok single = Tok::Error;
    switch (c) {
      case '{': single = Tok::LBrace; break;
      case '}': single = Tok::RBrace; break;
      case '[': single = Tok::LBracket; break;
      case ']': single = Tok::RBracket; break;
      case '(': single = Tok::LParen; break;
      case ')': single = Tok::RParen; break;
      case ':': single = Tok::Colon; break;
      case ';': single = Tok::Semi; break;
      case ',': single = Tok::Comma; break;
      case '+': single = Tok::Plus; break;
      case '=': single = Tok::Assign; break;
      case '.': single = Tok::Dot; break;
      default: break;
    }
    if (single != Tok::Error) {
      push(single, std::string(1, c), pos);
      ++i;
      ++col;
      continue;
    }
    push(Tok::Error, std::string("unexpected character '") + c + "'", pos);
    push(Tok::End, "", pos);
    return out;
  }
  push(Tok::End, "", SourcePos{line, col});
  return out;
}

}  // namespace shapes
