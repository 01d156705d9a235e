#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "uasforge/source.hpp"

namespace uasforge {

enum class TokenKind { keyword, identifier, integer, string, symbol, annex_blob, end_of_file };

struct Token {
  TokenKind kind = TokenKind::end_of_file;
  std::string lexeme;
  SourceLoc loc;

  bool is(TokenKind k) const { return kind == k; }
  /// Case-insensitive keyword test.
  bool is_keyword(std::string_view kw) const;
  bool is_symbol(std::string_view sym) const { return kind == TokenKind::symbol && lexeme == sym; }
  /// Body of an annex blob without the `{**` / `**}` delimiters.
  std::string_view annex_body() const;
};

/// Core mode reserves the modeling-language keywords; annex mode lexes every
/// word as an identifier and leaves keyword recognition to the sub-parser.
enum class LexMode { core, annex };

struct LexResult {
  std::vector<Token> tokens; // always terminated by an end_of_file token
  Diagnostics diagnostics;
};

/// Tokenizes `text`. Never throws on malformed input; problems are reported
/// as diagnostics (UnterminatedString, UnterminatedAnnex, IllegalCharacter)
/// and lexing resumes at the next byte. `base` is added to every offset so
/// annex sub-lexing reports positions inside the enclosing file.
LexResult lex(std::string_view text, LexMode mode = LexMode::core, std::size_t base = 0,
              const SourceUnit *unit = nullptr);

inline LexResult lex(const SourceUnit &unit) { return lex(unit.text(), LexMode::core, 0, &unit); }

bool is_reserved_word(std::string_view word);
bool iequals(std::string_view a, std::string_view b);
std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);

} // namespace uasforge
