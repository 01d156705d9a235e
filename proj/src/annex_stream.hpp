#pragma once

// Token cursor shared by the annex sub-parsers.

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "uasforge/lexer.hpp"
#include "uasforge/source.hpp"

namespace uasforge::detail {

struct AnnexSyntaxError {};

class AnnexStream {
public:
  AnnexStream(std::string_view body, std::size_t base, const SourceUnit *unit) : unit_(unit) {
    auto lexed = lex(body, LexMode::annex, base, unit);
    toks_ = std::move(lexed.tokens);
    diags_ = std::move(lexed.diagnostics);
  }

  const Token &peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token &advance() {
    const Token &t = peek();
    if (pos_ < toks_.size() - 1)
      ++pos_;
    return t;
  }
  bool at_eof() const { return peek().kind == TokenKind::end_of_file; }
  std::size_t position() const { return pos_; }

  bool accept_symbol(std::string_view s) {
    if (!peek().is_symbol(s))
      return false;
    advance();
    return true;
  }
  bool accept_word(std::string_view w) {
    if (peek().kind != TokenKind::identifier || !iequals(peek().lexeme, w))
      return false;
    advance();
    return true;
  }
  bool at_word(std::string_view w, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::identifier && iequals(peek(ahead).lexeme, w);
  }

  void error_at(const SourceLoc &loc, std::string msg) {
    Diagnostic d;
    d.message = std::move(msg);
    d.span = loc;
    if (unit_)
      d.file = unit_->path();
    diags_.push_back(std::move(d));
  }

  [[noreturn]] void fail(const std::string &expected) {
    const Token &t = peek();
    const std::string found = t.kind == TokenKind::end_of_file ? "end of annex" : "'" + t.lexeme + "'";
    error_at(t.loc, "expected " + expected + ", found " + found);
    throw AnnexSyntaxError{};
  }

  void expect_symbol(std::string_view s) {
    if (!accept_symbol(s))
      fail("'" + std::string(s) + "'");
  }
  void expect_word(std::string_view w) {
    if (!accept_word(w))
      fail("'" + std::string(w) + "'");
  }
  std::string expect_ident(std::string_view what = "identifier") {
    if (peek().kind != TokenKind::identifier)
      fail(std::string(what));
    return advance().lexeme;
  }
  std::string expect_string() {
    if (peek().kind != TokenKind::string)
      fail("string literal");
    return unquote(advance().lexeme);
  }
  std::int64_t expect_int() {
    if (peek().kind != TokenKind::integer)
      fail("integer");
    const auto &lex = advance().lexeme;
    std::int64_t v = 0;
    std::from_chars(lex.data(), lex.data() + lex.size(), v);
    return v;
  }

  void resync_after(std::string_view sym) {
    while (!at_eof()) {
      if (advance().is_symbol(sym))
        return;
    }
  }

  Diagnostics &diagnostics() { return diags_; }

  static std::string unquote(std::string_view lit) {
    std::string out;
    for (std::size_t i = 1; i + 1 < lit.size(); ++i) {
      if (lit[i] == '\\' && i + 2 < lit.size())
        ++i;
      out += lit[i];
    }
    return out;
  }

  static std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\')
        out += '\\';
      out += c;
    }
    return out + "\"";
  }

private:
  const SourceUnit *unit_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Diagnostics diags_;
};

} // namespace uasforge::detail
