#include "uasforge/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>

namespace uasforge {

namespace {

constexpr std::array<std::string_view, 33> kReserved = {
    "access",     "annex",       "bus",       "connections", "data",       "device",
    "end",        "event",       "extends",   "false",       "features",   "flow",
    "flows",      "implementation", "in",     "memory",      "none",       "out",
    "package",    "parameter",   "port",      "process",     "processor",  "properties",
    "property",   "provides",    "public",    "requires",    "subcomponents", "subprogram",
    "system",     "thread",      "true"};

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_'; }

constexpr std::array<std::string_view, 7> kTwoCharSymbols = {"::", "=>", "->", "..", "<=", ">=", "<>"};
constexpr std::string_view kOneCharSymbols = ";:,.(){}-+*/<>=[]";

class Lexer {
public:
  Lexer(std::string_view text, LexMode mode, std::size_t base, const SourceUnit *unit)
      : text_(text), mode_(mode), base_(base), unit_(unit) {
    if (!unit_) {
      local_starts_.push_back(0);
      for (std::size_t i = 0; i < text_.size(); ++i)
        if (text_[i] == '\n')
          local_starts_.push_back(i + 1);
    }
  }

  LexResult run() {
    while (true) {
      skip_trivia();
      if (pos_ >= text_.size())
        break;
      next_token();
    }
    push(TokenKind::end_of_file, text_.size(), 0);
    return std::move(result_);
  }

private:
  SourceLoc make_loc(std::size_t start, std::size_t len) const {
    SourceLoc loc;
    loc.offset = static_cast<std::uint32_t>(base_ + start);
    loc.length = static_cast<std::uint32_t>(len);
    if (unit_) {
      auto [l, c] = unit_->line_col(base_ + start);
      loc.line = l;
      loc.col = c;
    } else {
      auto it = std::upper_bound(local_starts_.begin(), local_starts_.end(), start);
      const auto line = static_cast<std::size_t>(it - local_starts_.begin());
      loc.line = static_cast<std::uint32_t>(line);
      loc.col = static_cast<std::uint32_t>(start - local_starts_[line - 1] + 1);
    }
    return loc;
  }

  void push(TokenKind kind, std::size_t start, std::size_t len) {
    Token t;
    t.kind = kind;
    t.lexeme = std::string(text_.substr(start, len));
    t.loc = make_loc(start, len);
    result_.tokens.push_back(std::move(t));
  }

  void error(std::size_t start, std::size_t len, std::string msg) {
    Diagnostic d;
    d.message = std::move(msg);
    d.span = make_loc(start, len);
    if (unit_)
      d.file = unit_->path();
    result_.diagnostics.push_back(std::move(d));
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      const auto c = static_cast<unsigned char>(text_[pos_]);
      if (std::isspace(c)) {
        ++pos_;
      } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
        while (pos_ < text_.size() && text_[pos_] != '\n')
          ++pos_;
      } else {
        break;
      }
    }
  }

  void next_token() {
    const std::size_t start = pos_;
    const auto c = static_cast<unsigned char>(text_[pos_]);

    if (is_ident_start(c)) {
      while (pos_ < text_.size() && is_ident_char(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      const auto word = text_.substr(start, pos_ - start);
      const bool kw = mode_ == LexMode::core && is_reserved_word(word);
      push(kw ? TokenKind::keyword : TokenKind::identifier, start, pos_ - start);
      return;
    }

    if (std::isdigit(c)) {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      const auto digits = text_.substr(start, pos_ - start);
      if (digits.size() > 18)
        error(start, digits.size(), "integer literal out of range");
      push(TokenKind::integer, start, pos_ - start);
      return;
    }

    if (c == '"') {
      ++pos_;
      bool closed = false;
      while (pos_ < text_.size()) {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
          pos_ += 2;
          continue;
        }
        if (text_[pos_] == '"') {
          ++pos_;
          closed = true;
          break;
        }
        if (text_[pos_] == '\n')
          break;
        ++pos_;
      }
      if (!closed) {
        error(start, pos_ - start, "unterminated string literal");
        return;
      }
      push(TokenKind::string, start, pos_ - start);
      return;
    }

    if (mode_ == LexMode::core && text_.substr(start, 3) == "{**") {
      const auto close = text_.find("**}", start + 3);
      if (close == std::string_view::npos) {
        error(start, text_.size() - start, "unterminated annex block (missing '**}')");
        pos_ = text_.size();
        return;
      }
      pos_ = close + 3;
      push(TokenKind::annex_blob, start, pos_ - start);
      return;
    }

    for (auto sym : kTwoCharSymbols) {
      if (text_.substr(start, 2) == sym) {
        pos_ += 2;
        push(TokenKind::symbol, start, 2);
        return;
      }
    }
    if (kOneCharSymbols.find(static_cast<char>(c)) != std::string_view::npos) {
      ++pos_;
      push(TokenKind::symbol, start, 1);
      return;
    }

    ++pos_;
    error(start, 1, "illegal character");
  }

  std::string_view text_;
  LexMode mode_;
  std::size_t base_;
  const SourceUnit *unit_;
  std::vector<std::size_t> local_starts_;
  std::size_t pos_ = 0;
  LexResult result_;
};

} // namespace

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string to_upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

bool is_reserved_word(std::string_view word) {
  const auto lower = to_lower(word);
  return std::find(kReserved.begin(), kReserved.end(), lower) != kReserved.end();
}

bool Token::is_keyword(std::string_view kw) const {
  return (kind == TokenKind::keyword || kind == TokenKind::identifier) && iequals(lexeme, kw);
}

std::string_view Token::annex_body() const {
  std::string_view v = lexeme;
  if (kind != TokenKind::annex_blob || v.size() < 6)
    return {};
  return v.substr(3, v.size() - 6);
}

LexResult lex(std::string_view text, LexMode mode, std::size_t base, const SourceUnit *unit) {
  return Lexer(text, mode, base, unit).run();
}

} // namespace uasforge
