#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uasforge/ast.hpp"
#include "uasforge/lexer.hpp"
#include "uasforge/source.hpp"

namespace uasforge {

template <class T> struct ParseResult {
  std::optional<T> value;
  Diagnostics diagnostics;

  bool ok() const { return value.has_value() && !has_errors(diagnostics); }
};

/// Parses every package and property set in a model file.
ParseResult<ModelFile> parse_model(const SourceUnit &unit);
ParseResult<ModelFile> parse_model_text(std::string_view text, std::string path = "<input>");

/// Parses a token stream holding exactly one package.
ParseResult<Package> parse_package(const std::vector<Token> &tokens, const SourceUnit *unit = nullptr);

/// Canonical text form. Parsing the output yields a structurally equal AST.
std::string pretty_print(const Package &pkg);
std::string pretty_print(const PropertySet &set);
std::string pretty_print(const ModelFile &file);

} // namespace uasforge
