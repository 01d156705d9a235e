#include "uasforge/claims.hpp"
#include "uasforge/error.hpp"
#include "uasforge/lexer.hpp"
#include "uasforge/parser.hpp"

namespace uasforge {

std::string_view claim_library_text() {
  static constexpr std::string_view text =
#include "claim_library.inc"
      ;
  return text;
}

const ClaimAnnex &claim_library() {
  static const ClaimAnnex lib = [] {
    auto file = parse_model_text(claim_library_text(), "claims/security.uadl");
    if (!file.ok())
      throw DiagnosticError("ParseError", file.diagnostics);
    ClaimAnnex out;
    for (const auto &unit : file.value->units) {
      const auto *pkg = std::get_if<Package>(&unit);
      if (!pkg)
        continue;
      for (const auto &decl : pkg->declarations) {
        const auto *t = std::get_if<ComponentType>(&decl);
        if (!t)
          continue;
        for (const auto &a : t->annexes) {
          if (!iequals(a.language, "resolute"))
            continue;
            auto r = parse_claim_annex(a.body);
            if (!r.ok())
              throw DiagnosticError("ParseError", r.diagnostics);
          for (auto &c : r.value->claims)
            out.claims.push_back(std::move(c));
        }
      }
    }
    return out;
  }();
  return lib;
}

const std::map<std::string, int> &library_claim_signatures() {
  static const std::map<std::string, int> sigs = [] {
    std::map<std::string, int> m;
    for (const auto &c : claim_library().claims)
      m[c.name] = static_cast<int>(c.params.size());
    return m;
  }();
  return sigs;
}

} // namespace uasforge
