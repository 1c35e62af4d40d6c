#pragma once

#include <map>
#include <string>
#include <vector>

#include "jsvp/js/functions.hpp"

namespace jsvp::metrics {

// Project-wide function reference: file index and function index.
struct FunctionRef {
  std::size_t file = 0;
  int function = 0;
  friend bool operator==(const FunctionRef&, const FunctionRef&) = default;
  friend auto operator<=>(const FunctionRef&, const FunctionRef&) = default;
};

struct CallSite {
  FunctionRef caller;
  std::string callee;  // simple name at the call
  std::size_t token = 0;
  std::vector<FunctionRef> targets;
};

struct Invocations {
  std::vector<std::vector<double>> incoming;  // NII per file, per function
  std::vector<std::vector<double>> outgoing;  // NOI per file, per function
  std::vector<CallSite> sites;                // resolved sites only
  std::size_t edges = 0;                      // sum of targets over sites
};

// Call sites in a function's own tokens: `name (` or `.name (`, where `name`
// is not the name of a function being defined there.
inline std::vector<std::pair<std::size_t, std::string>> call_names(const js::Inventory& inv, const js::FunctionInfo& f) {
  std::vector<bool> defining(inv.size(), false);
  for (const auto& g : inv.functions) {
    if (g.name_token != js::npos && g.name_token < defining.size()) defining[g.name_token] = true;
  }
  std::vector<std::pair<std::size_t, std::string>> out;
  for (std::size_t p : inv.own_tokens(f)) {
    const auto& t = inv.sig(p);
    if (t.kind != js::TokenKind::Identifier || !inv.sig(p + 1).is_punct("(")) continue;
    if (defining[p]) continue;
    if (p > 0 && inv.sig(p - 1).is_keyword("function")) continue;
    out.emplace_back(p, t.lexeme);
  }
  return out;
}

// Name-based call resolution. A call is resolved against functions declared
// directly in the enclosing scopes, innermost first, then the file's top
// level, and finally every project function with the same simple name. All
// candidates found at the first level that has any are credited.
inline Invocations invocations(const std::vector<const js::Inventory*>& files) {
  Invocations out;
  out.incoming.resize(files.size());
  out.outgoing.resize(files.size());
  std::map<std::string, std::vector<FunctionRef>> by_name;
  for (std::size_t fi = 0; fi < files.size(); ++fi) {
    const auto& inv = *files[fi];
    out.incoming[fi].assign(inv.functions.size(), 0.0);
    out.outgoing[fi].assign(inv.functions.size(), 0.0);
    for (std::size_t k = 0; k < inv.functions.size(); ++k) {
      if (!inv.functions[k].name.empty()) by_name[inv.functions[k].name].push_back({fi, static_cast<int>(k)});
    }
  }

  for (std::size_t fi = 0; fi < files.size(); ++fi) {
    const auto& inv = *files[fi];
    std::vector<int> top_level;
    for (std::size_t k = 0; k < inv.functions.size(); ++k) {
      if (inv.functions[k].parent < 0) top_level.push_back(static_cast<int>(k));
    }
    for (std::size_t k = 0; k < inv.functions.size(); ++k) {
      const auto& f = inv.functions[k];
      for (const auto& [pos, name] : call_names(inv, f)) {
        CallSite site{{fi, static_cast<int>(k)}, name, pos, {}};
        for (int scope = static_cast<int>(k); site.targets.empty(); scope = inv.functions[scope].parent) {
          const auto& members = scope >= 0 ? inv.functions[scope].children : top_level;
          for (int c : members) {
            if (inv.functions[c].name == name) site.targets.push_back({fi, c});
          }
          if (scope < 0) break;
        }
        if (site.targets.empty()) {
          if (auto it = by_name.find(name); it != by_name.end()) site.targets = it->second;
        }
        if (site.targets.empty()) continue;
        out.outgoing[fi][k] += 1;
        for (const auto& t : site.targets) out.incoming[t.file][t.function] += 1;
        out.edges += site.targets.size();
        out.sites.push_back(std::move(site));
      }
    }
  }
  return out;
}

}  // namespace jsvp::metrics
