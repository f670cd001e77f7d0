#include "dgb/chart.hpp"

namespace dgb {

namespace {

BackboneRuleSet build_backbone(const Grammar& g, const EngineOptions& opts) {
  BackboneRuleSet rs = compile_domains(g);
  if (opts.specialize) rs = specialize_domain_union(rs, g);
  return expand_metacategories(rs);
}

}  // namespace

Engine::Engine(Grammar g, EngineOptions opts)
    : grammar_(std::move(g)), opts_(opts), backbone_(build_backbone(grammar_, opts_)), parser_(backbone_, grammar_) {}

std::vector<std::string> Engine::tokens(std::string_view sentence) const {
  auto t = tokenize(sentence);
  for (size_t i = 0; i < t.size(); ++i)
    if (grammar_.entries(t[i]).empty()) throw UnknownWordError(t[i], static_cast<int>(i) + 1);
  return t;
}

std::vector<CNode> Engine::parse_backbone(std::span<const std::string> tokens, bool* truncated) const {
  for (size_t i = 0; i < tokens.size(); ++i)
    if (grammar_.entries(tokens[i]).empty()) throw UnknownWordError(tokens[i], static_cast<int>(i) + 1);
  return parser_.parse(tokens, opts_.max_unpack, truncated);
}

std::vector<Analysis> Engine::candidates(std::span<const std::string> tokens) const {
  std::vector<Analysis> out;
  std::vector<std::string> words(tokens.begin(), tokens.end());
  for (auto& c : parse_backbone(tokens)) {
    auto solutions = solve(c, tokens, grammar_);
    if (solutions.empty()) continue;
    DomainTree dt = extract_domain_structure(c, grammar_);
    for (auto& s : solutions) {
      Analysis a;
      a.tokens = words;
      a.c_tree = c;
      a.deps = derive_dependency_tree(s.f, grammar_, tokens);
      a.domains = dt;
      a.violations = check_order(a.domains, a.deps, grammar_);
      a.f = std::move(s);
      out.push_back(std::move(a));
    }
  }
  return out;
}

std::vector<Analysis> Engine::analyses(std::span<const std::string> tokens) const {
  auto all = candidates(tokens);
  std::erase_if(all, [](const Analysis& a) { return !a.accepted(); });
  return all;
}

std::vector<Analysis> Engine::analyses(std::string_view sentence) const {
  auto t = tokens(sentence);
  return analyses(std::span<const std::string>(t));
}

bool Engine::accepts(std::span<const std::string> tokens) const {
  for (size_t i = 0; i < tokens.size(); ++i)
    if (grammar_.entries(tokens[i]).empty()) return false;
  if (!parser_.recognizes(tokens)) return false;
  return !analyses(tokens).empty();
}

std::vector<Analysis> analyses(std::string_view sentence, const Grammar& g) {
  return Engine(g).analyses(sentence);
}

}  // namespace dgb
