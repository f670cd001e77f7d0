#include "dgb/output.hpp"

#include <sstream>

namespace dgb {

std::optional<OutputFormat> parse_output_format(std::string_view name) {
  if (name == "bracketed-c") return OutputFormat::BracketedC;
  if (name == "avm") return OutputFormat::Avm;
  if (name == "dep-triples") return OutputFormat::DepTriples;
  if (name == "domain-tree") return OutputFormat::DomainTree;
  if (name == "structured-all") return OutputFormat::StructuredAll;
  return std::nullopt;
}

std::string_view format_name(OutputFormat f) {
  switch (f) {
    case OutputFormat::BracketedC: return "bracketed-c";
    case OutputFormat::Avm: return "avm";
    case OutputFormat::DepTriples: return "dep-triples";
    case OutputFormat::DomainTree: return "domain-tree";
    case OutputFormat::StructuredAll: return "structured-all";
  }
  return "?";
}

namespace {

std::string_view kind_name(CategoryKind k) {
  switch (k) {
    case CategoryKind::Domain: return "domain";
    case CategoryKind::Slot: return "slot";
    case CategoryKind::Preterminal: return "preterminal";
    case CategoryKind::Meta: return "meta";
    case CategoryKind::Union: return "union";
    case CategoryKind::Root: return "root";
  }
  return "?";
}

nlohmann::json annotation_json(const Annotation& a) {
  switch (a.kind) {
    case Annotation::Kind::Head: return "HEAD";
    case Annotation::Kind::Modifier: return "MODIFIER";
    case Annotation::Kind::Field: return nlohmann::json{{"FIELD", a.field}};
  }
  return nullptr;
}

}  // namespace

nlohmann::json cnode_json(const CNode& n, const std::vector<std::string>& tokens) {
  nlohmann::json j{{"category", n.category.name}, {"kind", kind_name(n.category.kind)}, {"span", {n.begin, n.end}}};
  auto ann = nlohmann::json::array();
  for (const auto& a : n.annotations) ann.push_back(annotation_json(a));
  j["annotations"] = ann;
  if (n.group >= 0) j["group"] = n.group;
  if (n.is_preterminal()) {
    j["token"] = n.token;
    j["surface"] = tokens.at(n.token);
  } else {
    auto kids = nlohmann::json::array();
    for (const auto& c : n.children) kids.push_back(cnode_json(c, tokens));
    j["children"] = kids;
  }
  return j;
}

nlohmann::json violation_json(const Violation& v) {
  return {{"code", code_name(v.code)}, {"word", v.word}, {"message", v.message}};
}

nlohmann::json analysis_json(const Analysis& a) {
  auto violations = nlohmann::json::array();
  for (const auto& v : a.violations) violations.push_back(violation_json(v));
  auto words = nlohmann::json::array();
  for (size_t i = 0; i < a.f.word_nodes.size(); ++i) words.push_back(a.f.word_nodes[i]);
  return {{"c_structure", cnode_json(a.c_tree, a.tokens)},
          {"f_structure", to_json(a.f.f)},
          {"word_nodes", words},
          {"dependencies", a.deps.to_json()},
          {"domains", a.domains.to_json(a.tokens)},
          {"violations", violations}};
}

std::string render_analysis(const Analysis& a, OutputFormat f) {
  switch (f) {
    case OutputFormat::BracketedC: return render_bracketed(a.c_tree, a.tokens) + "\n";
    case OutputFormat::Avm: {
      std::string s = render_avm(a.f.f);
      return s.ends_with('\n') ? s : s + "\n";
    }
    case OutputFormat::DepTriples: return a.deps.render();
    case OutputFormat::DomainTree: return a.domains.render(a.tokens);
    case OutputFormat::StructuredAll: return analysis_json(a).dump() + "\n";
  }
  return {};
}

std::string render_result(const std::vector<std::string>& tokens, const std::vector<Analysis>& analyses,
                          OutputFormat f) {
  if (f == OutputFormat::StructuredAll) {
    auto arr = nlohmann::json::array();
    for (const auto& a : analyses) arr.push_back(analysis_json(a));
    nlohmann::json j{{"schema", kAnalysisSchema}, {"tokens", tokens}, {"count", analyses.size()}, {"analyses", arr}};
    return j.dump() + "\n";
  }
  std::ostringstream out;
  out << "analyses: " << analyses.size() << "\n";
  for (size_t i = 0; i < analyses.size(); ++i) out << "# analysis " << i + 1 << "\n" << render_analysis(analyses[i], f);
  return out.str();
}

}  // namespace dgb
