#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dgb/chart.hpp"

namespace dgb {

enum class OutputFormat { BracketedC, Avm, DepTriples, DomainTree, StructuredAll };

inline constexpr std::string_view kAnalysisSchema = "dgb.analysis/1";

std::optional<OutputFormat> parse_output_format(std::string_view name);
std::string_view format_name(OutputFormat f);

nlohmann::json cnode_json(const CNode& n, const std::vector<std::string>& tokens);
nlohmann::json analysis_json(const Analysis& a);
nlohmann::json violation_json(const Violation& v);

// Text block for one analysis in a non-structured format.
std::string render_analysis(const Analysis& a, OutputFormat f);

// Full result for one sentence: a count line followed by one block per
// analysis, or a single JSON line for the structured format.
std::string render_result(const std::vector<std::string>& tokens, const std::vector<Analysis>& analyses,
                          OutputFormat f);

}  // namespace dgb
