#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "webgeom/analysis.hpp"
#include "webgeom/involution.hpp"

namespace webgeom {

using Json = nlohmann::ordered_json;

/// Serializes with two-space indentation, scalar-only arrays on one line and
/// every double printed with 17 significant digits.
std::string dump_json(const Json& j);

Json analysis_json(const WebDefinition& web, const PointAnalysis& a, const AnalysisConfig& cfg,
                   bool dump_tensors);
std::string analysis_text(const WebDefinition& web, const PointAnalysis& a);

Json verify_json(const VerifyReport& r);
std::string verify_text(const VerifyReport& r);

Json characters_json(const std::vector<CharacterTable>& tables);
std::string characters_text(const std::vector<CharacterTable>& tables);

/// Tensor as nested arrays, first index outermost.
template <std::size_t R>
Json tensor_json(const Tensor<R>& t);

std::string format_double(double v);

}  // namespace webgeom
