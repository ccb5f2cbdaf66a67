#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "opconvex/linalg.hpp"

namespace opconvex {

/// Matrix wire format: {"rows": r, "cols": c, "re": [[...]], "im": [[...]]}.
nlohmann::json matrix_to_json(const GeneralMatrix& m);
nlohmann::json matrix_to_json(const HermitianMatrix& m);
GeneralMatrix matrix_from_json(const nlohmann::json& j);

/// Grid wire format: {"nodes": [[...], [...]]}, one ascending list per
/// variable.
nlohmann::json grid_nodes_to_json(const std::vector<std::vector<double>>& nodes);
std::vector<std::vector<double>> grid_nodes_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

} // namespace opconvex
