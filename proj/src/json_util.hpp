#pragma once

#include "ia/linalg.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace ia::detail {

/// Row-major nested arrays of [re, im] pairs.
nlohmann::json matrix_to_json(const CMat& m);

/// Parses and shape-checks a matrix; `key` names the offender in errors.
CMat matrix_from_json(const nlohmann::json& rows, Eigen::Index nrows, Eigen::Index ncols,
                      const std::string& key);

} // namespace ia::detail
