#pragma once

#include <json.hpp>

#include "tcpp/spec.hpp"

namespace tcpp::detail {

nlohmann::json spec_json(const SubordinatorSpec& spec);
SubordinatorSpec spec_from_json_value(const nlohmann::json& j, int level = 1);

}  // namespace tcpp::detail
