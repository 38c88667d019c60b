#pragma once

#include <json.hpp>

#include "shiro/nn/adam.hpp"
#include "shiro/nn/mlp.hpp"

namespace shiro::nn {

// {version:1, layer_sizes, weights[layer][row][col], biases[layer][row], output_activation}
nlohmann::json to_json(const Mlp& net);
Mlp mlp_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AdamState& state);
AdamState adam_from_json(const nlohmann::json& j);

}  // namespace shiro::nn
