#include "shiro/nn/serialize.hpp"

#include "shiro/core/error.hpp"

namespace shiro::nn {

using nlohmann::json;

json to_json(const Mlp& net) {
  json weights = json::array();
  json biases = json::array();
  for (int i = 0; i < net.num_layers(); ++i) {
    auto w = net.weight(i);
    json rows = json::array();
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < w.cols(); ++c) row.push_back(w(r, c));
      rows.push_back(std::move(row));
    }
    weights.push_back(std::move(rows));
    auto b = net.bias(i);
    biases.push_back(std::vector<double>(b.data(), b.data() + b.size()));
  }
  return {{"version", 1},
          {"layer_sizes", net.layer_sizes()},
          {"weights", std::move(weights)},
          {"biases", std::move(biases)},
          {"output_activation", to_string(net.output_activation())}};
}

Mlp mlp_from_json(const json& j) {
  try {
    if (j.at("version").get<int>() != 1) throw FormatError("unsupported network version");
    Mlp net(j.at("layer_sizes").get<std::vector<int>>(),
            output_activation_from_string(j.at("output_activation").get<std::string>()));
    const json& weights = j.at("weights");
    const json& biases = j.at("biases");
    if (weights.size() != static_cast<std::size_t>(net.num_layers()) || biases.size() != weights.size())
      throw FormatError("layer count does not match layer_sizes");
    for (int i = 0; i < net.num_layers(); ++i) {
      auto w = net.weight(i);
      const json& rows = weights[i];
      if (rows.size() != static_cast<std::size_t>(w.rows())) throw FormatError("weight rows mismatch");
      for (Eigen::Index r = 0; r < w.rows(); ++r) {
        const json& row = rows[r];
        if (row.size() != static_cast<std::size_t>(w.cols())) throw FormatError("weight cols mismatch");
        for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = row[c].get<double>();
      }
      auto b = net.bias(i);
      if (biases[i].size() != static_cast<std::size_t>(b.size())) throw FormatError("bias size mismatch");
      for (Eigen::Index r = 0; r < b.size(); ++r) b[r] = biases[i][r].get<double>();
    }
    return net;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed network JSON: ") + e.what());
  } catch (const ContractViolation& e) {
    throw FormatError(std::string("malformed network JSON: ") + e.what());
  }
}

json to_json(const AdamState& state) {
  return {{"first_moment", state.first_moment},
          {"second_moment", state.second_moment},
          {"step_count", state.step_count},
          {"learning_rate", state.learning_rate},
          {"beta1", state.beta1},
          {"beta2", state.beta2},
          {"epsilon_hat", state.epsilon_hat}};
}

AdamState adam_from_json(const json& j) {
  try {
    AdamState state;
    state.first_moment = j.at("first_moment").get<std::vector<double>>();
    state.second_moment = j.at("second_moment").get<std::vector<double>>();
    state.step_count = j.at("step_count").get<std::int64_t>();
    state.learning_rate = j.at("learning_rate").get<double>();
    state.beta1 = j.at("beta1").get<double>();
    state.beta2 = j.at("beta2").get<double>();
    state.epsilon_hat = j.at("epsilon_hat").get<double>();
    return state;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed optimizer state: ") + e.what());
  }
}

}  // namespace shiro::nn
