#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "gfamix/fit.hpp"
#include "gfamix/generative.hpp"

namespace gfamix {

inline constexpr const char* kModelSchema = "gfamix.trained-model";
inline constexpr int kModelSchemaVersion = 1;

// Doubles are written as JSON numbers in shortest round-trip form, which
// parses back to the identical bit pattern.

nlohmann::json to_json(const Hyperparameters& hyper);
Hyperparameters hyperparameters_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TrainedModel& model);
TrainedModel trained_model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GenerativeParams& params, const LatentRecord& latent);

void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

} // namespace gfamix
