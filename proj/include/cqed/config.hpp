// JSON experiment configuration: parsing with explicit unit suffixes on
// every physical quantity, canonical serialization in rad/ps, and a
// content hash that is independent of key order and whitespace.
#pragma once

#include <string>

#include <json.hpp>

#include "cqed/experiments.hpp"

namespace cqed {

struct LoadedConfig {
  ExperimentConfig config;
  nlohmann::json resolved;  // canonical form (rad/ps everywhere)
  std::string hash;         // FNV-1a 64 of the canonical dump, hex
};

LoadedConfig load_config(const nlohmann::json& j);
LoadedConfig load_config_file(const std::string& path);

// Canonical JSON for a resolved config; load_config(config_to_json(c))
// reproduces c bit-exactly.
nlohmann::json config_to_json(const ExperimentConfig& c);

std::string config_hash(const nlohmann::json& canonical);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace cqed
