#pragma once

#include <string>

#include "mcsl/harness.hpp"

namespace mcsl {

/// Parses a JSON config file mirroring ExperimentConfig. Sections are
/// optional; unknown keys anywhere are an error (std::invalid_argument).
ExperimentConfig load_config_file(const std::string& path);
ExperimentConfig parse_config_json(const std::string& text);

std::string kind_name(ExperimentKind kind);
ExperimentKind kind_from_name(const std::string& name);

/// Canonical serialized form of the effective config (sorted keys).
std::string canonical_config_json(const ExperimentConfig& cfg);

/// FNV-1a hash of the canonical form, as fixed-width hex.
std::string config_hash(const ExperimentConfig& cfg);

OutputMetadata make_metadata(const ExperimentConfig& cfg);

}  // namespace mcsl
