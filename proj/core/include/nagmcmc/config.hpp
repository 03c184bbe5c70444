#pragma once

#include <map>
#include <string>
#include <vector>

#include "nagmcmc/harness.hpp"

namespace nagmcmc {

// Flat key-value config surface ("key = value" lines, '#' comments).
using KvMap = std::map<std::string, std::string>;

KvMap parse_kv_text(const std::string& text);
KvMap parse_kv_file(const std::string& path);

// Applies kv entries onto cfg; unknown keys and malformed values are
// appended to errors.
void apply_kv(SimConfig& cfg, const KvMap& kv, std::vector<std::string>& errors);

// Full round trip: config_from_kv(config_to_kv(cfg)) reproduces cfg.
KvMap config_to_kv(const SimConfig& cfg);
SimConfig config_from_kv(const KvMap& kv);  // throws ConfigError

// Compact detector spec, e.g. "nag-mcmc[samplers=16,iters=8,ng=8,sa=1,es=1]",
// "mmse[nmse=0.01]", "zf", "ml". Non-default fields only, fixed order.
DetectorSpec parse_detector_spec(const std::string& text);
std::string detector_spec_to_string(const DetectorSpec& spec);

// Named experiment presets; each belongs to one subcommand.
std::vector<std::string> preset_names();
std::string preset_subcommand(const std::string& name);
SimConfig preset_config(const std::string& name);

// Collects every violated constraint; throws ConfigError listing them all.
void validate_config(const SimConfig& cfg, const std::string& subcommand);

}  // namespace nagmcmc
