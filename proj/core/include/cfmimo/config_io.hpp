#pragma once

#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "cfmimo/scenario.hpp"

namespace cfmimo {

using Setting = std::pair<std::string, std::string>;

/// Splits "key=value", trimming both sides. Throws on a missing '=' or empty key.
Setting split_setting(const std::string& text);

/// Reads `key = value` lines. Blank lines and text after '#' are ignored.
std::vector<Setting> parse_settings(std::istream& in);
std::vector<Setting> read_settings_file(const std::string& path);

/// Keys are the SystemConfig field names plus path-loss fields
/// (loss_db, d0_m, d1_m, sigma_sh_db). pilot_mode takes orthogonal|random,
/// rate_overhead takes true|false|1|0.
bool is_config_key(const std::string& key);
void apply_setting(SystemConfig& config, const std::string& key, const std::string& value);
void apply_settings(SystemConfig& config, const std::vector<Setting>& settings);

int parse_int(const std::string& key, const std::string& value);
double parse_double(const std::string& key, const std::string& value);

}  // namespace cfmimo
