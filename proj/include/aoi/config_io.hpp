#pragma once

#include <cstddef>
#include <string>

#include "aoi/model.hpp"

namespace aoi {

SystemConfig parse_config(const std::string& text);
SystemConfig load_config(const std::string& path);

// canonical form: alphabetically ordered keys, two-space indent, shortest
// round-trip numbers, trailing newline
std::string config_to_json(const SystemConfig& config);
void save_config(const SystemConfig& config, const std::string& path);

// three-sensor reference system (10/7/5 Mbit raw, 2 Mbit processed)
SystemConfig make_table2_preset();

// wide system with raw sizes 24, 22, ... decreasing by 2 Mbit per sensor
SystemConfig make_wide_preset(std::size_t sensors = 10, double processed_mbits = 4.0);

}  // namespace aoi
