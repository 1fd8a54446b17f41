#include "aoi/config_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace aoi {

namespace {

using nlohmann::json;

double require_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    throw ConfigError("missing key '" + std::string(key) + "' in " + where);
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("key '" + std::string(key) + "' in " + where + " must be a number");
  return v.get<double>();
}

}  // namespace

SystemConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
  if (!doc.contains("sensors") || !doc.at("sensors").is_array())
    throw ConfigError("missing key 'sensors' (array) in config root");
  if (!doc.contains("processor")) throw ConfigError("missing key 'processor' in config root");
  if (!doc.contains("channel")) throw ConfigError("missing key 'channel' in config root");

  SystemConfig config;
  const json& sensors = doc.at("sensors");
  if (sensors.empty()) throw ConfigError("config needs at least one sensor");
  for (std::size_t j = 0; j < sensors.size(); ++j) {
    const std::string where = "sensors[" + std::to_string(j) + "]";
    SensorConfig s;
    s.lambda = require_number(sensors.at(j), "lambda", where);
    s.raw_mbits = require_number(sensors.at(j), "raw_mbits", where);
    s.processed_mbits = require_number(sensors.at(j), "processed_mbits", where);
    s.cycles_per_bit = require_number(sensors.at(j), "cycles_per_bit", where);
    config.sensors.push_back(s);
  }
  config.processor.cpu_hz = require_number(doc.at("processor"), "cpu_hz", "processor");
  const json& ch = doc.at("channel");
  config.channel.power_mw = require_number(ch, "power_mw", "channel");
  config.channel.bandwidth_hz = require_number(ch, "bandwidth_hz", "channel");
  config.channel.distance_m = require_number(ch, "distance_m", "channel");
  config.channel.alpha = require_number(ch, "alpha", "channel");
  config.channel.noise_dbm_hz = require_number(ch, "noise_dbm_hz", "channel");
  validate(config);
  return config;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const SystemConfig& config) {
  json doc;
  doc["sensors"] = json::array();
  for (const SensorConfig& s : config.sensors) {
    json row;
    row["lambda"] = s.lambda;
    row["raw_mbits"] = s.raw_mbits;
    row["processed_mbits"] = s.processed_mbits;
    row["cycles_per_bit"] = s.cycles_per_bit;
    doc["sensors"].push_back(row);
  }
  doc["processor"]["cpu_hz"] = config.processor.cpu_hz;
  doc["channel"]["power_mw"] = config.channel.power_mw;
  doc["channel"]["bandwidth_hz"] = config.channel.bandwidth_hz;
  doc["channel"]["distance_m"] = config.channel.distance_m;
  doc["channel"]["alpha"] = config.channel.alpha;
  doc["channel"]["noise_dbm_hz"] = config.channel.noise_dbm_hz;
  return doc.dump(2) + "\n";
}

void save_config(const SystemConfig& config, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write config file '" + path + "'");
  out << config_to_json(config);
}

SystemConfig make_table2_preset() {
  SystemConfig config;
  const double raw[] = {10.0, 7.0, 5.0};
  const double lambda[] = {0.06, 0.04, 0.02};
  for (int j = 0; j < 3; ++j)
    config.sensors.push_back({lambda[j], raw[j], 2.0, 100.0});
  config.processor.cpu_hz = 5e8;
  config.channel = {100.0, 1e5, 300.0, 3.0, -174.0};
  validate(config);
  return config;
}

SystemConfig make_wide_preset(std::size_t sensors, double processed_mbits) {
  if (sensors == 0) throw ConfigError("wide preset needs at least one sensor");
  SystemConfig config;
  for (std::size_t j = 0; j < sensors; ++j) {
    const double raw = 24.0 - 2.0 * static_cast<double>(j);
    config.sensors.push_back({0.01, raw, processed_mbits, 100.0});
  }
  config.processor.cpu_hz = 5e8;
  config.channel = {100.0, 1e5, 300.0, 3.0, -174.0};
  validate(config);
  return config;
}

}  // namespace aoi
