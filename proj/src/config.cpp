#include "pulsar/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pulsar {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

KeyValues KeyValues::parse(const std::string& text) {
    KeyValues kv;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        kv.values_[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

KeyValues KeyValues::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::string KeyValues::get(const std::string& key, const std::string& fallback) const {
    touched_[key] = true;
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double KeyValues::get(const std::string& key, double fallback) const {
    touched_[key] = true;
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size())
        throw std::invalid_argument("config key " + key + ": not a number: " + it->second);
    return v;
}

int KeyValues::get(const std::string& key, int fallback) const {
    touched_[key] = true;
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    size_t pos = 0;
    const int v = std::stoi(it->second, &pos);
    if (pos != it->second.size())
        throw std::invalid_argument("config key " + key + ": not an integer: " + it->second);
    return v;
}

bool KeyValues::get(const std::string& key, bool fallback) const {
    touched_[key] = true;
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw std::invalid_argument("config key " + key + ": not a boolean: " + it->second);
}

std::vector<double> KeyValues::get_list(const std::string& key,
                                        const std::vector<double>& fallback) const {
    touched_[key] = true;
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    for (const auto& item : split_commas(it->second)) out.push_back(std::stod(item));
    return out;
}

std::vector<std::string> KeyValues::get_names(const std::string& key,
                                              const std::vector<std::string>& fallback) const {
    touched_[key] = true;
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return split_commas(it->second);
}

void KeyValues::reject_unknown() const {
    for (const auto& [key, value] : values_) {
        (void)value;
        if (!touched_.count(key)) throw std::invalid_argument("unknown config key: " + key);
    }
}

void RunConfig::validate() const {
    if (duration_days <= 0.0) throw std::invalid_argument("duration must be positive");
    if (step_s <= 0.0) throw std::invalid_argument("step must be positive");
    if (pair_step_s < step_s) throw std::invalid_argument("pair_step must be >= step");
    const double ratio = pair_step_s / step_s;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
        throw std::invalid_argument("pair_step must be a multiple of step");
    if (latitudes_deg.empty()) throw std::invalid_argument("need at least one latitude");
    if (masks_deg.empty()) throw std::invalid_argument("need at least one mask");
    if (!std::is_sorted(masks_deg.begin(), masks_deg.end()))
        throw std::invalid_argument("masks must be sorted ascending");
    for (double m : masks_deg)
        if (m < 0.0 || m >= 90.0) throw std::invalid_argument("mask out of [0, 90)");
    for (double lat : latitudes_deg)
        if (lat < -90.0 || lat > 90.0) throw std::invalid_argument("latitude out of [-90, 90]");
    for (const auto& b : bands) band_spec(b);  // throws on unknown name
}

std::vector<std::string> RunConfig::effective_bands() const {
    if (!bands.empty()) return bands;
    if (constellation == "gps-24") return {"l1ca", "l5"};
    return {"x1", "x5"};
}

RunConfig RunConfig::from_keyvalues(const KeyValues& kv) {
    RunConfig c;
    c.constellation = kv.get("constellation", c.constellation);
    c.constellation_file = kv.get("constellation_file", c.constellation_file);
    c.latitudes_deg = kv.get_list("latitudes", c.latitudes_deg);
    c.longitude_deg = kv.get("longitude", c.longitude_deg);
    c.height_m = kv.get("height_m", c.height_m);
    c.duration_days = kv.get("duration_days", c.duration_days);
    c.step_s = kv.get("step_s", c.step_s);
    c.pair_step_s = kv.get("pair_step_s", c.pair_step_s);
    c.masks_deg = kv.get_list("masks", c.masks_deg);
    const std::string ref = kv.get("altitude_reference", std::string("mean"));
    if (ref == "mean")
        c.altitude_reference = AltitudeReference::Mean;
    else if (ref == "equatorial")
        c.altitude_reference = AltitudeReference::Equatorial;
    else
        throw std::invalid_argument("altitude_reference must be mean or equatorial");
    c.bands = kv.get_names("bands", c.bands);
    c.log_all = kv.get("log_all", c.log_all);
    kv.reject_unknown();
    c.validate();
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    return from_keyvalues(KeyValues::from_file(path));
}

}  // namespace pulsar
