#pragma once

#include <map>
#include <string>
#include <vector>

#include "pulsar/constants.hpp"

namespace pulsar {

// Plain-text key=value document. '#' starts a comment; blank lines ignored.
class KeyValues {
public:
    static KeyValues parse(const std::string& text);
    static KeyValues from_file(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    double get(const std::string& key, double fallback) const;
    int get(const std::string& key, int fallback) const;
    bool get(const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;
    std::vector<std::string> get_names(const std::string& key,
                                       const std::vector<std::string>& fallback) const;

    // Unknown keys are usage errors; call after reading everything you accept.
    void reject_unknown() const;
    const std::map<std::string, std::string>& raw() const { return values_; }

private:
    std::map<std::string, std::string> values_;
    mutable std::map<std::string, bool> touched_;
};

// One simulation/metrics scenario. Defaults mirror the reference setup:
// 3 days, 1 s step, latitudes {0,15,30,45,60,75,90,-45}, lon 0, alt 0,
// masks {0,5,10,15,20}, pair sampling every 10 s.
struct RunConfig {
    std::string constellation = "pulsar-foc";
    std::string constellation_file;  // overrides the built-in when set
    std::vector<double> latitudes_deg = {0, 15, 30, 45, 60, 75, 90, -45};
    double longitude_deg = 0.0;
    double height_m = 0.0;
    double duration_days = 3.0;
    double step_s = 1.0;
    double pair_step_s = 10.0;
    std::vector<double> masks_deg = {0, 5, 10, 15, 20};
    AltitudeReference altitude_reference = AltitudeReference::Mean;
    std::vector<std::string> bands;  // default depends on the constellation
    bool log_all = false;            // simulate: log every satellite, not just visible

    void validate() const;  // throws std::invalid_argument
    std::vector<std::string> effective_bands() const;

    static RunConfig from_keyvalues(const KeyValues& kv);
    static RunConfig from_file(const std::string& path);
};

}  // namespace pulsar
