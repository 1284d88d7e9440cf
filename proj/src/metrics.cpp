#include "pulsar/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace pulsar {

namespace {

constexpr double MS_PER_KM = 1.0e6 / SPEED_OF_LIGHT;  // propagation delay of 1 km

const char* CLASS_NAMES[N_CLASS] = {"inclined", "polar", "gps"};

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

int lat_index(const MetricsResult& r, double lat) {
    for (size_t i = 0; i < r.config.latitudes_deg.size(); ++i)
        if (std::fabs(r.config.latitudes_deg[i] - lat) < 1e-9) return int(i);
    throw std::runtime_error("latitude " + std::to_string(lat) + " not covered by the sweep");
}

int n_masks(const MetricsResult& r) { return int(r.config.masks_deg.size()); }

std::string fmt(double v, int dec) {
    if (std::isnan(v)) return "-";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", dec, v);
    return buf;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// Sample-weighted mean elevation at one latitude; combined = both Pulsar shells.
double lat_avg_elevation(const LatAccum& A, int cls, int m) {
    double s, n;
    if (cls < 0) {
        s = A.el_sum[CLASS_INCLINED][m] + A.el_sum[CLASS_POLAR][m];
        n = double(A.el_n[CLASS_INCLINED][m] + A.el_n[CLASS_POLAR][m]);
    } else {
        s = A.el_sum[cls][m];
        n = double(A.el_n[cls][m]);
    }
    return n > 0 ? s / n : nan();
}

// Equal weight per latitude; latitudes where nothing is ever visible
// contribute zero (they drag the published all-latitude averages down).
double lat_equal_mean(const MetricsResult& r, int cls, const std::vector<double>& lats, int m) {
    double s = 0.0;
    for (double lat : lats) {
        const double v = lat_avg_elevation(r.per_lat[lat_index(r, lat)], cls, m);
        if (!std::isnan(v)) s += v;
    }
    return s / double(lats.size());
}

const std::vector<double> TABLE_LATS = {0, 15, 30, 45, 60, 75, 90};
const std::vector<double> TABLE_LATS_60 = {0, 15, 30, 45, 60};

void require(const ReportInputs& in, bool need_gps = true) {
    if (!in.pulsar) throw std::runtime_error("pulsar-foc sweep not computed");
    if (need_gps && !in.gps) throw std::runtime_error("gps-24 sweep not computed");
}

std::vector<std::string> mask_headers(const MetricsResult& r) {
    std::vector<std::string> h;
    for (double m : r.config.masks_deg) h.push_back(num(m));
    return h;
}

TableDoc scale_to_delay(TableDoc t, const std::string& id, const std::string& title) {
    t.id = id;
    t.title = title;
    for (auto& row : t.cells)
        for (double& v : row) v *= MS_PER_KM;
    for (int& d : t.row_decimals) d = 1;
    return t;
}

}  // namespace

std::string to_markdown(const TableDoc& t) {
    const size_t nc = t.col_headers.size();
    std::vector<size_t> w(nc + 1);
    w[0] = t.corner.size();
    for (const std::string& l : t.row_labels) w[0] = std::max(w[0], l.size());
    std::vector<std::vector<std::string>> cells(t.cells.size());
    for (size_t i = 0; i < t.cells.size(); ++i)
        for (size_t j = 0; j < nc; ++j) cells[i].push_back(fmt(t.cells[i][j], t.row_decimals[i]));
    for (size_t j = 0; j < nc; ++j) {
        w[j + 1] = t.col_headers[j].size();
        for (size_t i = 0; i < cells.size(); ++i) w[j + 1] = std::max(w[j + 1], cells[i][j].size());
    }
    auto pad = [](const std::string& s, size_t width) {
        return s + std::string(width - s.size(), ' ');
    };
    std::string out = "## " + t.title + "\n\n";
    out += "| " + pad(t.corner, w[0]);
    for (size_t j = 0; j < nc; ++j) out += " | " + pad(t.col_headers[j], w[j + 1]);
    out += " |\n|" + std::string(w[0] + 2, '-');
    for (size_t j = 0; j < nc; ++j) out += "|" + std::string(w[j + 1] + 2, '-');
    out += "|\n";
    for (size_t i = 0; i < cells.size(); ++i) {
        out += "| " + pad(t.row_labels[i], w[0]);
        for (size_t j = 0; j < nc; ++j) out += " | " + pad(cells[i][j], w[j + 1]);
        out += " |\n";
    }
    return out;
}

std::string to_csv(const TableDoc& t) {
    std::string out = t.corner;
    for (const std::string& h : t.col_headers) out += "," + h;
    out += "\n";
    char buf[64];
    for (size_t i = 0; i < t.cells.size(); ++i) {
        out += t.row_labels[i];
        for (double v : t.cells[i]) {
            if (std::isnan(v)) {
                out += ",";
            } else {
                std::snprintf(buf, sizeof buf, ",%.10g", v);
                out += buf;
            }
        }
        out += "\n";
    }
    return out;
}

Kinematics compute_kinematics() {
    const Constellation iov = build_nominal("pulsar-iov");
    const Constellation foc = build_nominal("pulsar-foc");
    const Constellation gps = build_nominal("gps-24");
    const Satellite* polar_sat = nullptr;
    for (const Satellite& s : foc.satellites)
        if (is_polar(s)) {
            polar_sat = &s;
            break;
        }
    const Satellite* cols[4] = {&iov.satellites[0], polar_sat, &foc.satellites[0],
                                &gps.satellites[0]};
    Kinematics k;
    for (int i = 0; i < 4; ++i) {
        const Satellite& s = *cols[i];
        const OrbitalConstants oc = orbital_constants(s);
        k.radius_km[i] = s.orbit_radius / 1000.0;
        k.perimeter_km[i] = 2.0 * PI * s.orbit_radius / 1000.0;
        k.period_min[i] = oc.period / 60.0;
        k.speed_mps[i] = oc.speed;
        k.max_ecef_speed_mps[i] = max_ecef_speed(s.orbit_radius, s.inclination);
        k.max_rel_speed_mps[i] = max_relative_speed(s.orbit_radius, s.inclination);
        const BandSpec& l1 = i == 3 ? BAND_L1CA : BAND_X1;
        const BandSpec& l5 = i == 3 ? BAND_L5 : BAND_X5;
        k.max_doppler_l1_hz[i] = max_carrier_doppler(s.orbit_radius, s.inclination, l1);
        k.max_doppler_l5_hz[i] = max_carrier_doppler(s.orbit_radius, s.inclination, l5);
    }
    return k;
}

namespace {

void kin_row(std::string& out, const char* label, const double* v, double scale, int dec) {
    char buf[64];
    out += "| " + std::string(label);
    for (int i = 0; i < 4; ++i) {
        std::snprintf(buf, sizeof buf, " | %.*f", dec, v[i] * scale);
        out += buf;
    }
    out += " |\n";
}

}  // namespace

std::string render_kinematics(const Kinematics& k) {
    std::string out =
        "## Constellation kinematics (mean-Earth-radius reference)\n\n"
        "| Parameter | Pulsar IOV | Pulsar FOC polar | Pulsar FOC inclined | GPS |\n"
        "|---|---|---|---|---|\n";
    kin_row(out, "Orbit radius (km)", k.radius_km, 1.0, 1);
    kin_row(out, "Orbit perimeter (km)", k.perimeter_km, 1.0, 1);
    kin_row(out, "Orbital period (min)", k.period_min, 1.0, 1);
    kin_row(out, "Orbital speed (m/s)", k.speed_mps, 1.0, 1);
    kin_row(out, "Orbital speed (km/h)", k.speed_mps, 3.6, 1);
    kin_row(out, "Max ECEF speed (m/s)", k.max_ecef_speed_mps, 1.0, 1);
    kin_row(out, "Max ECEF speed (km/h)", k.max_ecef_speed_mps, 3.6, 1);
    kin_row(out, "Max speed relative to a static user (m/s)", k.max_rel_speed_mps, 1.0, 1);
    kin_row(out, "Max speed relative to a static user (km/h)", k.max_rel_speed_mps, 3.6, 1);
    kin_row(out, "Max L1-band carrier Doppler (Hz)", k.max_doppler_l1_hz, 1.0, 1);
    kin_row(out, "Max L5-band carrier Doppler (Hz)", k.max_doppler_l5_hz, 1.0, 1);
    return out;
}

std::string kinematics_csv(const Kinematics& k) {
    std::string out = "parameter,pulsar_iov,pulsar_foc_polar,pulsar_foc_inclined,gps\n";
    char buf[256];
    auto row = [&](const char* name, const double* v) {
        std::snprintf(buf, sizeof buf, "%s,%.10g,%.10g,%.10g,%.10g\n", name, v[0], v[1], v[2],
                      v[3]);
        out += buf;
    };
    row("orbit_radius_km", k.radius_km);
    row("orbit_perimeter_km", k.perimeter_km);
    row("orbital_period_min", k.period_min);
    row("orbital_speed_mps", k.speed_mps);
    row("max_ecef_speed_mps", k.max_ecef_speed_mps);
    row("max_relative_speed_mps", k.max_rel_speed_mps);
    row("max_doppler_l1_hz", k.max_doppler_l1_hz);
    row("max_doppler_l5_hz", k.max_doppler_l5_hz);
    return out;
}

TableDoc average_elevation_table(const ReportInputs& in) {
    require(in);
    TableDoc t;
    t.id = "3";
    t.title = "Average elevation (deg), Pulsar and GPS";
    t.corner = "Elevation mask (deg)";
    t.col_headers = mask_headers(*in.pulsar);
    const int nm = n_masks(*in.pulsar);
    struct Row {
        const char* label;
        const MetricsResult* r;
        int cls;
        const std::vector<double>* lats;
    };
    const Row rows[] = {
        {"All latitudes, Pulsar", in.pulsar, -1, &TABLE_LATS},
        {"All latitudes, Pulsar inclined", in.pulsar, CLASS_INCLINED, &TABLE_LATS},
        {"All latitudes, Pulsar polar", in.pulsar, CLASS_POLAR, &TABLE_LATS},
        {"All latitudes, GPS", in.gps, CLASS_GPS, &TABLE_LATS},
        {"Latitudes up to 60, Pulsar", in.pulsar, -1, &TABLE_LATS_60},
        {"Latitudes up to 60, Pulsar inclined", in.pulsar, CLASS_INCLINED, &TABLE_LATS_60},
        {"Latitudes up to 60, Pulsar polar", in.pulsar, CLASS_POLAR, &TABLE_LATS_60},
        {"Latitudes up to 60, GPS", in.gps, CLASS_GPS, &TABLE_LATS_60},
    };
    for (const Row& row : rows) {
        t.row_labels.push_back(row.label);
        std::vector<double> cells;
        for (int m = 0; m < nm; ++m) cells.push_back(lat_equal_mean(*row.r, row.cls, *row.lats, m));
        t.cells.push_back(cells);
        t.row_decimals.push_back(1);
    }
    return t;
}

TableDoc min_range_table(const ReportInputs& in) {
    require(in);
    TableDoc t;
    t.id = "4";
    t.title = "Minimum range (km), Pulsar and GPS, by latitude";
    t.corner = "Latitude (deg)";
    struct Row {
        const char* label;
        const MetricsResult* r;
        int cls;
        int dec;
    };
    const Row rows[] = {
        {"Pulsar inclined", in.pulsar, CLASS_INCLINED, 1},
        {"Pulsar polar", in.pulsar, CLASS_POLAR, 1},
        {"GPS", in.gps, CLASS_GPS, 0},
    };
    for (double lat : TABLE_LATS) t.col_headers.push_back(num(lat));
    for (const Row& row : rows) {
        t.row_labels.push_back(row.label);
        std::vector<double> cells;
        for (double lat : TABLE_LATS) {
            const LatAccum& A = row.r->per_lat[lat_index(*row.r, lat)];
            const double v = A.min_range[row.cls];
            cells.push_back(std::isinf(v) ? nan() : v / 1000.0);
        }
        t.cells.push_back(cells);
        t.row_decimals.push_back(row.dec);
    }
    return t;
}

TableDoc min_delay_table(const ReportInputs& in) {
    return scale_to_delay(min_range_table(in), "5",
                          "Minimum propagation delay (ms), Pulsar and GPS, by latitude");
}

TableDoc max_range_table(const ReportInputs& in) {
    require(in);
    TableDoc t;
    t.id = "6";
    t.title = "Maximum range (km), Pulsar and GPS, by elevation mask";
    t.corner = "Elevation mask (deg)";
    t.col_headers = mask_headers(*in.pulsar);
    const int nm = n_masks(*in.pulsar);
    struct Row {
        const char* label;
        const MetricsResult* r;
        int cls;
    };
    const Row rows[] = {
        {"Pulsar inclined", in.pulsar, CLASS_INCLINED},
        {"Pulsar polar", in.pulsar, CLASS_POLAR},
        {"GPS", in.gps, CLASS_GPS},
    };
    for (const Row& row : rows) {
        t.row_labels.push_back(row.label);
        std::vector<double> cells;
        for (int m = 0; m < nm; ++m) {
            double v = 0.0;
            for (const LatAccum& A : row.r->per_lat) v = std::max(v, A.max_range[row.cls][m]);
            cells.push_back(v > 0.0 ? v / 1000.0 : nan());
        }
        t.cells.push_back(cells);
        t.row_decimals.push_back(1);
    }
    return t;
}

TableDoc max_delay_table(const ReportInputs& in) {
    return scale_to_delay(max_range_table(in), "7",
                          "Maximum propagation delay (ms), Pulsar and GPS, by elevation mask");
}

TableDoc max_range_diff_table(const ReportInputs& in) {
    require(in);
    TableDoc t;
    t.id = "8";
    t.title = "Maximum range difference (km), Pulsar and GPS, by elevation mask";
    t.corner = "Elevation mask (deg)";
    t.col_headers = mask_headers(*in.pulsar);
    const int nm = n_masks(*in.pulsar);
    struct Row {
        const char* label;
        const MetricsResult* r;
        int scope;
    };
    const Row rows[] = {
        {"Pulsar", in.pulsar, SCOPE_ALL},
        {"Pulsar inclined", in.pulsar, SCOPE_INCLINED},
        {"Pulsar polar", in.pulsar, SCOPE_POLAR},
        {"Pulsar inclined (same plane)", in.pulsar, SCOPE_SAME_PLANE_INCLINED},
        {"Pulsar polar (same plane)", in.pulsar, SCOPE_SAME_PLANE_POLAR},
        {"GPS", in.gps, SCOPE_ALL},
    };
    for (const Row& row : rows) {
        t.row_labels.push_back(row.label);
        std::vector<double> cells;
        for (int m = 0; m < nm; ++m) {
            double v = 0.0;
            std::int64_t n = 0;
            for (const LatAccum& A : row.r->per_lat) {
                v = std::max(v, A.pair_max_drange[row.scope][m]);
                n += A.pair_n[row.scope][m];
            }
            cells.push_back(n > 0 ? v / 1000.0 : nan());
        }
        t.cells.push_back(cells);
        t.row_decimals.push_back(1);
    }
    return t;
}

TableDoc max_delay_diff_table(const ReportInputs& in) {
    return scale_to_delay(max_range_diff_table(in), "9",
                          "Maximum delay difference (ms), Pulsar and GPS, by elevation mask");
}

TableDoc table_by_id(int id, const ReportInputs& in) {
    switch (id) {
        case 3: return average_elevation_table(in);
        case 4: return min_range_table(in);
        case 5: return min_delay_table(in);
        case 6: return max_range_table(in);
        case 7: return max_delay_table(in);
        case 8: return max_range_diff_table(in);
        case 9: return max_delay_diff_table(in);
        default: throw std::invalid_argument("unknown table id " + std::to_string(id));
    }
}

std::vector<double> pass_durations(const MetricsResult& r, int lat_idx, int orbit_class,
                                   int mask_idx) {
    std::vector<double> out;
    for (const PassRecord& p : r.per_lat[lat_idx].passes) {
        if (p.mask_index != mask_idx || p.trunc_start || p.trunc_end) continue;
        if (orbit_class >= 0 && r.sat_class[p.sat_index] != orbit_class) continue;
        out.push_back(p.duration());
    }
    return out;
}

std::vector<double> rise_dopplers(const MetricsResult& r, Band band) {
    const double k = band_spec(band).carrier_hz / SPEED_OF_LIGHT;
    std::vector<double> out;
    for (const LatAccum& A : r.per_lat)
        for (const PassRecord& p : A.passes)
            if (p.mask_index == 0 && !p.trunc_start) out.push_back(-p.rise_range_rate * k);
    return out;
}

std::vector<std::pair<double, double>> doppler_rate_profile(const MetricsResult& r,
                                                            int orbit_class, Band band) {
    const double k = band_spec(band).carrier_hz / SPEED_OF_LIGHT;
    std::vector<std::pair<double, double>> out;
    for (const LatAccum& A : r.per_lat) {
        const double span = A.hist_span[orbit_class];
        for (int b = 0; b < HIST_BINS; ++b) {
            if (std::isinf(A.prof_min_raccel[orbit_class][b])) continue;
            const double rr = -span + (b + 0.5) * (2.0 * span / HIST_BINS);
            const double f = -rr * k;
            out.emplace_back(f, -A.prof_min_raccel[orbit_class][b] * k);
            out.emplace_back(f, -A.prof_max_raccel[orbit_class][b] * k);
        }
    }
    return out;
}

std::string elevation_sweep_csv(const MetricsResult& r) {
    std::string out = "lat_deg,mask_deg,class,avg_elevation_deg,n_samples\n";
    char buf[160];
    for (size_t li = 0; li < r.per_lat.size(); ++li)
        for (int m = 0; m < n_masks(r); ++m)
            for (int c = -1; c < N_CLASS; ++c) {
                const double v = lat_avg_elevation(r.per_lat[li], c, m);
                std::int64_t n = c < 0 ? r.per_lat[li].el_n[CLASS_INCLINED][m] +
                                             r.per_lat[li].el_n[CLASS_POLAR][m]
                                       : r.per_lat[li].el_n[c][m];
                if (n == 0) continue;
                std::snprintf(buf, sizeof buf, "%g,%g,%s,%.6f,%lld\n", r.config.latitudes_deg[li],
                              r.config.masks_deg[m], c < 0 ? "pulsar" : CLASS_NAMES[c], v,
                              (long long)n);
                out += buf;
            }
    return out;
}

std::string in_view_csv(const MetricsResult& r) {
    static const char* GROUPS[N_GROUP] = {
        "sats_all",      "sats_inclined",          "sats_polar",
        "planes_all",    "planes_inclined",        "planes_polar",
        "same_plane_max_inclined", "same_plane_max_polar",
    };
    std::string out = "lat_deg,mask_deg,group,min,avg,max,n_epochs\n";
    char buf[200];
    for (size_t li = 0; li < r.per_lat.size(); ++li)
        for (int m = 0; m < n_masks(r); ++m)
            for (int g = 0; g < N_GROUP; ++g) {
                const MinMaxSum& s = r.per_lat[li].in_view[g][m];
                if (s.n == 0) continue;
                std::snprintf(buf, sizeof buf, "%g,%g,%s,%g,%.6f,%g,%lld\n",
                              r.config.latitudes_deg[li], r.config.masks_deg[m], GROUPS[g], s.mn,
                              s.avg(), s.mx, (long long)s.n);
                out += buf;
            }
    return out;
}

std::string passes_csv(const MetricsResult& r) {
    std::string out =
        "lat_deg,svid,prn,plane,class,mask_deg,rise_s,set_s,duration_s,"
        "max_elevation_deg,rise_range_rate_mps,truncated\n";
    char buf[256];
    for (size_t li = 0; li < r.per_lat.size(); ++li)
        for (const PassRecord& p : r.per_lat[li].passes) {
            const Satellite& s = r.constellation.satellites[p.sat_index];
            std::snprintf(buf, sizeof buf, "%g,%d,%d,%d,%s,%g,%.3f,%.3f,%.3f,%.3f,%.6f,%d\n",
                          r.config.latitudes_deg[li], s.svid, s.prn_id, s.plane_index,
                          CLASS_NAMES[r.sat_class[p.sat_index]], r.config.masks_deg[p.mask_index],
                          p.rise_t, p.set_t, p.duration(), p.max_elevation_deg,
                          p.rise_range_rate, int(p.trunc_start || p.trunc_end));
            out += buf;
        }
    return out;
}

std::string doppler_histogram_csv(const MetricsResult& r, Band band) {
    const double k = band_spec(band).carrier_hz / SPEED_OF_LIGHT;
    std::string out = "class,bin_lo_hz,bin_hi_hz,count\n";
    char buf[160];
    for (int c = 0; c < N_CLASS; ++c) {
        std::int64_t counts[HIST_BINS] = {};
        double span = 0.0;
        for (const LatAccum& A : r.per_lat) {
            span = A.hist_span[c];
            for (int b = 0; b < HIST_BINS; ++b) counts[b] += A.hist[c][b];
        }
        for (int b = 0; b < HIST_BINS; ++b) {
            if (counts[b] == 0) continue;
            const double rr_lo = -span + b * (2.0 * span / HIST_BINS);
            const double rr_hi = rr_lo + 2.0 * span / HIST_BINS;
            // Doppler flips the sign of range rate, so the bin order reverses.
            std::snprintf(buf, sizeof buf, "%s,%.3f,%.3f,%lld\n", CLASS_NAMES[c], -rr_hi * k,
                          -rr_lo * k, (long long)counts[b]);
            out += buf;
        }
    }
    return out;
}

std::string pair_diff_csv(const MetricsResult& r) {
    static const char* SCOPES[N_SCOPE] = {"all", "inclined", "polar", "same_plane_inclined",
                                          "same_plane_polar"};
    std::string out =
        "scope,mask_deg,max_range_diff_km,n_pairs,"
        "min_drr_mps,max_drr_mps,max_draccel_mps2\n";
    char buf[256];
    for (int s = 0; s < N_SCOPE; ++s)
        for (int m = 0; m < n_masks(r); ++m) {
            double dr = 0.0, mind = std::numeric_limits<double>::infinity();
            double maxd = 0.0, maxa = 0.0;
            std::int64_t n = 0;
            for (const LatAccum& A : r.per_lat) {
                dr = std::max(dr, A.pair_max_drange[s][m]);
                n += A.pair_n[s][m];
                if (s == SCOPE_SAME_PLANE_INCLINED || s == SCOPE_SAME_PLANE_POLAR) {
                    const int c = s == SCOPE_SAME_PLANE_INCLINED ? 0 : 1;
                    mind = std::min(mind, A.sp_min_drr[c][m]);
                    maxd = std::max(maxd, A.sp_max_drr[c][m]);
                    maxa = std::max(maxa, A.sp_max_draccel[c][m]);
                }
            }
            if (n == 0) continue;
            if (s == SCOPE_SAME_PLANE_INCLINED || s == SCOPE_SAME_PLANE_POLAR)
                std::snprintf(buf, sizeof buf, "%s,%g,%.6f,%lld,%.6f,%.6f,%.6f\n", SCOPES[s],
                              r.config.masks_deg[m], dr / 1000.0, (long long)n, mind, maxd, maxa);
            else
                std::snprintf(buf, sizeof buf, "%s,%g,%.6f,%lld,,,\n", SCOPES[s],
                              r.config.masks_deg[m], dr / 1000.0, (long long)n);
            out += buf;
        }
    return out;
}

std::string calibration_csv(const MetricsResult& r) {
    std::string out = "kind,class,key,value\n";
    char buf[160];
    for (int c = 0; c < N_CLASS; ++c) {
        double band_max[LatAccum::EL_BANDS] = {};
        double rate_max = 0.0, jerk_max = 0.0;
        for (const LatAccum& A : r.per_lat) {
            for (int b = 0; b < LatAccum::EL_BANDS; ++b)
                band_max[b] = std::max(band_max[b], A.rr_band_max[c][b]);
            if (!std::isinf(A.max_raccel[c][0]) && A.el_n[c][0] > 0)
                rate_max = std::max(rate_max,
                                    std::max(std::fabs(A.max_raccel[c][0]),
                                             std::fabs(A.min_raccel[c][0])));
            jerk_max = std::max(jerk_max, A.max_abs_jerk[c]);
        }
        // Suffix maxima: peak |range rate| over samples at elevation >= knot.
        for (int b = LatAccum::EL_BANDS - 2; b >= 0; --b)
            band_max[b] = std::max(band_max[b], band_max[b + 1]);
        if (band_max[0] == 0.0) continue;
        for (int b = 0; b < LatAccum::EL_BANDS; ++b) {
            std::snprintf(buf, sizeof buf, "doppler_fraction,%s,%d,%.6f\n", CLASS_NAMES[c], b * 5,
                          band_max[b] / band_max[0]);
            out += buf;
        }
        std::snprintf(buf, sizeof buf, "max_range_rate,%s,mps,%.6f\n", CLASS_NAMES[c],
                      band_max[0]);
        out += buf;
        std::snprintf(buf, sizeof buf, "max_range_accel,%s,mps2,%.6f\n", CLASS_NAMES[c], rate_max);
        out += buf;
        std::snprintf(buf, sizeof buf, "max_range_jerk,%s,mps3,%.6f\n", CLASS_NAMES[c], jerk_max);
        out += buf;
    }
    for (int c = 0; c < 2; ++c) {
        double mind = std::numeric_limits<double>::infinity(), maxd = 0.0;
        for (const LatAccum& A : r.per_lat) {
            mind = std::min(mind, A.sp_min_drr[c][0]);
            maxd = std::max(maxd, A.sp_max_drr[c][0]);
        }
        if (maxd == 0.0) continue;
        std::snprintf(buf, sizeof buf, "same_plane_min_drr,%s,mps,%.6f\n", CLASS_NAMES[c], mind);
        out += buf;
        std::snprintf(buf, sizeof buf, "same_plane_max_drr,%s,mps,%.6f\n", CLASS_NAMES[c], maxd);
        out += buf;
    }
    return out;
}

}  // namespace pulsar
