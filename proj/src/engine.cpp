#include "pulsar/engine.hpp"

#include <omp.h>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "pulsar/acq.hpp"

namespace pulsar {

namespace {

// Fixed decomposition unit: results never depend on the worker count because
// block boundaries depend only on the epoch index.
constexpr long BLOCK_EPOCHS = 3600;

struct SatCtx {
    OrbitBasis basis;
    int cls = 0;
    int plane = 0;
};

struct RunCtx {
    const RunConfig* cfg = nullptr;
    const Constellation* cons = nullptr;
    std::vector<SatCtx> sats;
    std::vector<ObserverSite> sites;
    std::vector<double> sin_mask;
    std::vector<int> plane_class;  // plane index -> OrbitClass
    int n_masks = 0;
    int n_planes = 0;
    long n_epochs = 0;
    long pair_every = 1;
    double step = 1.0;
    double span[N_CLASS] = {};
    RateEnvelope env[N_CLASS];
    double k_x1 = 0.0;  // Hz per m/s on the X1 carrier
};

// Satellite state relative to one observer at one epoch. Position/velocity
// are always filled; acceleration/jerk only on demand (visible samples).
struct SatEval {
    Vec3 r, v, d;
    double rho = 0.0, sinel = 0.0, rr = 0.0;
    double raccel = 0.0, rjerk = 0.0;
};

inline void eval_pos_vel(const SatCtx& sc, const ObserverSite& site, double t, double cw,
                         double sw, SatEval& out) {
    const OrbitBasis& b = sc.basis;
    const double u = b.aol_epoch + b.mean_motion * t;
    const double cu = std::cos(u), su = std::sin(u);

    const double px = b.radius * (cu * b.p.x + su * b.q.x);
    const double py = b.radius * (cu * b.p.y + su * b.q.y);
    const double pz = b.radius * (cu * b.p.z + su * b.q.z);
    out.r = {cw * px + sw * py, -sw * px + cw * py, pz};

    const double vxi = b.speed * (-su * b.p.x + cu * b.q.x);
    const double vyi = b.speed * (-su * b.p.y + cu * b.q.y);
    const double vzi = b.speed * (-su * b.p.z + cu * b.q.z);
    out.v = {cw * vxi + sw * vyi + OMEGA_EARTH * out.r.y,
             -sw * vxi + cw * vyi - OMEGA_EARTH * out.r.x, vzi};

    out.d = out.r - site.ecef;
    const double rho2 = dot(out.d, out.d);
    out.rho = std::sqrt(rho2);
    out.sinel = dot(out.d, site.up) / out.rho;
    out.rr = dot(out.d, out.v) / out.rho;
}

inline void eval_accel_jerk(const SatCtx& sc, SatEval& e) {
    const double n2 = sc.basis.mean_motion * sc.basis.mean_motion;
    const double w = OMEGA_EARTH, w2 = w * w;
    const Vec3 a{-n2 * e.r.x + 2.0 * w * e.v.y + w2 * e.r.x,
                 -n2 * e.r.y - 2.0 * w * e.v.x + w2 * e.r.y, -n2 * e.r.z};
    const Vec3 j{-n2 * e.v.x + 2.0 * w * a.y + w2 * e.v.x,
                 -n2 * e.v.y - 2.0 * w * a.x + w2 * e.v.y, -n2 * e.v.z};
    const double v2 = dot(e.v, e.v);
    e.raccel = (v2 + dot(e.d, a) - e.rr * e.rr) / e.rho;
    e.rjerk = (3.0 * dot(e.v, a) + dot(e.d, j) - 3.0 * e.rr * e.raccel) / e.rho;
}

RunCtx make_ctx(const RunConfig& cfg, const Constellation& cons) {
    RunCtx ctx;
    ctx.cfg = &cfg;
    ctx.cons = &cons;
    ctx.n_masks = int(cfg.masks_deg.size());
    if (ctx.n_masks > MAX_MASKS) throw std::invalid_argument("too many masks (limit 8)");
    for (double m : cfg.masks_deg) ctx.sin_mask.push_back(std::sin(deg2rad(m)));

    ctx.sats.reserve(cons.satellites.size());
    for (const Satellite& s : cons.satellites) {
        SatCtx sc;
        sc.basis = orbit_basis(s);
        sc.cls = classify(cons, s);
        sc.plane = s.plane_index;
        ctx.n_planes = std::max(ctx.n_planes, s.plane_index);
        ctx.sats.push_back(sc);
    }
    ctx.plane_class.assign(ctx.n_planes + 1, CLASS_GPS);
    for (const SatCtx& sc : ctx.sats) ctx.plane_class[sc.plane] = sc.cls;

    for (double lat : cfg.latitudes_deg)
        ctx.sites.push_back(make_site({lat, cfg.longitude_deg, cfg.height_m}));

    ctx.n_epochs = lround(cfg.duration_days * 86400.0 / cfg.step_s);
    ctx.pair_every = lround(cfg.pair_step_s / cfg.step_s);
    ctx.step = cfg.step_s;
    for (int c = 0; c < N_CLASS; ++c) {
        ctx.span[c] = hist_span_for(cons, c);
        ctx.env[c] = default_rate_envelope(c, Band::X1);
    }
    ctx.k_x1 = BAND_X1.carrier_hz / SPEED_OF_LIGHT;
    return ctx;
}

// Open-pass bookkeeping for one (satellite, mask) inside a block.
struct OpenPass {
    bool open = false;
    bool from_start = false;  // open since the first epoch of the block
    double rise_t = 0.0;
    double rise_rr = 0.0;
    double max_sinel = -1.0;
};

int level_of(const RunCtx& ctx, double sinel) {
    int l = 0;
    while (l < ctx.n_masks && sinel >= ctx.sin_mask[l]) ++l;
    return l;
}

void process_block(const RunCtx& ctx, int lat_idx, long e0, long e1, LatAccum& A) {
    const int n_sat = int(ctx.sats.size());
    const int nm = ctx.n_masks;
    const ObserverSite& site = ctx.sites[lat_idx];
    for (int c = 0; c < N_CLASS; ++c) A.hist_span[c] = ctx.span[c];

    std::vector<double> prev_sinel(n_sat, -2.0), prev_rr(n_sat, 0.0);
    std::vector<signed char> prev_level(n_sat, 0);
    std::vector<OpenPass> open(size_t(n_sat) * nm);
    bool prev_valid = false;

    std::vector<SatEval> ev(n_sat);

    // Bootstrap the epoch before the block so rise/set crossings that span the
    // boundary are interpolated from the same samples in both blocks.
    if (e0 > 0) {
        const double t = double(e0 - 1) * ctx.step;
        const double wt = OMEGA_EARTH * t;
        const double cw = std::cos(wt), sw = std::sin(wt);
        for (int s = 0; s < n_sat; ++s) {
            SatEval e;
            eval_pos_vel(ctx.sats[s], site, t, cw, sw, e);
            prev_sinel[s] = e.sinel;
            prev_rr[s] = e.rr;
            const int l = level_of(ctx, e.sinel);
            prev_level[s] = (signed char)l;
            for (int m = 0; m < l; ++m) {
                OpenPass& p = open[size_t(s) * nm + m];
                p.open = true;
                p.from_start = true;
                p.rise_t = t;
                p.rise_rr = e.rr;
                p.max_sinel = e.sinel;
            }
        }
        prev_valid = true;
    }

    std::vector<short> cls_level(size_t(N_CLASS) * (nm + 1));
    std::vector<short> plane_level(size_t(ctx.n_planes + 1) * (nm + 1));
    std::vector<int> vis_idx;
    vis_idx.reserve(n_sat);

    for (long e = e0; e < e1; ++e) {
        const double t = double(e) * ctx.step;
        const double wt = OMEGA_EARTH * t;
        const double cw = std::cos(wt), sw = std::sin(wt);
        const bool pair_epoch = (e % ctx.pair_every) == 0;

        std::fill(cls_level.begin(), cls_level.end(), short(0));
        std::fill(plane_level.begin(), plane_level.end(), short(0));
        vis_idx.clear();

        for (int s = 0; s < n_sat; ++s) {
            SatEval& sev = ev[s];
            eval_pos_vel(ctx.sats[s], site, t, cw, sw, sev);
            const int c = ctx.sats[s].cls;
            const int l = level_of(ctx, sev.sinel);
            cls_level[size_t(c) * (nm + 1) + l]++;
            plane_level[size_t(ctx.sats[s].plane) * (nm + 1) + l]++;

            if (l > 0) {
                vis_idx.push_back(s);
                eval_accel_jerk(ctx.sats[s], sev);
                const double el_deg = rad2deg(std::asin(std::clamp(sev.sinel, -1.0, 1.0)));
                for (int m = 0; m < l; ++m) {
                    A.el_sum[c][m] += el_deg;
                    A.el_n[c][m]++;
                    if (sev.rho > A.max_range[c][m]) A.max_range[c][m] = sev.rho;
                    if (sev.raccel < A.min_raccel[c][m]) A.min_raccel[c][m] = sev.raccel;
                    if (sev.raccel > A.max_raccel[c][m]) A.max_raccel[c][m] = sev.raccel;
                }
                if (sev.rho < A.min_range[c]) A.min_range[c] = sev.rho;
                const double arr = std::fabs(sev.rr);
                int band = int(el_deg / 5.0);
                band = std::clamp(band, 0, LatAccum::EL_BANDS - 1);
                if (arr > A.rr_band_max[c][band]) A.rr_band_max[c][band] = arr;
                const double aj = std::fabs(sev.rjerk);
                if (aj > A.max_abs_jerk[c]) A.max_abs_jerk[c] = aj;

                const double span = A.hist_span[c];
                int bin = int((sev.rr + span) / (2.0 * span) * HIST_BINS);
                bin = std::clamp(bin, 0, HIST_BINS - 1);
                A.hist[c][bin]++;
                if (sev.rr < A.rr_obs_min[c]) A.rr_obs_min[c] = sev.rr;
                if (sev.rr > A.rr_obs_max[c]) A.rr_obs_max[c] = sev.rr;
                if (sev.raccel < A.prof_min_raccel[c][bin]) A.prof_min_raccel[c][bin] = sev.raccel;
                if (sev.raccel > A.prof_max_raccel[c][bin]) A.prof_max_raccel[c][bin] = sev.raccel;

                A.env_total[c]++;
                const double f = -sev.rr * ctx.k_x1;
                const double fdot = -sev.raccel * ctx.k_x1;
                if (!ctx.env[c].contains(f, fdot)) A.env_out[c]++;
            }

            // Rise/set crossings against every mask level passed or left.
            const int pl = prev_valid ? prev_level[s] : (e == e0 && e0 == 0 ? 0 : l);
            if (l != pl || l > 0) {
                const double sp = prev_valid ? prev_sinel[s] : -2.0;
                const double rp = prev_valid ? prev_rr[s] : sev.rr;
                const bool first_window_epoch = (e == 0);
                for (int m = 0; m < nm; ++m) {
                    OpenPass& p = open[size_t(s) * nm + m];
                    const bool was = pl > m && !first_window_epoch;
                    const bool now = l > m;
                    if (now && !was) {
                        p.open = true;
                        p.from_start = false;
                        if (first_window_epoch) {
                            // Window-truncated rise: flagged via from_start in
                            // the first block only.
                            p.from_start = true;
                            p.rise_t = t;
                            p.rise_rr = sev.rr;
                        } else {
                            const double fr = (ctx.sin_mask[m] - sp) / (sev.sinel - sp);
                            p.rise_t = (t - ctx.step) + ctx.step * fr;
                            p.rise_rr = rp + (sev.rr - rp) * fr;
                        }
                        p.max_sinel = sev.sinel;
                    } else if (was && !now) {
                        const double fr = (sp - ctx.sin_mask[m]) / (sp - sev.sinel);
                        PassRecord rec;
                        rec.sat_index = s;
                        rec.mask_index = m;
                        rec.rise_t = p.rise_t;
                        rec.set_t = (t - ctx.step) + ctx.step * fr;
                        rec.max_elevation_deg =
                            rad2deg(std::asin(std::clamp(p.max_sinel, -1.0, 1.0)));
                        rec.rise_range_rate = p.rise_rr;
                        rec.trunc_start = p.from_start;
                        rec.trunc_end = false;
                        A.passes.push_back(rec);
                        p.open = false;
                    } else if (now) {
                        if (sev.sinel > p.max_sinel) p.max_sinel = sev.sinel;
                    }
                }
            }

            prev_sinel[s] = sev.sinel;
            prev_rr[s] = sev.rr;
            prev_level[s] = (signed char)l;
        }
        prev_valid = true;

        // Per-epoch in-view counts: suffix sums over levels.
        int vis_cls[N_CLASS];
        for (int m = nm - 1; m >= 0; --m) {
            for (int c = 0; c < N_CLASS; ++c) {
                int cnt = 0;
                for (int l = m + 1; l <= nm; ++l) cnt += cls_level[size_t(c) * (nm + 1) + l];
                vis_cls[c] = cnt;
            }
            A.in_view[GROUP_SATS_ALL][m].add(vis_cls[0] + vis_cls[1] + vis_cls[2]);
            A.in_view[GROUP_SATS_INCLINED][m].add(vis_cls[CLASS_INCLINED]);
            A.in_view[GROUP_SATS_POLAR][m].add(vis_cls[CLASS_POLAR]);

            int planes_all = 0, planes_cls[N_CLASS] = {0, 0, 0};
            int sp_max[N_CLASS] = {0, 0, 0};
            for (int p = 1; p <= ctx.n_planes; ++p) {
                int cnt = 0;
                for (int l = m + 1; l <= nm; ++l) cnt += plane_level[size_t(p) * (nm + 1) + l];
                if (cnt > 0) {
                    planes_all++;
                    planes_cls[ctx.plane_class[p]]++;
                }
                if (cnt > sp_max[ctx.plane_class[p]]) sp_max[ctx.plane_class[p]] = cnt;
            }
            A.in_view[GROUP_PLANES_ALL][m].add(planes_all);
            A.in_view[GROUP_PLANES_INCLINED][m].add(planes_cls[CLASS_INCLINED]);
            A.in_view[GROUP_PLANES_POLAR][m].add(planes_cls[CLASS_POLAR]);
            A.in_view[GROUP_SAME_PLANE_MAX_INCLINED][m].add(sp_max[CLASS_INCLINED]);
            A.in_view[GROUP_SAME_PLANE_MAX_POLAR][m].add(sp_max[CLASS_POLAR]);
        }

        if (pair_epoch && vis_idx.size() > 1) {
            const int nv = int(vis_idx.size());
            for (int a = 0; a < nv; ++a) {
                const int sa = vis_idx[a];
                const SatEval& ea = ev[sa];
                const int la = prev_level[sa];
                for (int b = a + 1; b < nv; ++b) {
                    const int sb = vis_idx[b];
                    const SatEval& eb = ev[sb];
                    const int mm = std::min<int>(la, prev_level[sb]);
                    const double dr = std::fabs(ea.rho - eb.rho);
                    const int ca = ctx.sats[sa].cls, cb = ctx.sats[sb].cls;
                    for (int m = 0; m < mm; ++m) {
                        if (dr > A.pair_max_drange[SCOPE_ALL][m])
                            A.pair_max_drange[SCOPE_ALL][m] = dr;
                        A.pair_n[SCOPE_ALL][m]++;
                    }
                    if (ca == cb && ca != CLASS_GPS) {
                        const int scope = ca == CLASS_INCLINED ? SCOPE_INCLINED : SCOPE_POLAR;
                        for (int m = 0; m < mm; ++m) {
                            if (dr > A.pair_max_drange[scope][m]) A.pair_max_drange[scope][m] = dr;
                            A.pair_n[scope][m]++;
                        }
                        if (ctx.sats[sa].plane == ctx.sats[sb].plane) {
                            const int sps = ca == CLASS_INCLINED ? SCOPE_SAME_PLANE_INCLINED
                                                                 : SCOPE_SAME_PLANE_POLAR;
                            const double drr = std::fabs(ea.rr - eb.rr);
                            const double dacc = std::fabs(ea.raccel - eb.raccel);
                            for (int m = 0; m < mm; ++m) {
                                if (dr > A.pair_max_drange[sps][m]) A.pair_max_drange[sps][m] = dr;
                                A.pair_n[sps][m]++;
                                if (drr < A.sp_min_drr[ca][m]) A.sp_min_drr[ca][m] = drr;
                                if (drr > A.sp_max_drr[ca][m]) A.sp_max_drr[ca][m] = drr;
                                if (dacc > A.sp_max_draccel[ca][m]) A.sp_max_draccel[ca][m] = dacc;
                            }
                        }
                    }
                }
            }
        }
    }

    // Flush passes still open at the block end; the next block (or nothing,
    // at the window end) continues them.
    const double t_last = double(e1 - 1) * ctx.step;
    for (int s = 0; s < n_sat; ++s)
        for (int m = 0; m < nm; ++m) {
            OpenPass& p = open[size_t(s) * nm + m];
            if (!p.open) continue;
            PassRecord rec;
            rec.sat_index = s;
            rec.mask_index = m;
            rec.rise_t = p.rise_t;
            rec.set_t = t_last;
            rec.max_elevation_deg = rad2deg(std::asin(std::clamp(p.max_sinel, -1.0, 1.0)));
            rec.rise_range_rate = p.rise_rr;
            rec.trunc_start = p.from_start;
            rec.trunc_end = true;
            A.passes.push_back(rec);
        }
}

}  // namespace

LatAccum::LatAccum() {
    const double inf = std::numeric_limits<double>::infinity();
    for (int c = 0; c < N_CLASS; ++c) {
        min_range[c] = inf;
        max_abs_jerk[c] = 0.0;
        rr_obs_min[c] = inf;
        rr_obs_max[c] = -inf;
        for (int m = 0; m < MAX_MASKS; ++m) {
            max_range[c][m] = 0.0;
            min_raccel[c][m] = inf;
            max_raccel[c][m] = -inf;
        }
        for (int b = 0; b < EL_BANDS; ++b) rr_band_max[c][b] = 0.0;
        for (int b = 0; b < HIST_BINS; ++b) {
            prof_min_raccel[c][b] = inf;
            prof_max_raccel[c][b] = -inf;
        }
    }
    for (int s = 0; s < N_SCOPE; ++s)
        for (int m = 0; m < MAX_MASKS; ++m) pair_max_drange[s][m] = 0.0;
    for (int c = 0; c < 2; ++c)
        for (int m = 0; m < MAX_MASKS; ++m) {
            sp_min_drr[c][m] = inf;
            sp_max_drr[c][m] = 0.0;
            sp_max_draccel[c][m] = 0.0;
        }
}

void LatAccum::merge(const LatAccum& o,
                     std::vector<std::array<std::int32_t, MAX_MASKS>>& pending) {
    for (int c = 0; c < N_CLASS; ++c) {
        for (int m = 0; m < MAX_MASKS; ++m) {
            el_sum[c][m] += o.el_sum[c][m];
            el_n[c][m] += o.el_n[c][m];
            max_range[c][m] = std::max(max_range[c][m], o.max_range[c][m]);
            min_raccel[c][m] = std::min(min_raccel[c][m], o.min_raccel[c][m]);
            max_raccel[c][m] = std::max(max_raccel[c][m], o.max_raccel[c][m]);
        }
        min_range[c] = std::min(min_range[c], o.min_range[c]);
        max_abs_jerk[c] = std::max(max_abs_jerk[c], o.max_abs_jerk[c]);
        for (int b = 0; b < EL_BANDS; ++b)
            rr_band_max[c][b] = std::max(rr_band_max[c][b], o.rr_band_max[c][b]);
        hist_span[c] = o.hist_span[c] != 0.0 ? o.hist_span[c] : hist_span[c];
        for (int b = 0; b < HIST_BINS; ++b) {
            hist[c][b] += o.hist[c][b];
            prof_min_raccel[c][b] = std::min(prof_min_raccel[c][b], o.prof_min_raccel[c][b]);
            prof_max_raccel[c][b] = std::max(prof_max_raccel[c][b], o.prof_max_raccel[c][b]);
        }
        rr_obs_min[c] = std::min(rr_obs_min[c], o.rr_obs_min[c]);
        rr_obs_max[c] = std::max(rr_obs_max[c], o.rr_obs_max[c]);
        env_total[c] += o.env_total[c];
        env_out[c] += o.env_out[c];
    }
    for (int g = 0; g < N_GROUP; ++g)
        for (int m = 0; m < MAX_MASKS; ++m) in_view[g][m].merge(o.in_view[g][m]);
    for (int s = 0; s < N_SCOPE; ++s)
        for (int m = 0; m < MAX_MASKS; ++m) {
            pair_max_drange[s][m] = std::max(pair_max_drange[s][m], o.pair_max_drange[s][m]);
            pair_n[s][m] += o.pair_n[s][m];
        }
    for (int c = 0; c < 2; ++c)
        for (int m = 0; m < MAX_MASKS; ++m) {
            sp_min_drr[c][m] = std::min(sp_min_drr[c][m], o.sp_min_drr[c][m]);
            sp_max_drr[c][m] = std::max(sp_max_drr[c][m], o.sp_max_drr[c][m]);
            sp_max_draccel[c][m] = std::max(sp_max_draccel[c][m], o.sp_max_draccel[c][m]);
        }

    for (const PassRecord& f : o.passes) {
        std::int32_t& pend = pending[f.sat_index][f.mask_index];
        if (f.trunc_start && pend >= 0) {
            PassRecord& rec = passes[pend];
            rec.set_t = f.set_t;
            rec.max_elevation_deg = std::max(rec.max_elevation_deg, f.max_elevation_deg);
            rec.trunc_end = f.trunc_end;
            if (!f.trunc_end) pend = -1;
        } else {
            passes.push_back(f);
            pend = f.trunc_end ? std::int32_t(passes.size() - 1) : -1;
        }
    }
}

int classify(const Constellation& c, const Satellite& sat) {
    if (c.name == "gps-24") return CLASS_GPS;
    return is_polar(sat) ? CLASS_POLAR : CLASS_INCLINED;
}

double hist_span_for(const Constellation& c, int orbit_class) {
    double worst = 0.0;
    for (const Satellite& s : c.satellites) {
        if (classify(c, s) != orbit_class) continue;
        const double v = max_relative_speed(s.orbit_radius, s.inclination, WGS84_A);
        worst = std::max(worst, v);
    }
    if (worst == 0.0) worst = 1.0;  // class absent from this constellation
    return worst * 1.01;
}

std::string lat_token(double lat_deg) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", lat_deg);
    return buf;
}

MetricsResult run_metrics(const RunConfig& cfg, int workers) {
    cfg.validate();
    Constellation cons = cfg.constellation_file.empty()
                             ? build_nominal(cfg.constellation, cfg.altitude_reference)
                             : load_constellation_file(cfg.constellation_file);

    RunCtx ctx = make_ctx(cfg, cons);
    const int n_lat = int(cfg.latitudes_deg.size());
    const long n_blocks = (ctx.n_epochs + BLOCK_EPOCHS - 1) / BLOCK_EPOCHS;
    const long n_tasks = long(n_lat) * n_blocks;

    std::vector<LatAccum> partials(n_tasks);
    if (workers > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
        for (long task = 0; task < n_tasks; ++task) {
            const int lat = int(task / n_blocks);
            const long blk = task % n_blocks;
            const long e0 = blk * BLOCK_EPOCHS;
            const long e1 = std::min(e0 + BLOCK_EPOCHS, ctx.n_epochs);
            process_block(ctx, lat, e0, e1, partials[task]);
        }
    } else {
        for (long task = 0; task < n_tasks; ++task) {
            const int lat = int(task / n_blocks);
            const long blk = task % n_blocks;
            const long e0 = blk * BLOCK_EPOCHS;
            const long e1 = std::min(e0 + BLOCK_EPOCHS, ctx.n_epochs);
            process_block(ctx, lat, e0, e1, partials[task]);
        }
    }

    MetricsResult res;
    res.config = cfg;
    res.constellation = cons;
    for (const Satellite& s : cons.satellites) res.sat_class.push_back(classify(cons, s));
    res.per_lat.resize(n_lat);
    for (int lat = 0; lat < n_lat; ++lat) {
        std::vector<std::array<std::int32_t, MAX_MASKS>> pending(
            cons.satellites.size(), {{-1, -1, -1, -1, -1, -1, -1, -1}});
        for (long blk = 0; blk < n_blocks; ++blk)
            res.per_lat[lat].merge(partials[size_t(lat) * n_blocks + blk], pending);
    }
    return res;
}

MetricsResult run_metrics_serial(const RunConfig& cfg) { return run_metrics(cfg, 1); }

namespace {

void format_csv_block(const RunCtx& ctx, int lat_idx, long e0, long e1,
                      const std::vector<BandSpec>& bands, std::string& out) {
    const int n_sat = int(ctx.sats.size());
    const ObserverSite& site = ctx.sites[lat_idx];
    const bool log_all = ctx.cfg->log_all;
    char buf[512];
    out.clear();
    for (long e = e0; e < e1; ++e) {
        const double t = double(e) * ctx.step;
        const double wt = OMEGA_EARTH * t;
        const double cw = std::cos(wt), sw = std::sin(wt);
        for (int s = 0; s < n_sat; ++s) {
            SatEval ev;
            eval_pos_vel(ctx.sats[s], site, t, cw, sw, ev);
            if (!log_all && ev.sinel < ctx.sin_mask[0]) continue;
            eval_accel_jerk(ctx.sats[s], ev);
            const double el = rad2deg(std::asin(std::clamp(ev.sinel, -1.0, 1.0)));
            const double east = dot(ev.d, site.east), north = dot(ev.d, site.north);
            double az = rad2deg(std::atan2(east, north));
            if (az < 0.0) az += 360.0;
            const Satellite& sat = ctx.cons->satellites[s];
            int n = std::snprintf(buf, sizeof buf, "%.3f,%d,%d,%d,%.6f,%.6f,%.3f,%.6f", t,
                                  sat.svid, sat.prn_id, sat.plane_index, el, az, ev.rho, ev.rr);
            out.append(buf, n);
            for (const BandSpec& b : bands) {
                const double k = b.carrier_hz / SPEED_OF_LIGHT;
                n = std::snprintf(buf, sizeof buf, ",%.3f,%.6f", -ev.rr * k, -ev.raccel * k);
                out.append(buf, n);
            }
            out.push_back('\n');
        }
    }
}

}  // namespace

std::vector<std::string> run_simulate(const RunConfig& cfg, const std::string& out_dir,
                                      int workers) {
    cfg.validate();
    Constellation cons = cfg.constellation_file.empty()
                             ? build_nominal(cfg.constellation, cfg.altitude_reference)
                             : load_constellation_file(cfg.constellation_file);
    RunCtx ctx = make_ctx(cfg, cons);
    std::vector<BandSpec> bands;
    for (const std::string& name : cfg.effective_bands()) bands.push_back(band_spec(name));

    std::filesystem::create_directories(out_dir);
    std::vector<std::string> paths;
    const long n_blocks = (ctx.n_epochs + BLOCK_EPOCHS - 1) / BLOCK_EPOCHS;
    const int wave = std::max(workers, 1);

    for (size_t lat = 0; lat < cfg.latitudes_deg.size(); ++lat) {
        const std::string path =
            out_dir + "/observables_lat" + lat_token(cfg.latitudes_deg[lat]) + ".csv";
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path);
        f << "time_s,svid,prn,plane,elev_deg,az_deg,range_m,range_rate_mps";
        for (const BandSpec& b : bands)
            f << "," << b.name << "_doppler_hz," << b.name << "_doppler_rate_hzps";
        f << "\n";

        std::vector<std::string> bufs(wave);
        for (long b0 = 0; b0 < n_blocks; b0 += wave) {
            const long nb = std::min<long>(wave, n_blocks - b0);
            if (workers > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
                for (long i = 0; i < nb; ++i) {
                    const long e0 = (b0 + i) * BLOCK_EPOCHS;
                    const long e1 = std::min(e0 + BLOCK_EPOCHS, ctx.n_epochs);
                    format_csv_block(ctx, int(lat), e0, e1, bands, bufs[i]);
                }
            } else {
                for (long i = 0; i < nb; ++i) {
                    const long e0 = (b0 + i) * BLOCK_EPOCHS;
                    const long e1 = std::min(e0 + BLOCK_EPOCHS, ctx.n_epochs);
                    format_csv_block(ctx, int(lat), e0, e1, bands, bufs[i]);
                }
            }
            for (long i = 0; i < nb; ++i) f << bufs[i];
        }
        paths.push_back(path);
    }
    return paths;
}

std::string metrics_digest(const MetricsResult& r) {
    std::string out;
    char buf[256];
    auto put = [&](const char* tag, double v) {
        int n = std::snprintf(buf, sizeof buf, "%s=%.17g\n", tag, v);
        out.append(buf, n);
    };
    for (size_t lat = 0; lat < r.per_lat.size(); ++lat) {
        const LatAccum& A = r.per_lat[lat];
        const int nm = int(r.config.masks_deg.size());
        int n = std::snprintf(buf, sizeof buf, "lat %.6f\n", r.config.latitudes_deg[lat]);
        out.append(buf, n);
        for (int c = 0; c < N_CLASS; ++c) {
            for (int m = 0; m < nm; ++m) {
                put("el_sum", A.el_sum[c][m]);
                put("el_n", double(A.el_n[c][m]));
                put("max_range", A.max_range[c][m]);
                put("min_raccel", A.min_raccel[c][m]);
                put("max_raccel", A.max_raccel[c][m]);
            }
            put("min_range", A.min_range[c]);
            put("max_abs_jerk", A.max_abs_jerk[c]);
            put("rr_obs_min", A.rr_obs_min[c]);
            put("rr_obs_max", A.rr_obs_max[c]);
            put("env_total", double(A.env_total[c]));
            put("env_out", double(A.env_out[c]));
            for (int b = 0; b < LatAccum::EL_BANDS; ++b) put("rr_band", A.rr_band_max[c][b]);
            for (int b = 0; b < HIST_BINS; ++b) put("hist", double(A.hist[c][b]));
        }
        for (int g = 0; g < N_GROUP; ++g)
            for (int m = 0; m < nm; ++m) {
                put("iv_min", A.in_view[g][m].mn);
                put("iv_max", A.in_view[g][m].mx);
                put("iv_sum", A.in_view[g][m].sum);
                put("iv_n", double(A.in_view[g][m].n));
            }
        for (int s = 0; s < N_SCOPE; ++s)
            for (int m = 0; m < nm; ++m) {
                put("pair_dr", A.pair_max_drange[s][m]);
                put("pair_n", double(A.pair_n[s][m]));
            }
        for (int c = 0; c < 2; ++c)
            for (int m = 0; m < nm; ++m) {
                put("sp_min_drr", A.sp_min_drr[c][m]);
                put("sp_max_drr", A.sp_max_drr[c][m]);
                put("sp_max_dacc", A.sp_max_draccel[c][m]);
            }
        n = std::snprintf(buf, sizeof buf, "passes %zu\n", A.passes.size());
        out.append(buf, n);
        for (const PassRecord& p : A.passes) {
            n = std::snprintf(buf, sizeof buf, "p %d %d %.17g %.17g %.17g %.17g %d %d\n",
                              p.sat_index, p.mask_index, p.rise_t, p.set_t,
                              p.max_elevation_deg, p.rise_range_rate, int(p.trunc_start),
                              int(p.trunc_end));
            out.append(buf, n);
        }
    }
    return out;
}

}  // namespace pulsar
