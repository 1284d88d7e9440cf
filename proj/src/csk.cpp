#include "pulsar/csk.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace pulsar {

namespace {

std::mutex planner_mu;  // FFTW planning is not thread-safe

void check_args(const ChipSequence& prn, int symbol) {
    if (symbol < 0 || symbol > 255) throw std::invalid_argument("CSK symbol outside 0..255");
    if (prn.length() < 256) throw std::invalid_argument("PRN shorter than the shift alphabet");
}

void check_block(const std::vector<std::int8_t>& rx, const ChipSequence& prn) {
    if (int(rx.size()) != 2 * prn.length())
        throw std::invalid_argument("CSK block must span exactly two code periods");
}

// Decision over metrics for shifts 0..255, ties toward the smaller shift.
CskDecision decide(const long long* metric) {
    CskDecision d;
    d.value = 0;
    d.metric = metric[0];
    long long second = std::numeric_limits<long long>::min();
    for (int v = 1; v < 256; ++v) {
        if (metric[v] > d.metric) {
            second = d.metric;
            d.metric = metric[v];
            d.value = v;
        } else if (metric[v] > second) {
            second = metric[v];
        }
    }
    d.margin = second > 0 ? double(d.metric) / double(second)
                          : std::numeric_limits<double>::infinity();
    return d;
}

}  // namespace

std::vector<std::int8_t> csk_modulate(const ChipSequence& prn, int symbol) {
    check_args(prn, symbol);
    const int n = prn.length();
    std::vector<std::int8_t> out(size_t(2) * n);
    for (int k = 0; k < n; ++k) {
        const std::int8_t chip = prn.chips[(k + symbol) % n];
        out[k] = chip;
        out[k + n] = chip;
    }
    return out;
}

CskDecision csk_demodulate(const std::vector<std::int8_t>& rx, const ChipSequence& prn) {
    check_block(rx, prn);
    const int n = prn.length();
    const int nc = n / 2 + 1;

    double* re;
    fftw_complex* sa;
    fftw_complex* sb;
    fftw_plan fwd, inv;
    {
        std::lock_guard<std::mutex> lock(planner_mu);
        re = fftw_alloc_real(n);
        sa = fftw_alloc_complex(nc);
        sb = fftw_alloc_complex(nc);
        fwd = fftw_plan_dft_r2c_1d(n, re, sa, FFTW_ESTIMATE);
        inv = fftw_plan_dft_c2r_1d(n, sa, re, FFTW_ESTIMATE);
    }

    // Fold the halves, then correlate the fold against the code once; the
    // first 256 lags are the candidate metrics (doubled).
    for (int k = 0; k < n; ++k) re[k] = double(rx[k]) + double(rx[k + n]);
    fftw_execute_dft_r2c(fwd, re, sa);
    for (int k = 0; k < n; ++k) re[k] = double(prn.chips[k]);
    fftw_execute_dft_r2c(fwd, re, sb);

    const double scale = 1.0 / double(n);
    for (int i = 0; i < nc; ++i) {
        const double ar = sa[i][0], ai = sa[i][1];
        const double br = sb[i][0], bi = sb[i][1];
        // conj(A) * B
        sa[i][0] = (ar * br + ai * bi) * scale;
        sa[i][1] = (ar * bi - ai * br) * scale;
    }
    fftw_execute_dft_c2r(inv, sa, re);

    long long metric[256];
    for (int v = 0; v < 256; ++v) metric[v] = llround(re[v]) / 2;

    {
        std::lock_guard<std::mutex> lock(planner_mu);
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
        fftw_free(re);
        fftw_free(sa);
        fftw_free(sb);
    }
    return decide(metric);
}

CskDecision csk_demodulate_direct(const std::vector<std::int8_t>& rx, const ChipSequence& prn) {
    check_block(rx, prn);
    const int n = prn.length();
    std::vector<int> fold(n);
    for (int k = 0; k < n; ++k) fold[k] = int(rx[k]) + int(rx[k + n]);
    long long metric[256];
    for (int v = 0; v < 256; ++v) {
        long long s = 0;
        for (int k = 0; k < n; ++k) s += fold[k] * prn.chips[(k + v) % n];
        metric[v] = s / 2;
    }
    return decide(metric);
}

std::string csk_decisions_csv(const std::vector<CskDecision>& decisions) {
    std::string out = "index,value,metric,margin\n";
    char buf[96];
    for (size_t i = 0; i < decisions.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%d,%lld,%.6f\n", i, decisions[i].value,
                      decisions[i].metric, decisions[i].margin);
        out += buf;
    }
    return out;
}

}  // namespace pulsar
