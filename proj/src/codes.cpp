#include "pulsar/codes.hpp"

#include <fftw3.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace pulsar {

namespace {

std::mutex planner_mu;  // FFTW planning is not thread-safe; execution is

inline int lfsr_out(std::uint32_t state, int degree) { return int((state >> (degree - 1)) & 1u); }

inline void lfsr_step(std::uint32_t& state, const LfsrSpec& s) {
    const std::uint32_t fb = std::uint32_t(__builtin_parity(state & s.taps));
    state = ((state << 1) | fb) & ((1u << s.degree) - 1u);
}

void check_width(const LfsrSpec& s, std::uint32_t init) {
    if (init >= (1u << s.degree)) throw std::invalid_argument("register state wider than LFSR");
}

// FFT workspace for one sequence length; correlation c(tau) = sum a[k] b[k+tau]
// comes back as IFFT(conj(A) * B), scaled and rounded to the exact integer.
class Correlator {
  public:
    explicit Correlator(int n) : n_(n), nc_(n / 2 + 1) {
        std::lock_guard<std::mutex> lock(planner_mu);
        re_ = fftw_alloc_real(n_);
        sp_ = fftw_alloc_complex(nc_);
        fwd_ = fftw_plan_dft_r2c_1d(n_, re_, sp_, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_c2r_1d(n_, sp_, re_, FFTW_ESTIMATE);
    }
    ~Correlator() {
        std::lock_guard<std::mutex> lock(planner_mu);
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
        fftw_free(re_);
        fftw_free(sp_);
    }
    Correlator(const Correlator&) = delete;
    Correlator& operator=(const Correlator&) = delete;

    std::vector<std::complex<double>> spectrum(const ChipSequence& c) {
        for (int i = 0; i < n_; ++i) re_[i] = double(c.chips[i]);
        fftw_execute_dft_r2c(fwd_, re_, sp_);
        std::vector<std::complex<double>> out(nc_);
        for (int i = 0; i < nc_; ++i) out[i] = {sp_[i][0], sp_[i][1]};
        return out;
    }

    // Inverse transform of conj(A)*B into integer lags.
    void cross(const std::vector<std::complex<double>>& A,
               const std::vector<std::complex<double>>& B, std::vector<long long>& out) {
        const double scale = 1.0 / double(n_);
        for (int i = 0; i < nc_; ++i) {
            const std::complex<double> v = std::conj(A[i]) * B[i] * scale;
            sp_[i][0] = v.real();
            sp_[i][1] = v.imag();
        }
        fftw_execute_dft_c2r(inv_, sp_, re_);
        out.resize(n_);
        for (int i = 0; i < n_; ++i) out[i] = llround(re_[i]);
    }

  private:
    int n_, nc_;
    double* re_;
    fftw_complex* sp_;
    fftw_plan fwd_, inv_;
};

ChipSequence xor_shift(const ChipSequence& u, const ChipSequence& v, int shift,
                       CodeFamily family) {
    const int n = u.length();
    ChipSequence out;
    out.family = family;
    out.chip_rate = u.chip_rate;
    out.chips.resize(n);
    for (int i = 0; i < n; ++i)
        out.chips[i] = std::int8_t(u.chips[i] * v.chips[(i + shift) % n]);
    return out;
}

int chip_sum(const ChipSequence& c) {
    int s = 0;
    for (std::int8_t v : c.chips) s += v;
    return s;
}

}  // namespace

std::uint32_t LfsrSpec::tap_mask(std::initializer_list<int> stages) {
    std::uint32_t m = 0;
    for (int s : stages) m |= 1u << (s - 1);
    return m;
}

LfsrSpec g1_spec() { return {10, LfsrSpec::tap_mask({3, 10}), (1u << 10) - 1}; }
LfsrSpec g2_spec() { return {10, LfsrSpec::tap_mask({2, 3, 6, 8, 9, 10}), (1u << 10) - 1}; }
LfsrSpec xc_spec() { return {5, LfsrSpec::tap_mask({2, 3, 4, 5}), (1u << 5) - 1}; }
LfsrSpec xa13_spec() { return {13, LfsrSpec::tap_mask({9, 10, 12, 13}), (1u << 13) - 1}; }
LfsrSpec xb13_spec() {
    return {13, LfsrSpec::tap_mask({1, 3, 4, 6, 7, 8, 12, 13}), (1u << 13) - 1};
}

ChipSequence msequence(const LfsrSpec& spec, int n) {
    if (spec.degree < 2 || spec.degree > 31) throw std::invalid_argument("bad LFSR degree");
    if (spec.init == 0) throw std::invalid_argument("LFSR stuck at zero state");
    check_width(spec, spec.init);
    ChipSequence out;
    out.family = CodeFamily::MSequence;
    out.chips.resize(n);
    std::uint32_t state = spec.init;
    for (int i = 0; i < n; ++i) {
        out.chips[i] = lfsr_out(state, spec.degree) ? -1 : +1;
        lfsr_step(state, spec);
    }
    return out;
}

std::vector<ChipSequence> kasami_small_set(const ChipSequence& base) {
    const int n = 1023;
    if (base.length() != n) throw std::invalid_argument("Kasami base must be 1023 chips");
    if (chip_sum(base) != -1)
        throw std::invalid_argument("Kasami base is not an m-sequence (unbalanced)");
    // Decimation by 33 has period 31; lay it out over the full length.
    ChipSequence wext;
    wext.chips.resize(n);
    for (int i = 0; i < n; ++i) wext.chips[i] = base.chips[(33 * i) % n];
    std::vector<ChipSequence> family;
    family.reserve(32);
    ChipSequence u = base;
    u.family = CodeFamily::Kasami;
    family.push_back(u);
    for (int k = 0; k < 31; ++k) family.push_back(xor_shift(base, wext, k, CodeFamily::Kasami));
    return family;
}

ChipSequence gold_pair(const ChipSequence& u, const ChipSequence& v, int shift) {
    if (u.length() != v.length()) throw std::invalid_argument("Gold pair length mismatch");
    if (shift == -1 || shift == -2) {
        ChipSequence out = shift == -1 ? u : v;
        out.family = CodeFamily::Gold;
        return out;
    }
    if (shift < 0 || shift >= u.length()) throw std::invalid_argument("Gold shift out of range");
    return xor_shift(u, v, shift, CodeFamily::Gold);
}

std::vector<ChipSequence> gold_family(const ChipSequence& u, const ChipSequence& v) {
    std::vector<ChipSequence> family;
    family.reserve(u.length() + 2);
    family.push_back(gold_pair(u, v, -1));
    family.push_back(gold_pair(u, v, -2));
    for (int s = 0; s < u.length(); ++s) family.push_back(gold_pair(u, v, s));
    return family;
}

ChipSequence x1_generator(std::uint32_t xa_init, std::uint32_t xb_init, std::uint32_t xc_init) {
    if (xa_init == 0 && xb_init == 0 && xc_init == 0)
        throw std::invalid_argument("all registers zero: degenerate all-zero sequence");
    LfsrSpec xa = g1_spec(), xb = g2_spec(), xc = xc_spec();
    xa.init = xa_init;
    xb.init = xb_init;
    xc.init = xc_init;
    check_width(xa, xa_init);
    check_width(xb, xb_init);
    check_width(xc, xc_init);
    ChipSequence out;
    out.family = xb_init == 0 ? CodeFamily::Kasami
                              : (xc_init == 0 ? CodeFamily::Gold : CodeFamily::Custom);
    out.chip_rate = 1.023e6;
    out.chips.resize(1023);
    std::uint32_t sa = xa_init, sb = xb_init, sc = xc_init;
    for (int i = 0; i < 1023; ++i) {
        const int bit = lfsr_out(sa, 10) ^ lfsr_out(sb, 10) ^ lfsr_out(sc, 5);
        out.chips[i] = bit ? -1 : +1;
        lfsr_step(sa, xa);
        lfsr_step(sb, xb);
        lfsr_step(sc, xc);
    }
    return out;
}

ChipSequence x5_generator(std::uint32_t xb_init) {
    if (xb_init == 0) throw std::invalid_argument("XB register zero: degenerate sequence");
    const LfsrSpec xa = xa13_spec();
    LfsrSpec xb = xb13_spec();
    xb.init = xb_init;
    check_width(xb, xb_init);
    ChipSequence out;
    out.family = CodeFamily::Gold;
    out.chip_rate = 10.23e6;
    out.chips.resize(10230);
    std::uint32_t sa = xa.init, sb = xb_init;
    for (int i = 0; i < 10230; ++i) {
        if (i > 0 && i % 8190 == 0) sa = xa.init;  // XA short cycle
        const int bit = lfsr_out(sa, 13) ^ lfsr_out(sb, 13);
        out.chips[i] = bit ? -1 : +1;
        lfsr_step(sa, xa);
        lfsr_step(sb, xb);
    }
    return out;
}

ChipSequence x1_code_for_prn(int prn_id, bool pilot) {
    if (prn_id < 1 || prn_id > 18) throw std::invalid_argument("PRN id out of range 1..18");
    const int channel = pilot ? 1 : 0;
    const ChipSequence u = msequence(g1_spec(), 1023);
    ChipSequence out;
    if (prn_id <= 16) {
        out = kasami_small_set(u)[size_t(2 * (prn_id - 1) + channel)];
    } else {
        const ChipSequence v = msequence(g2_spec(), 1023);
        out = gold_pair(u, v, 2 * (prn_id - 17) + channel);
    }
    out.chip_rate = 1.023e6;
    return out;
}

std::vector<long long> correlation_direct(const ChipSequence& a, const ChipSequence& b) {
    const int n = a.length();
    if (n != b.length()) throw std::invalid_argument("correlation length mismatch");
    std::vector<long long> out(n, 0);
    for (int tau = 0; tau < n; ++tau) {
        long long s = 0;
        for (int k = 0; k < n; ++k) s += a.chips[k] * b.chips[(k + tau) % n];
        out[tau] = s;
    }
    return out;
}

namespace {

CorrelationProfile profile_from(std::vector<long long> values) {
    CorrelationProfile p;
    p.values = std::move(values);
    for (size_t i = 0; i < p.values.size(); ++i)
        if (std::llabs(p.values[i]) > std::llabs(p.values[p.peak_lag])) p.peak_lag = int(i);
    p.peak = std::llabs(p.values[p.peak_lag]);
    for (size_t i = 0; i < p.values.size(); ++i)
        if (int(i) != p.peak_lag) p.max_off_peak = std::max(p.max_off_peak, std::llabs(p.values[i]));
    return p;
}

}  // namespace

CorrelationProfile circular_correlation(const ChipSequence& a, const ChipSequence& b) {
    const int n = a.length();
    if (n != b.length()) throw std::invalid_argument("correlation length mismatch");
    Correlator c(n);
    std::vector<long long> values;
    c.cross(c.spectrum(a), c.spectrum(b), values);
    return profile_from(std::move(values));
}

long long family_max_abs_correlation(const std::vector<ChipSequence>& codes) {
    if (codes.size() < 2) throw std::invalid_argument("family needs at least two codes");
    const int n = codes[0].length();
    for (const ChipSequence& c : codes)
        if (c.length() != n) throw std::invalid_argument("family codes differ in length");

    std::vector<std::vector<std::complex<double>>> spectra(codes.size());
    {
        Correlator c(n);
        for (size_t i = 0; i < codes.size(); ++i) spectra[i] = c.spectrum(codes[i]);
    }
    const int m = int(codes.size());
    long long best = 0;
#pragma omp parallel reduction(max : best)
    {
        Correlator c(n);
        std::vector<long long> values;
#pragma omp for schedule(dynamic, 4)
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                c.cross(spectra[i], spectra[j], values);
                for (int tau = 0; tau < n; ++tau) {
                    if (i == j && tau == 0) continue;  // autocorrelation main peak
                    best = std::max(best, std::llabs(values[tau]));
                }
            }
    }
    return best;
}

double correlation_db(long long value, int length) {
    if (value == 0) return -std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(double(std::llabs(value)) / double(length));
}

double overlay_check(const std::vector<ChipSequence>& codes) {
    if (codes.size() < 2) throw std::invalid_argument("overlay check needs at least two codes");
    const int n = codes[0].length();
    for (const ChipSequence& c : codes)
        if (c.length() != n) throw std::invalid_argument("overlay codes differ in length");
    long long best = 0;
    Correlator c(n);
    std::vector<std::vector<std::complex<double>>> spectra(codes.size());
    for (size_t i = 0; i < codes.size(); ++i) spectra[i] = c.spectrum(codes[i]);
    std::vector<long long> values;
    for (size_t i = 0; i < codes.size(); ++i)
        for (size_t j = i + 1; j < codes.size(); ++j) {
            c.cross(spectra[i], spectra[j], values);
            for (long long v : values) best = std::max(best, std::llabs(v));
        }
    return correlation_db(best, n);
}

std::string to_bits(const ChipSequence& c) {
    std::string out;
    out.reserve(c.chips.size());
    for (std::int8_t v : c.chips) out.push_back(v > 0 ? '0' : '1');
    return out;
}

ChipSequence from_bits(const std::string& bits) {
    ChipSequence out;
    out.chips.reserve(bits.size());
    for (char ch : bits) {
        if (ch == '0')
            out.chips.push_back(+1);
        else if (ch == '1')
            out.chips.push_back(-1);
        else if (ch == '\n' || ch == '\r' || ch == ' ')
            continue;
        else
            throw std::invalid_argument("chip text must be 0/1");
    }
    return out;
}

std::string to_hex(const ChipSequence& c) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    int nibble = 0, used = 0;
    for (std::int8_t v : c.chips) {
        nibble = (nibble << 1) | (v > 0 ? 0 : 1);
        if (++used == 4) {
            out.push_back(digits[nibble]);
            nibble = used = 0;
        }
    }
    if (used) out.push_back(digits[nibble << (4 - used)]);
    return out;
}

ChipSequence from_hex(const std::string& hex, int n_chips) {
    ChipSequence out;
    out.chips.reserve(n_chips);
    for (char ch : hex) {
        int v;
        if (ch >= '0' && ch <= '9')
            v = ch - '0';
        else if (ch >= 'a' && ch <= 'f')
            v = ch - 'a' + 10;
        else if (ch >= 'A' && ch <= 'F')
            v = ch - 'A' + 10;
        else if (ch == '\n' || ch == '\r' || ch == ' ')
            continue;
        else
            throw std::invalid_argument("bad hex digit");
        for (int b = 3; b >= 0 && int(out.chips.size()) < n_chips; --b)
            out.chips.push_back((v >> b) & 1 ? -1 : +1);
    }
    if (int(out.chips.size()) != n_chips)
        throw std::invalid_argument("hex shorter than requested chip count");
    return out;
}

std::string profile_csv(const CorrelationProfile& p) {
    std::string out = "lag,value\n";
    char buf[48];
    for (size_t i = 0; i < p.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%lld\n", i, p.values[i]);
        out += buf;
    }
    return out;
}

}  // namespace pulsar
