#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pulsar {

// Fibonacci LFSR: stage i occupies bit i-1, output is the last stage, the
// feedback parity of the tapped stages shifts into stage 1.
struct LfsrSpec {
    int degree = 0;
    std::uint32_t taps = 0;   // bit i-1 set = stage i tapped
    std::uint32_t init = 0;   // initial register state

    static std::uint32_t tap_mask(std::initializer_list<int> stages);
};

enum class CodeFamily { MSequence, Kasami, Gold, Overlay, Custom };

struct ChipSequence {
    std::vector<std::int8_t> chips;  // +1 / -1
    CodeFamily family = CodeFamily::Custom;
    double chip_rate = 0.0;

    int length() const { return int(chips.size()); }
};

// Built-in register definitions: the two degree-10 registers of the L1 C/A
// lineage, a degree-5 register completing the Kasami construction, and the
// degree-13 pair behind the 10230-chip codes.
LfsrSpec g1_spec();  // x^10 + x^3 + 1, all-ones start
LfsrSpec g2_spec();  // x^10 + x^9 + x^8 + x^6 + x^3 + x^2 + 1, all-ones start
LfsrSpec xc_spec();  // x^5 + x^4 + x^3 + x^2 + 1, all-ones start
LfsrSpec xa13_spec();  // x^13 + x^12 + x^10 + x^9 + 1, all-ones start
LfsrSpec xb13_spec();  // x^13 + x^12 + x^8 + x^7 + x^6 + x^4 + x^3 + x + 1

// n chips of the register's output. Throws if the state is stuck at zero.
ChipSequence msequence(const LfsrSpec& spec, int n);

// Small-set Kasami family of the base sequence: u and u xor the 31 cyclic
// shifts of its decimation by 33. 32 codes, correlation bound 33.
std::vector<ChipSequence> kasami_small_set(const ChipSequence& base);

// u xor (v cyclically left-shifted). shift -1/-2 select u/v themselves.
ChipSequence gold_pair(const ChipSequence& u, const ChipSequence& v, int shift);
std::vector<ChipSequence> gold_family(const ChipSequence& u, const ChipSequence& v);

// Three-register 1023-chip generator: XA xor XB xor XC per chip. A zeroed XB
// leaves the Kasami pair (XA xor XC); a zeroed XC leaves the Gold pair.
ChipSequence x1_generator(std::uint32_t xa_init, std::uint32_t xb_init, std::uint32_t xc_init);

// Two-register 10230-chip generator; XA restarts after 8190 chips, XB runs
// its natural 8191 period.
ChipSequence x5_generator(std::uint32_t xb_init);

// Built-in plane-to-code map: PRN 1..16 use the Kasami small set (two codes
// per plane for the data/pilot channels), PRN 17..18 the four Gold codes.
ChipSequence x1_code_for_prn(int prn_id, bool pilot);

struct CorrelationProfile {
    std::vector<long long> values;  // circular lag 0..n-1
    long long peak = 0;             // max |value|
    int peak_lag = 0;
    long long max_off_peak = 0;     // max |value| away from the peak lag
};

// Integer circular correlation at every lag; transform-accelerated but
// integer-exact (results are rounded from a unitary-scaled FFT product and
// verified against the direct sum in the tests).
CorrelationProfile circular_correlation(const ChipSequence& a, const ChipSequence& b);

// Direct O(n^2) reference.
std::vector<long long> correlation_direct(const ChipSequence& a, const ChipSequence& b);

// Max |correlation| over all distinct pairs at every lag plus every
// autocorrelation off-peak, across the whole family.
long long family_max_abs_correlation(const std::vector<ChipSequence>& codes);

double correlation_db(long long value, int length);  // 20 log10(|v|/n)

// Max pairwise correlation of a set of equal-length overlay codes, in dB.
double overlay_check(const std::vector<ChipSequence>& codes);

// 0/1 text and hex import/export; bit 0 maps to chip +1.
std::string to_bits(const ChipSequence& c);
ChipSequence from_bits(const std::string& bits);
std::string to_hex(const ChipSequence& c);
ChipSequence from_hex(const std::string& hex, int n_chips);
std::string profile_csv(const CorrelationProfile& p);

}  // namespace pulsar
