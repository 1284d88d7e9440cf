#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pulsar/codes.hpp"

namespace pulsar {

// Code-shift-keying symbol on the data channel: 8 bits carried as a circular
// shift of the primary code, held for two code periods (2 ms on X5).
struct CskSymbol {
    int value = 0;  // 0..255, most-significant bit first in the byte
    int shift_chips() const { return value; }
    static constexpr double duration_s = 2.0e-3;
};

struct CskDecision {
    int value = 0;        // decided symbol
    long long metric = 0;  // folded two-period correlation at the winning shift
    double margin = 0.0;   // best / second-best metric ratio (+inf if the
                           // runner-up is non-positive)
};

// Two concatenated periods of `prn`, each circularly shifted left (early)
// by `symbol` chips. Throws std::invalid_argument for symbol outside 0..255
// or a PRN shorter than the shift alphabet.
std::vector<std::int8_t> csk_modulate(const ChipSequence& prn, int symbol);

// 256-way decision on one aligned two-period block: the halves are summed
// chipwise, the fold is correlated against candidate shifts 0..255 only, and
// the largest metric wins (ties toward the smaller shift). FFT-backed; the
// decisions are identical to csk_demodulate_direct.
CskDecision csk_demodulate(const std::vector<std::int8_t>& rx, const ChipSequence& prn);

// O(256 N) direct-sum reference correlator, the decision oracle in tests.
CskDecision csk_demodulate_direct(const std::vector<std::int8_t>& rx, const ChipSequence& prn);

// CSV of per-symbol decisions: index,value,metric,margin
std::string csk_decisions_csv(const std::vector<CskDecision>& decisions);

}  // namespace pulsar
