#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skewlab/ddreal.hpp"

namespace skewlab {

enum class FreqKind { IAlpha, SqrtI, Power, Random, Constant, File };

// Generating rule for a frequency vector omega_1..omega_M.
//   IAlpha   : omega_i = i * alpha          (circle-rotation frequencies)
//   SqrtI    : omega_i = sqrt(i)
//   Power    : omega_i = i^alpha / N^beta   (alpha, beta non-integer, alpha > beta - 2)
//   Random   : omega_i uniform on [0,2), counter-based from `seed`
//   Constant : omega_i = c
//   File     : one decimal real per line
struct FrequencySpec {
    FreqKind kind = FreqKind::Constant;
    DD alpha{0.0};      // IAlpha / Power
    double beta = 0.0;  // Power
    std::uint64_t seed = 0;
    double constant = 0.0;
    std::string path;
    std::string text; // original spec string, kept verbatim for manifests

    std::string to_string() const;
};

struct FrequencySequence {
    FrequencySpec spec;
    int M = 0;
    std::vector<DD> values;
};

// Builds omega_1..omega_M in extended precision. N is only consulted for
// the Power kind (the N^beta rescaling).
FrequencySequence make_frequencies(const FrequencySpec& spec, int M, int N);

// Mini-language: ialpha:<float|sqrt2> | sqrti | power:<alpha>:<beta>
//                | random:seed=<u64> | constant:<float> | file:<path>
FrequencySpec parse_freq_spec(const std::string& text);

} // namespace skewlab
