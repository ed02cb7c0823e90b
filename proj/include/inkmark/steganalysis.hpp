#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "inkmark/codec.hpp"
#include "inkmark/image.hpp"

namespace inkmark {

/// Column parities of every column with at least one black pixel, strips
/// concatenated in scan order. Includes columns too sparse to carry a bit,
/// which is exactly what an observer without the step parameter would see.
struct ParitySequence {
    std::vector<std::uint8_t> values;
};

/// Unnormalized autocorrelation: value at lag k is the raw product sum
/// sum_i values[i] * values[i+k]. Lag 0 therefore counts the odd-parity
/// columns.
struct AcorrValues {
    std::vector<std::pair<std::size_t, std::uint64_t>> lags;
};

ParitySequence parity_sequence(const BinaryImage& img, int step);

/// Lags 0..max_lag. Throws EmptySequence on an empty sequence; max_lag must
/// be below the sequence length.
AcorrValues autocorr(const ParitySequence& seq, std::size_t max_lag);

/// Entry-wise after - before. Throws LagMismatch when the lag sets differ.
std::vector<std::pair<std::size_t, std::int64_t>> acorr_diff(const AcorrValues& before,
                                                             const AcorrValues& after);

}  // namespace inkmark
