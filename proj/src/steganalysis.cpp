#include "inkmark/steganalysis.hpp"

#include <stdexcept>

namespace inkmark {

ParitySequence parity_sequence(const BinaryImage& img, int step) {
    StripLayout layout = StripLayout::of(img.height, step);
    ParitySequence seq;
    for (int k = 0; k < layout.strip_count; ++k) {
        for (int x = 0; x < img.width; ++x) {
            int num = 0;
            for (int y = 0; y < step; ++y) num += img.at(x, k * step + y);
            // Every inked column contributes, not only the fit ones: an
            // observer scanning for the watermark has no fitness oracle.
            if (num > 0) seq.values.push_back(std::uint8_t(num % 2));
        }
    }
    return seq;
}

AcorrValues autocorr(const ParitySequence& seq, std::size_t max_lag) {
    const std::size_t n = seq.values.size();
    if (n == 0) throw EmptySequence();
    if (max_lag >= n) throw std::invalid_argument("max_lag must be below sequence length");

    AcorrValues out;
    out.lags.reserve(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        std::uint64_t sum = 0;
        for (std::size_t i = 0; i + k < n; ++i)
            sum += std::uint64_t(seq.values[i]) * seq.values[i + k];
        out.lags.emplace_back(k, sum);
    }
    return out;
}

std::vector<std::pair<std::size_t, std::int64_t>> acorr_diff(const AcorrValues& before,
                                                             const AcorrValues& after) {
    if (before.lags.size() != after.lags.size()) throw LagMismatch();
    std::vector<std::pair<std::size_t, std::int64_t>> diff;
    diff.reserve(before.lags.size());
    for (std::size_t i = 0; i < before.lags.size(); ++i) {
        if (before.lags[i].first != after.lags[i].first) throw LagMismatch();
        diff.emplace_back(before.lags[i].first,
                          std::int64_t(after.lags[i].second) -
                              std::int64_t(before.lags[i].second));
    }
    return diff;
}

}  // namespace inkmark
