#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "inkmark/codec.hpp"
#include "inkmark/image.hpp"

namespace inkmark {

/// Capacity per strip height, for plotting "step,d" curves.
struct CapacityCurve {
    std::vector<std::pair<int, std::size_t>> entries;
};

/// Number of fit columns across all full strips: the maximum watermark
/// length the page can carry at this step. A page shorter than one strip
/// has capacity 0.
std::size_t capacity_bits(const BinaryImage& img, int step);

CapacityCurve capacity_curve(const BinaryImage& img, std::span<const int> steps);

/// Defaults to the 1300-bit payload budget.
inline constexpr std::size_t kDefaultRequiredBits = 1300;

/// Shared-step selection over a corpus: among steps whose worst-case capacity
/// meets `required_bits`, picks the one with the smallest capacity spread
/// across images, ties resolved to the smallest step. Throws NoFeasibleStep
/// when the floor cannot be met.
int recommend_step(std::span<const BinaryImage> images, std::span<const int> steps,
                   std::size_t required_bits = kDefaultRequiredBits);

}  // namespace inkmark
