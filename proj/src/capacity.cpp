#include "inkmark/capacity.hpp"

#include <algorithm>
#include <limits>

namespace inkmark {

std::size_t capacity_bits(const BinaryImage& img, int step) {
    StripLayout layout = StripLayout::of(img.height, step);
    std::size_t fit = 0;
    for (int k = 0; k < layout.strip_count; ++k) {
        for (int x = 0; x < img.width; ++x) {
            // A column is usable iff its in-strip black count reaches half
            // the strip height.
            int num = 0;
            for (int y = 0; y < step; ++y) num += img.at(x, k * step + y);
            if (2 * num >= step) ++fit;
        }
    }
    return fit;
}

CapacityCurve capacity_curve(const BinaryImage& img, std::span<const int> steps) {
    CapacityCurve curve;
    curve.entries.reserve(steps.size());
    for (int step : steps) curve.entries.emplace_back(step, capacity_bits(img, step));
    return curve;
}

int recommend_step(std::span<const BinaryImage> images, std::span<const int> steps,
                   std::size_t required_bits) {
    if (images.empty() || steps.empty())
        throw std::invalid_argument("recommend_step needs images and steps");

    bool found = false;
    int best_step = 0;
    std::size_t best_spread = std::numeric_limits<std::size_t>::max();
    for (int step : steps) {
        std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0;
        for (const BinaryImage& img : images) {
            std::size_t d = capacity_bits(img, step);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        if (lo < required_bits) continue;
        std::size_t spread = hi - lo;
        if (!found || spread < best_spread ||
            (spread == best_spread && step < best_step)) {
            found = true;
            best_spread = spread;
            best_step = step;
        }
    }
    if (!found) throw NoFeasibleStep(required_bits);
    return best_step;
}

}  // namespace inkmark
