#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "inkmark/errors.hpp"

namespace inkmark {

/// Black-white raster, row-major, 1 = black. The watermark container.
struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> grid;  // width * height entries, each 0 or 1

    static BinaryImage blank(int width, int height);

    std::uint8_t at(int x, int y) const { return grid[std::size_t(y) * width + x]; }
    void set(int x, int y, std::uint8_t v) { grid[std::size_t(y) * width + x] = v; }
    std::size_t pixel_count() const { return grid.size(); }

    bool operator==(const BinaryImage&) const = default;
};

/// 8-bit graymap, row-major, intensities in [0, 255].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> grid;

    static GrayImage blank(int width, int height, std::uint8_t value = 0);

    std::uint8_t at(int x, int y) const { return grid[std::size_t(y) * width + x]; }
    void set(int x, int y, std::uint8_t v) { grid[std::size_t(y) * width + x] = v; }

    bool operator==(const GrayImage&) const = default;
};

enum class PbmFormat { P1, P4 };
enum class PgmFormat { P2, P5 };

/// Parses a netpbm bitmap (P1 ascii or P4 packed). PBM stores 1 for black,
/// which matches the internal convention directly. P4 row padding bits are
/// discarded.
BinaryImage load_pbm(std::span<const std::uint8_t> bytes);

/// Serializes a bitmap. P4 output is canonical: "P4\n<w> <h>\n" followed by
/// MSB-first packed rows with zero padding, no comments. The canonical P4
/// byte form is what the ledger hashes.
std::vector<std::uint8_t> save_pbm(const BinaryImage& img, PbmFormat format);

/// Parses a netpbm graymap (P2 ascii or P5 raw), maxval up to 255.
GrayImage load_pgm(std::span<const std::uint8_t> bytes);

/// Serializes a graymap with maxval 255.
std::vector<std::uint8_t> save_pgm(const GrayImage& img, PgmFormat format);

/// Otsu's threshold: the intensity t in [0, 255] maximizing the between-class
/// variance of the 256-bin histogram. Ties take the smallest t; a constant
/// image yields that constant. Comparisons are exact integer arithmetic, so
/// the result is identical across platforms.
int otsu_threshold(const GrayImage& img);

/// bit = 1 iff intensity <= t (dark ink on light paper becomes black).
BinaryImage binarize(const GrayImage& img, int t);

/// Deterministic synthetic page: `stroke_count` random polyline strokes,
/// 1-3 pixels thick, mixing near-vertical runs (dense, codable columns) with
/// near-horizontal ones (sparse columns). Drawing is driven by SplitMix64
/// seeded with `seed`: state advances by 0x9E3779B97F4A7C15 and the output
/// finalizer multiplies by 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB with
/// shifts 30/27/31; bounded draws are next() mod n. Identical arguments give
/// identical grids on every platform.
BinaryImage generate_synthetic(int width, int height, int stroke_count,
                               std::uint64_t seed);

/// Positions (x, y) where the two images differ, scanned row by row.
std::vector<std::pair<int, int>> pixel_diff(const BinaryImage& a,
                                            const BinaryImage& b);

}  // namespace inkmark
