#include "inkmark/image.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace inkmark {

namespace {

// Exact-arithmetic limit: between-class variance comparisons stay inside
// unsigned 128-bit integers for up to 2^27 pixels.
constexpr std::size_t kMaxPixels = std::size_t(1) << 27;
constexpr long kMaxDimension = 1'000'000;

void check_dims(int width, int height) {
    if (width <= 0 || height <= 0)
        throw DimensionError("image dimensions must be positive");
    if (std::size_t(width) * std::size_t(height) > kMaxPixels)
        throw DimensionError("image exceeds supported pixel count");
}

struct ByteReader {
    std::span<const std::uint8_t> data;
    std::size_t pos = 0;

    bool eof() const { return pos >= data.size(); }
    int peek() const { return eof() ? -1 : data[pos]; }
    int get() { return eof() ? -1 : data[pos++]; }
};

bool pnm_space(int c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Whitespace and '#' comments are interchangeable separators in headers and
// ascii rasters.
void skip_separators(ByteReader& r) {
    for (;;) {
        while (!r.eof() && pnm_space(r.peek())) ++r.pos;
        if (!r.eof() && r.peek() == '#') {
            while (!r.eof() && r.get() != '\n') {
            }
            continue;
        }
        return;
    }
}

long read_number(ByteReader& r, const char* what) {
    skip_separators(r);
    if (r.eof() || r.peek() < '0' || r.peek() > '9')
        throw ParseError(std::string("expected ") + what, r.pos);
    long value = 0;
    while (!r.eof() && r.peek() >= '0' && r.peek() <= '9') {
        value = value * 10 + (r.get() - '0');
        if (value > kMaxDimension * 1000L)
            throw ParseError(std::string(what) + " overflows", r.pos - 1);
    }
    return value;
}

std::pair<int, int> read_pnm_dims(ByteReader& r) {
    long w = read_number(r, "width");
    long h = read_number(r, "height");
    if (w <= 0 || w > kMaxDimension)
        throw ParseError("width out of range", r.pos);
    if (h <= 0 || h > kMaxDimension)
        throw ParseError("height out of range", r.pos);
    if (std::size_t(w) * std::size_t(h) > kMaxPixels)
        throw ParseError("dimension overflow", r.pos);
    return {int(w), int(h)};
}

// Raw rasters (P4/P5) begin after exactly one whitespace byte.
void expect_raster_separator(ByteReader& r) {
    int c = r.get();
    if (c < 0 || !pnm_space(c))
        throw ParseError("expected whitespace before raster", r.pos == 0 ? 0 : r.pos - 1);
}

std::string magic_of(ByteReader& r) {
    int p = r.get();
    int d = r.get();
    if (p != 'P' || d < '1' || d > '6')
        throw ParseError("bad magic number", 0);
    return std::string{char(p), char(d)};
}

void append_dims(std::vector<std::uint8_t>& out, const char* magic, int w, int h) {
    std::string header = std::string(magic) + "\n" + std::to_string(w) + " " +
                         std::to_string(h) + "\n";
    out.insert(out.end(), header.begin(), header.end());
}

}  // namespace

BinaryImage BinaryImage::blank(int width, int height) {
    check_dims(width, height);
    BinaryImage img;
    img.width = width;
    img.height = height;
    img.grid.assign(std::size_t(width) * height, 0);
    return img;
}

GrayImage GrayImage::blank(int width, int height, std::uint8_t value) {
    check_dims(width, height);
    GrayImage img;
    img.width = width;
    img.height = height;
    img.grid.assign(std::size_t(width) * height, value);
    return img;
}

BinaryImage load_pbm(std::span<const std::uint8_t> bytes) {
    ByteReader r{bytes};
    std::string magic = magic_of(r);
    if (magic != "P1" && magic != "P4")
        throw ParseError("not a PBM (expected P1 or P4)", 0);
    auto [w, h] = read_pnm_dims(r);

    BinaryImage img = BinaryImage::blank(w, h);
    if (magic == "P1") {
        for (std::size_t i = 0; i < img.grid.size(); ++i) {
            skip_separators(r);
            int c = r.get();
            if (c != '0' && c != '1')
                throw ParseError("expected bit digit", r.pos == 0 ? 0 : r.pos - 1);
            img.grid[i] = std::uint8_t(c - '0');
        }
    } else {
        expect_raster_separator(r);
        std::size_t row_bytes = (std::size_t(w) + 7) / 8;
        for (int y = 0; y < h; ++y) {
            if (r.pos + row_bytes > bytes.size())
                throw ParseError("truncated raster", bytes.size());
            for (int x = 0; x < w; ++x) {
                std::uint8_t byte = bytes[r.pos + std::size_t(x) / 8];
                img.set(x, y, (byte >> (7 - x % 8)) & 1);
            }
            r.pos += row_bytes;
        }
    }
    return img;
}

std::vector<std::uint8_t> save_pbm(const BinaryImage& img, PbmFormat format) {
    std::vector<std::uint8_t> out;
    if (format == PbmFormat::P1) {
        append_dims(out, "P1", img.width, img.height);
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                if (x > 0) out.push_back(' ');
                out.push_back('0' + img.at(x, y));
            }
            out.push_back('\n');
        }
    } else {
        append_dims(out, "P4", img.width, img.height);
        std::size_t row_bytes = (std::size_t(img.width) + 7) / 8;
        for (int y = 0; y < img.height; ++y) {
            std::size_t row_start = out.size();
            out.insert(out.end(), row_bytes, 0);
            for (int x = 0; x < img.width; ++x)
                if (img.at(x, y)) out[row_start + std::size_t(x) / 8] |= 0x80 >> (x % 8);
        }
    }
    return out;
}

GrayImage load_pgm(std::span<const std::uint8_t> bytes) {
    ByteReader r{bytes};
    std::string magic = magic_of(r);
    if (magic != "P2" && magic != "P5")
        throw ParseError("not a PGM (expected P2 or P5)", 0);
    auto [w, h] = read_pnm_dims(r);
    long maxval = read_number(r, "maxval");
    if (maxval <= 0) throw ParseError("maxval out of range", r.pos);
    if (maxval > 255) throw UnsupportedDepth(int(maxval));

    GrayImage img = GrayImage::blank(w, h);
    if (magic == "P2") {
        for (std::size_t i = 0; i < img.grid.size(); ++i) {
            long v = read_number(r, "sample");
            if (v > maxval) throw ParseError("sample exceeds maxval", r.pos);
            img.grid[i] = std::uint8_t(v);
        }
    } else {
        expect_raster_separator(r);
        if (r.pos + img.grid.size() > bytes.size())
            throw ParseError("truncated raster", bytes.size());
        for (std::size_t i = 0; i < img.grid.size(); ++i) {
            std::uint8_t v = bytes[r.pos + i];
            if (v > maxval) throw ParseError("sample exceeds maxval", r.pos + i);
            img.grid[i] = v;
        }
    }
    return img;
}

std::vector<std::uint8_t> save_pgm(const GrayImage& img, PgmFormat format) {
    std::vector<std::uint8_t> out;
    if (format == PgmFormat::P2) {
        append_dims(out, "P2", img.width, img.height);
        out.push_back('2');
        out.push_back('5');
        out.push_back('5');
        out.push_back('\n');
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                if (x > 0) out.push_back(' ');
                std::string v = std::to_string(img.at(x, y));
                out.insert(out.end(), v.begin(), v.end());
            }
            out.push_back('\n');
        }
    } else {
        append_dims(out, "P5", img.width, img.height);
        out.push_back('2');
        out.push_back('5');
        out.push_back('5');
        out.push_back('\n');
        out.insert(out.end(), img.grid.begin(), img.grid.end());
    }
    return out;
}

namespace {

// Between-class variance as the exact fraction d^2 / (n0 * n1) with
// d = s0*n1 - s1*n0. Comparing via quotient and remainder avoids both
// floating point and 256-bit products.
struct VarianceScore {
    unsigned __int128 num = 0;
    std::uint64_t den = 1;
};

bool score_greater(const VarianceScore& a, const VarianceScore& b) {
    unsigned __int128 qa = a.num / a.den;
    unsigned __int128 qb = b.num / b.den;
    if (qa != qb) return qa > qb;
    std::uint64_t ra = std::uint64_t(a.num % a.den);
    std::uint64_t rb = std::uint64_t(b.num % b.den);
    return (unsigned __int128)ra * b.den > (unsigned __int128)rb * a.den;
}

}  // namespace

int otsu_threshold(const GrayImage& img) {
    if (img.grid.empty()) throw DimensionError("empty image");
    if (img.grid.size() > kMaxPixels)
        throw DimensionError("image exceeds supported pixel count");

    std::uint64_t hist[256] = {};
    for (std::uint8_t v : img.grid) ++hist[v];

    int lowest = -1, highest = -1;
    for (int i = 0; i < 256; ++i)
        if (hist[i]) {
            if (lowest < 0) lowest = i;
            highest = i;
        }
    if (lowest == highest) return lowest;  // constant image

    std::uint64_t total = img.grid.size();
    std::uint64_t total_sum = 0;
    for (int i = 0; i < 256; ++i) total_sum += std::uint64_t(i) * hist[i];

    int best_t = 0;
    VarianceScore best{0, 1};
    std::uint64_t n0 = 0, s0 = 0;
    for (int t = 0; t < 256; ++t) {
        n0 += hist[t];
        s0 += std::uint64_t(t) * hist[t];
        std::uint64_t n1 = total - n0;
        if (n0 == 0 || n1 == 0) continue;
        std::uint64_t s1 = total_sum - s0;
        __int128 d = (__int128)s0 * n1 - (__int128)s1 * n0;
        if (d < 0) d = -d;
        VarianceScore score{(unsigned __int128)d * (unsigned __int128)d,
                            n0 * n1};
        if (score_greater(score, best)) {
            best = score;
            best_t = t;
        }
    }
    return best_t;
}

BinaryImage binarize(const GrayImage& img, int t) {
    BinaryImage out = BinaryImage::blank(img.width, img.height);
    for (std::size_t i = 0; i < img.grid.size(); ++i)
        out.grid[i] = img.grid[i] <= t ? 1 : 0;
    return out;
}

namespace {

// SplitMix64; the constants are part of the fixture contract, see image.hpp.
struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

void stamp(BinaryImage& img, int x, int y, int thickness) {
    for (int dy = 0; dy < thickness; ++dy)
        for (int dx = 0; dx < thickness; ++dx) {
            int px = x + dx, py = y + dy;
            if (px >= 0 && px < img.width && py >= 0 && py < img.height)
                img.set(px, py, 1);
        }
}

void draw_segment(BinaryImage& img, int x0, int y0, int x1, int y1, int thickness) {
    int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        stamp(img, x0, y0, thickness);
        if (x0 == x1 && y0 == y1) break;
        int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

}  // namespace

BinaryImage generate_synthetic(int width, int height, int stroke_count,
                               std::uint64_t seed) {
    BinaryImage img = BinaryImage::blank(width, height);
    SplitMix64 rng{seed};
    for (int s = 0; s < stroke_count; ++s) {
        int x = int(rng.below(std::uint64_t(width)));
        int y = int(rng.below(std::uint64_t(height)));
        int thickness = 1 + int(rng.below(3));
        int segments = 2 + int(rng.below(3));
        for (int seg = 0; seg < segments; ++seg) {
            int kind = int(rng.below(5));
            int dx, dy;
            if (kind <= 2) {
                // mostly-vertical run, the kind that makes a column codable
                dx = int(rng.below(5)) - 2;
                dy = 12 + int(rng.below(34));
                if (rng.below(2)) dy = -dy;
            } else if (kind == 3) {
                dx = 8 + int(rng.below(40));
                if (rng.below(2)) dx = -dx;
                dy = int(rng.below(3)) - 1;
            } else {
                dx = 6 + int(rng.below(18));
                if (rng.below(2)) dx = -dx;
                dy = 6 + int(rng.below(18));
                if (rng.below(2)) dy = -dy;
            }
            int nx = std::clamp(x + dx, 0, width - 1);
            int ny = std::clamp(y + dy, 0, height - 1);
            draw_segment(img, x, y, nx, ny, thickness);
            x = nx;
            y = ny;
        }
    }
    return img;
}

std::vector<std::pair<int, int>> pixel_diff(const BinaryImage& a, const BinaryImage& b) {
    if (a.width != b.width || a.height != b.height)
        throw DimensionError("pixel_diff on images of different dimensions");
    std::vector<std::pair<int, int>> diff;
    for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x)
            if (a.at(x, y) != b.at(x, y)) diff.emplace_back(x, y);
    return diff;
}

}  // namespace inkmark
