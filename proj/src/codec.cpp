#include "inkmark/codec.hpp"

#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace inkmark {

StripLayout StripLayout::of(int image_height, int step) {
    if (step < 2) throw std::invalid_argument("step must be at least 2");
    if (image_height < 0) throw std::invalid_argument("negative image height");
    return {step, image_height / step, image_height % step};
}

int Line::num_black() const {
    return std::accumulate(bits.begin(), bits.end(), 0);
}

WatermarkBits bits_from_bytes(std::span<const std::uint8_t> bytes) {
    WatermarkBits wm;
    wm.bits.reserve(bytes.size() * 8);
    for (std::uint8_t b : bytes)
        for (int i = 7; i >= 0; --i) wm.bits.push_back((b >> i) & 1);
    return wm;
}

std::optional<std::vector<std::uint8_t>> bytes_from_bits(const WatermarkBits& wm) {
    if (wm.bits.size() % 8 != 0) return std::nullopt;
    std::vector<std::uint8_t> bytes(wm.bits.size() / 8, 0);
    for (std::size_t i = 0; i < wm.bits.size(); ++i)
        bytes[i / 8] |= std::uint8_t(wm.bits[i] & 1) << (7 - i % 8);
    return bytes;
}

WatermarkBits text_to_bits(std::string_view text) {
    return bits_from_bytes(
        {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

std::optional<std::string> bits_to_text(const WatermarkBits& wm) {
    auto bytes = bytes_from_bits(wm);
    if (!bytes || !utf8_valid(*bytes)) return std::nullopt;
    return std::string(bytes->begin(), bytes->end());
}

WatermarkBits bits_from_string(std::string_view zeros_and_ones) {
    WatermarkBits wm;
    wm.bits.reserve(zeros_and_ones.size());
    for (char c : zeros_and_ones) {
        if (c != '0' && c != '1')
            throw std::invalid_argument("bit string may contain only 0 and 1");
        wm.bits.push_back(std::uint8_t(c - '0'));
    }
    return wm;
}

std::string bits_to_string(const WatermarkBits& wm) {
    std::string s;
    s.reserve(wm.bits.size());
    for (std::uint8_t b : wm.bits) s.push_back(char('0' + (b & 1)));
    return s;
}

bool utf8_valid(std::span<const std::uint8_t> bytes) {
    std::size_t i = 0;
    while (i < bytes.size()) {
        std::uint8_t c = bytes[i];
        if (c < 0x80) {
            ++i;
            continue;
        }
        int len;
        std::uint32_t cp;
        if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + len > bytes.size()) return false;
        for (int k = 1; k < len; ++k) {
            if ((bytes[i + k] & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (bytes[i + k] & 0x3F);
        }
        if (len == 2 && cp < 0x80) return false;      // overlong
        if (len == 3 && cp < 0x800) return false;
        if (len == 4 && cp < 0x10000) return false;
        if (cp > 0x10FFFF) return false;
        if (cp >= 0xD800 && cp <= 0xDFFF) return false;  // surrogate
        i += len;
    }
    return true;
}

FitnessResult get_position(const Line& line) {
    const int step = int(line.bits.size());
    const int num = line.num_black();
    if (2 * num < step) return {-1, -1};
    const int parity = num % 2;

    if (3 * num > 2 * step) {
        // Dense column: delete the topmost black pixel. 2(N-1) >= S whenever
        // 3N > 2S, so the column stays fit afterwards.
        for (int i = 0; i < step; ++i)
            if (line.bits[i]) return {parity, i};
    }

    // Insert branch: 2N >= S guarantees at least one black pixel, and
    // 3N <= 2S guarantees at least one white one.
    int first_black = -1, last_black = -1;
    for (int i = 0; i < step; ++i)
        if (line.bits[i]) {
            if (first_black < 0) first_black = i;
            last_black = i;
        }

    // Longest run of white strictly between black pixels, leftmost on ties.
    int best_start = -1, best_len = 0;
    int run_start = -1;
    for (int i = first_black + 1; i <= last_black; ++i) {
        if (!line.bits[i]) {
            if (run_start < 0) run_start = i;
        } else if (run_start >= 0) {
            int len = i - run_start;
            if (len > best_len) {
                best_len = len;
                best_start = run_start;
            }
            run_start = -1;
        }
    }
    if (best_start >= 0) {
        int gap_a = best_start, gap_b = best_start + best_len - 1;
        return {parity, (gap_a + gap_b) / 2};
    }
    for (int i = 0; i < step; ++i)
        if (!line.bits[i]) return {parity, i};
    return {-1, -1};  // unreachable: insert branch always has a white pixel
}

Line change_line(Line line, int pos) {
    if (pos < 0 || std::size_t(pos) >= line.bits.size())
        throw std::out_of_range("toggle position outside line");
    line.bits[pos] ^= 1;
    return line;
}

namespace {

Line column_line(const BinaryImage& img, int x, int row0, int step) {
    Line line;
    line.bits.resize(std::size_t(step));
    for (int y = 0; y < step; ++y) line.bits[y] = img.at(x, row0 + y);
    return line;
}

// Scan order shared by embedding, extraction, capacity and steganalysis:
// full strips top to bottom, columns left to right within each strip.
// Leftover bottom rows are never visited. The visitor returns false to stop.
template <typename F>
void scan_columns(const BinaryImage& img, int step, F&& visit) {
    StripLayout layout = StripLayout::of(img.height, step);
    for (int k = 0; k < layout.strip_count; ++k)
        for (int x = 0; x < img.width; ++x)
            if (!visit(k, x, column_line(img, x, k * step, step))) return;
}

}  // namespace

std::pair<BinaryImage, EmbedReport> embed(const BinaryImage& img,
                                          const WatermarkBits& wm, int step) {
    BinaryImage out = img;
    EmbedReport report;
    std::size_t count = 0;
    int last_strip = -1;

    scan_columns(out, step, [&](int k, int x, const Line& line) {
        if (count == wm.length()) return false;
        FitnessResult fit = get_position(line);
        if (fit.flag < 0) return true;

        std::uint8_t bit = wm.bits[count];
        ++count;
        ConsumedColumn consumed{k, x, bit, false, std::nullopt};
        if (int(bit) != fit.flag) {
            int row = k * step + fit.pos;
            out.set(x, row, out.at(x, row) ^ 1);
            consumed.modified = true;
            consumed.toggled_row = row;
            ++report.pixels_toggled;
        }
        if (k != last_strip) {
            ++report.strips_used;
            last_strip = k;
        }
        report.consumed.push_back(consumed);
        return true;
    });

    if (count < wm.length()) throw CapacityError(count, wm.length());
    return {std::move(out), std::move(report)};
}

WatermarkBits extract_bits(const BinaryImage& img, std::size_t nbits, int step) {
    WatermarkBits wm;
    wm.bits.reserve(nbits);
    scan_columns(img, step, [&](int, int, const Line& line) {
        if (wm.bits.size() == nbits) return false;
        FitnessResult fit = get_position(line);
        if (fit.flag >= 0) wm.bits.push_back(std::uint8_t(fit.flag));
        return true;
    });
    if (wm.bits.size() < nbits) throw CapacityError(wm.bits.size(), nbits);
    return wm;
}

bool verify_watermark(const BinaryImage& img, const WatermarkBits& wm, int step) {
    try {
        return extract_bits(img, wm.length(), step) == wm;
    } catch (const CapacityError&) {
        return false;
    }
}

std::string report_json(const EmbedReport& report) {
    nlohmann::json j;
    j["strips_used"] = report.strips_used;
    j["pixels_toggled"] = report.pixels_toggled;
    auto consumed = nlohmann::json::array();
    for (const ConsumedColumn& c : report.consumed) {
        nlohmann::json e;
        e["strip"] = c.strip;
        e["x"] = c.x;
        e["bit"] = int(c.bit);
        e["modified"] = c.modified;
        if (c.toggled_row)
            e["toggled_row"] = *c.toggled_row;
        else
            e["toggled_row"] = nullptr;
        consumed.push_back(std::move(e));
    }
    j["consumed"] = std::move(consumed);
    return j.dump() + "\n";
}

}  // namespace inkmark
