#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "inkmark/image.hpp"

namespace inkmark {

/// Horizontal strips of height `step`. Strip k covers rows
/// [k*step, (k+1)*step); the `leftover_rows` at the bottom are never read
/// or written.
struct StripLayout {
    int step = 0;
    int strip_count = 0;
    int leftover_rows = 0;

    /// step must be at least 2.
    static StripLayout of(int image_height, int step);
};

/// One vertical column restricted to one strip, top to bottom.
struct Line {
    std::vector<std::uint8_t> bits;

    int num_black() const;

    bool operator==(const Line&) const = default;
};

/// Verdict of get_position: flag is -1 for a column unusable for coding,
/// otherwise the column parity (black count mod 2); pos is the row to toggle
/// within the strip, or -1 when unfit. When fit, the bit at pos is 1 on the
/// delete branch and 0 on the insert branch.
struct FitnessResult {
    int flag = -1;
    int pos = -1;

    bool operator==(const FitnessResult&) const = default;
};

/// Ordered watermark payload bits.
struct WatermarkBits {
    std::vector<std::uint8_t> bits;

    std::size_t length() const { return bits.size(); }

    bool operator==(const WatermarkBits&) const = default;
};

/// One column the embedder assigned a bit to, in scan order.
struct ConsumedColumn {
    int strip = 0;
    int x = 0;
    std::uint8_t bit = 0;
    bool modified = false;
    std::optional<int> toggled_row;  // absolute image row, when modified

    bool operator==(const ConsumedColumn&) const = default;
};

/// Audit trail of one embedding: which columns carried bits and which single
/// pixels were toggled.
struct EmbedReport {
    std::vector<ConsumedColumn> consumed;
    int strips_used = 0;
    std::size_t pixels_toggled = 0;
};

/// utf-8 bytes of `text`, each byte most-significant bit first.
WatermarkBits text_to_bits(std::string_view text);

/// Inverse of text_to_bits. Empty result when the length is not a multiple
/// of 8 or the bytes are not valid utf-8 ("watermark not detected").
std::optional<std::string> bits_to_text(const WatermarkBits& wm);

/// MSB-first bit expansion of raw bytes.
WatermarkBits bits_from_bytes(std::span<const std::uint8_t> bytes);

/// Packs bits back into bytes; empty when length is not a multiple of 8.
std::optional<std::vector<std::uint8_t>> bytes_from_bits(const WatermarkBits& wm);

/// Parses a "0101..." string. Throws std::invalid_argument on other chars.
WatermarkBits bits_from_string(std::string_view zeros_and_ones);

std::string bits_to_string(const WatermarkBits& wm);

/// Strict utf-8 validity check (rejects overlong forms, surrogates and
/// code points above U+10FFFF).
bool utf8_valid(std::span<const std::uint8_t> bytes);

/// Column fitness and toggle position. With S = line length and N = black
/// count, integer thresholds decide the branch: 2N < S is unfit; 3N > 2S
/// deletes the topmost black pixel; otherwise a pixel is inserted at the
/// midpoint of the longest interior gap (leftmost on ties), or at the first
/// white pixel when the column has no interior gap.
FitnessResult get_position(const Line& line);

/// Toggles the bit at pos, flipping the parity of the black count. For a
/// position chosen by get_position on a fit line, the result is again fit.
/// Throws std::out_of_range for an invalid pos.
Line change_line(Line line, int pos);

/// Embeds the watermark: strips are scanned top to bottom and columns left
/// to right; every fit column consumes the next payload bit, toggling one
/// pixel only when the column parity disagrees with the bit. Throws
/// CapacityError when the image has fewer fit columns than payload bits.
std::pair<BinaryImage, EmbedReport> embed(const BinaryImage& img,
                                          const WatermarkBits& wm, int step);

/// Blind extraction: re-scans in embedding order and collects the parity of
/// the first `nbits` fit columns. Throws CapacityError when there are fewer.
WatermarkBits extract_bits(const BinaryImage& img, std::size_t nbits, int step);

/// True iff extraction of wm.length bits succeeds and reproduces wm.
/// Capacity failures fold into false.
bool verify_watermark(const BinaryImage& img, const WatermarkBits& wm, int step);

/// Canonical JSON form of an EmbedReport (sorted keys, compact, trailing
/// newline). `toggled_row` is null for untouched columns.
std::string report_json(const EmbedReport& report);

}  // namespace inkmark
