#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "inkmark/capacity.hpp"
#include "inkmark/codec.hpp"
#include "inkmark/image.hpp"

#include "oracles.hpp"

using namespace inkmark;

namespace {

Line line_of(const std::string& s) {
    Line line;
    for (char c : s) line.bits.push_back(std::uint8_t(c - '0'));
    return line;
}

// Columns given top to bottom; column i becomes image column x = i.
BinaryImage image_from_columns(const std::vector<std::string>& cols) {
    BinaryImage img = BinaryImage::blank(int(cols.size()), int(cols[0].size()));
    for (int x = 0; x < img.width; ++x)
        for (int y = 0; y < img.height; ++y)
            img.set(x, y, std::uint8_t(cols[std::size_t(x)][std::size_t(y)] - '0'));
    return img;
}

const std::vector<std::string> kFixtureColumns = {
    "111110", "000000", "110011", "111111", "100000", "111100",
};

}  // namespace

TEST_CASE("payload text and bit conversions") {
    CHECK_EQ(bits_to_string(text_to_bits("A")), "01000001");
    CHECK_EQ(text_to_bits("").length(), 0);

    for (const std::string s : {"plain", "héllo", "日本語", ""}) {
        auto round = bits_to_text(text_to_bits(s));
        REQUIRE(round.has_value());
        CHECK_EQ(*round, s);
    }

    // length not a byte multiple, then bytes that are not utf-8
    CHECK_FALSE(bits_to_text(bits_from_string("0100000")).has_value());
    CHECK_FALSE(bits_to_text(bits_from_bytes(std::vector<std::uint8_t>{0xFF})).has_value());

    CHECK_EQ(bits_to_string(bits_from_string("0110")), "0110");
    CHECK_THROWS_AS(bits_from_string("0120"), std::invalid_argument);

    CHECK_EQ(bytes_from_bits(bits_from_string("101")), std::nullopt);
    auto packed = bytes_from_bits(bits_from_string("1000000011111111"));
    REQUIRE(packed.has_value());
    CHECK_EQ(*packed, std::vector<std::uint8_t>({0x80, 0xFF}));
}

TEST_CASE("utf8 validation rejects malformed encodings") {
    auto valid = [](std::vector<std::uint8_t> v) { return utf8_valid(v); };
    CHECK(valid({}));
    CHECK(valid({'a', 0xC3, 0xA9}));                    // é
    CHECK(valid({0xF4, 0x8F, 0xBF, 0xBF}));             // U+10FFFF
    CHECK_FALSE(valid({0xC0, 0x80}));                   // overlong NUL
    CHECK_FALSE(valid({0xE0, 0x80, 0x80}));             // overlong
    CHECK_FALSE(valid({0xED, 0xA0, 0x80}));             // surrogate
    CHECK_FALSE(valid({0xF4, 0x90, 0x80, 0x80}));       // above U+10FFFF
    CHECK_FALSE(valid({0xC3}));                         // truncated
    CHECK_FALSE(valid({0x80}));                         // stray continuation
}

TEST_CASE("column fitness and toggle position") {
    // blank column: unusable
    CHECK_EQ(get_position(line_of("000000")), FitnessResult{-1, -1});
    // dense column: parity 1, removal at the topmost black pixel
    CHECK_EQ(get_position(line_of("111110")), FitnessResult{1, 0});
    // balanced column: parity 0, insertion mid-gap
    CHECK_EQ(get_position(line_of("110011")), FitnessResult{0, 2});
    // no interior gap: first white pixel
    CHECK_EQ(get_position(line_of("111100")), FitnessResult{0, 4});
    // dense but leading white: topmost black is index 1
    CHECK_EQ(get_position(line_of("011111")), FitnessResult{1, 1});
    // two equal gaps: the left one wins
    CHECK_EQ(get_position(line_of("1100110011")), FitnessResult{0, 2});
    // sparse column: unusable even though inked
    CHECK_EQ(get_position(line_of("100000")), FitnessResult{-1, -1});
}

TEST_CASE("change_line flips exactly one pixel") {
    Line line = line_of("110011");
    Line changed = change_line(line, 2);
    CHECK_EQ(changed, line_of("111011"));
    CHECK_EQ(changed.num_black(), line.num_black() + 1);
    CHECK_EQ(change_line(changed, 2), line);

    CHECK_THROWS_AS(change_line(line, -1), std::out_of_range);
    CHECK_THROWS_AS(change_line(line, 6), std::out_of_range);
}

TEST_CASE("coding rules match the run-list restatement exhaustively") {
    // every line of every length up to 12
    for (int s = 2; s <= 12; ++s) {
        for (unsigned mask = 0; mask < (1u << s); ++mask) {
            Line line;
            for (int i = 0; i < s; ++i) line.bits.push_back((mask >> i) & 1);
            FitnessResult got = get_position(line);
            auto [flag, pos] = oracle::ref_get_position(line.bits);
            CHECK_EQ(got.flag, flag);
            CHECK_EQ(got.pos, pos);
            if (got.flag >= 0) {
                // toggling at the chosen position must keep the column codable
                Line after = change_line(line, got.pos);
                int n = after.num_black();
                CHECK_GE(2 * n, s);
                CHECK_EQ(get_position(after).flag, n % 2);
            }
        }
    }
}

TEST_CASE("strip layout") {
    StripLayout layout = StripLayout::of(25, 6);
    CHECK_EQ(layout.strip_count, 4);
    CHECK_EQ(layout.leftover_rows, 1);
    CHECK_EQ(StripLayout::of(5, 6).strip_count, 0);
    CHECK_THROWS_AS(StripLayout::of(30, 1), std::invalid_argument);
    CHECK_THROWS_AS(StripLayout::of(30, 0), std::invalid_argument);
}

TEST_CASE("embedding the worked 6x6 example") {
    BinaryImage img = image_from_columns(kFixtureColumns);
    auto [marked, report] = embed(img, bits_from_string("01"), 6);

    CHECK_EQ(marked, image_from_columns({
                         "011110", "000000", "111011", "111111", "100000", "111100"}));
    CHECK_EQ(report.pixels_toggled, 2);
    CHECK_EQ(report.strips_used, 1);
    REQUIRE_EQ(report.consumed.size(), 2);

    CHECK_EQ(report.consumed[0].x, 0);
    CHECK_EQ(report.consumed[0].bit, 0);
    CHECK(report.consumed[0].modified);
    CHECK_EQ(report.consumed[0].toggled_row, 0);

    CHECK_EQ(report.consumed[1].x, 2);
    CHECK_EQ(report.consumed[1].bit, 1);
    CHECK(report.consumed[1].modified);
    CHECK_EQ(report.consumed[1].toggled_row, 2);

    CHECK_EQ(capacity_bits(img, 6), 4);
    CHECK_EQ(bits_to_string(extract_bits(marked, 2, 6)), "01");
    CHECK(verify_watermark(marked, bits_from_string("01"), 6));
    CHECK_FALSE(verify_watermark(marked, bits_from_string("00"), 6));
}

TEST_CASE("columns already carrying the right parity stay untouched") {
    BinaryImage img = image_from_columns(kFixtureColumns);
    // first codable column has parity 1; embedding a 1 costs nothing
    auto [marked, report] = embed(img, bits_from_string("1"), 6);
    CHECK_EQ(marked, img);
    CHECK_EQ(report.pixels_toggled, 0);
    REQUIRE_EQ(report.consumed.size(), 1);
    CHECK_FALSE(report.consumed[0].modified);
    CHECK_EQ(report.consumed[0].toggled_row, std::nullopt);
}

TEST_CASE("embedding past the page capacity fails loudly") {
    BinaryImage img = image_from_columns(kFixtureColumns);
    try {
        embed(img, bits_from_string("10101"), 6);
        FAIL("five bits cannot fit in four codable columns");
    } catch (const CapacityError& e) {
        CHECK_EQ(e.available(), 4);
        CHECK_EQ(e.required(), 5);
    }
    CHECK_THROWS_AS(extract_bits(img, 5, 6), CapacityError);
    CHECK_FALSE(verify_watermark(img, bits_from_string("10101"), 6));
}

TEST_CASE("roundtrip on synthetic pages at full capacity") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 5; ++trial) {
        BinaryImage img = generate_synthetic(320, 130, 90, 100 + trial);
        int step = 20 + 10 * (trial % 3);
        std::size_t cap = capacity_bits(img, step);
        WatermarkBits wm;
        for (std::size_t i = 0; i < cap; ++i) wm.bits.push_back(rng() & 1);

        auto [marked, report] = embed(img, wm, step);
        CHECK_EQ(extract_bits(marked, cap, step), wm);
        CHECK_EQ(pixel_diff(img, marked).size(), report.pixels_toggled);
        CHECK_LE(report.pixels_toggled, wm.length());
    }
}

TEST_CASE("embedding never touches leftover bottom rows") {
    BinaryImage img = generate_synthetic(200, 55, 60, 5);
    std::size_t cap = capacity_bits(img, 20);  // two strips, 15 leftover rows
    REQUIRE_GT(cap, 0);
    WatermarkBits wm;
    for (std::size_t i = 0; i < cap; ++i) wm.bits.push_back(1 - int(i % 2));
    auto [marked, report] = embed(img, wm, 20);
    for (auto [x, y] : pixel_diff(img, marked)) CHECK_LT(y, 40);
}

TEST_CASE("report serialization is canonical") {
    BinaryImage img = image_from_columns({"1111", "1100"});
    auto [marked, report] = embed(img, bits_from_string("10"), 4);
    // column 0 (full, parity 0) takes bit 1: its topmost black pixel goes;
    // column 1 (parity 0) takes bit 0 untouched.
    CHECK_EQ(report_json(report),
             "{\"consumed\":[{\"bit\":1,\"modified\":true,\"strip\":0,"
             "\"toggled_row\":0,\"x\":0},{\"bit\":0,\"modified\":false,\"strip\":0,"
             "\"toggled_row\":null,\"x\":1}],\"pixels_toggled\":1,\"strips_used\":1}\n");
}
