#include <doctest.h>

#include <array>
#include <numeric>
#include <random>
#include <string>

#include "inkmark/image.hpp"

#include "oracles.hpp"

using namespace inkmark;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) {
    return std::vector<std::uint8_t>(s.begin(), s.end());
}

BinaryImage random_bitmap(std::mt19937_64& rng, int w, int h) {
    BinaryImage img = BinaryImage::blank(w, h);
    for (auto& px : img.grid) px = rng() & 1;
    return img;
}

GrayImage gray_from_hist(const std::array<std::uint64_t, 256>& hist) {
    std::size_t total = std::accumulate(hist.begin(), hist.end(), std::size_t(0));
    GrayImage img = GrayImage::blank(int(total), 1);
    std::size_t i = 0;
    for (int v = 0; v < 256; ++v)
        for (std::uint64_t c = 0; c < hist[std::size_t(v)]; ++c)
            img.grid[i++] = std::uint8_t(v);
    return img;
}

}  // namespace

TEST_CASE("bitmap roundtrips through both pbm encodings") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        int w = 1 + int(rng() % 40);
        int h = 1 + int(rng() % 20);
        BinaryImage img = random_bitmap(rng, w, h);
        CHECK_EQ(load_pbm(save_pbm(img, PbmFormat::P1)), img);
        CHECK_EQ(load_pbm(save_pbm(img, PbmFormat::P4)), img);
    }
}

TEST_CASE("canonical packed pbm bytes") {
    // 9 columns force a second row byte with 7 padding bits.
    BinaryImage img = BinaryImage::blank(9, 2);
    img.set(0, 0, 1);
    img.set(2, 0, 1);
    img.set(8, 0, 1);
    img.set(1, 1, 1);
    std::vector<std::uint8_t> expected = bytes_of("P4\n9 2\n");
    expected.insert(expected.end(), {0xA0, 0x80, 0x40, 0x00});
    CHECK_EQ(save_pbm(img, PbmFormat::P4), expected);

    CHECK_EQ(save_pbm(img, PbmFormat::P1),
             bytes_of("P1\n9 2\n1 0 1 0 0 0 0 0 1\n0 1 0 0 0 0 0 0 0\n"));
}

TEST_CASE("pbm parser accepts comments and loose whitespace") {
    auto img = load_pbm(bytes_of("P1 # bitmap\n# another comment\n 3\t2 \n1 0 1\n0 1 0\n"));
    CHECK_EQ(img.width, 3);
    CHECK_EQ(img.height, 2);
    CHECK_EQ(img.at(0, 0), 1);
    CHECK_EQ(img.at(1, 1), 1);

    // P1 digits may be packed without spaces
    CHECK_EQ(load_pbm(bytes_of("P1\n3 2\n101010\n")), img);
}

TEST_CASE("p4 padding bits are ignored on load") {
    std::vector<std::uint8_t> data = bytes_of("P4\n3 1\n");
    data.push_back(0xBF);  // raster 101, junk in the padding bits
    BinaryImage img = load_pbm(data);
    CHECK_EQ(img.at(0, 0), 1);
    CHECK_EQ(img.at(1, 0), 0);
    CHECK_EQ(img.at(2, 0), 1);
}

TEST_CASE("pbm parse failures carry a byte offset") {
    CHECK_THROWS_AS(load_pbm(bytes_of("Q4\n2 2\n")), ParseError);
    CHECK_THROWS_AS(load_pbm(bytes_of("P5\n2 2\n255\n")), ParseError);  // wrong family
    CHECK_THROWS_AS(load_pbm(bytes_of("P1\n0 2\n")), ParseError);
    CHECK_THROWS_AS(load_pbm(bytes_of("P1\n2 -1\n")), ParseError);
    CHECK_THROWS_AS(load_pbm(bytes_of("P1\n2 2\n1 0 1\n")), ParseError);  // short raster
    CHECK_THROWS_AS(load_pbm(bytes_of("P1\n2 2\n1 0 1 2\n")), ParseError);
    CHECK_THROWS_AS(load_pbm(bytes_of("P4\n9 2\n\xff")), ParseError);  // truncated

    try {
        load_pbm(bytes_of("X1\n1 1\n0\n"));
        FAIL("bad magic must throw");
    } catch (const ParseError& e) {
        CHECK_EQ(e.offset(), 0);
    }
}

TEST_CASE("graymap roundtrips and depth limit") {
    std::mt19937_64 rng(12);
    GrayImage img = GrayImage::blank(17, 5);
    for (auto& px : img.grid) px = std::uint8_t(rng());
    CHECK_EQ(load_pgm(save_pgm(img, PgmFormat::P2)), img);
    CHECK_EQ(load_pgm(save_pgm(img, PgmFormat::P5)), img);

    CHECK_THROWS_AS(load_pgm(bytes_of("P2\n1 1\n300\n120\n")), UnsupportedDepth);
    CHECK_THROWS_AS(load_pgm(bytes_of("P2\n1 1\n100\n120\n")), ParseError);  // > maxval
    CHECK_THROWS_AS(load_pgm(bytes_of("P5\n4 4\n255\nab")), ParseError);  // truncated
}

TEST_CASE("otsu threshold of a constant image is that constant") {
    CHECK_EQ(otsu_threshold(GrayImage::blank(10, 10, 0)), 0);
    CHECK_EQ(otsu_threshold(GrayImage::blank(10, 10, 177)), 177);
    CHECK_EQ(otsu_threshold(GrayImage::blank(10, 10, 255)), 255);
}

TEST_CASE("otsu splits a two-level image at the lower level") {
    // Between-class variance is flat between two isolated spikes, so the
    // tie rule picks the smallest threshold: the dark level itself.
    std::array<std::uint64_t, 256> hist{};
    hist[10] = 5;
    hist[200] = 7;
    GrayImage img = gray_from_hist(hist);
    CHECK_EQ(otsu_threshold(img), 10);

    BinaryImage bw = binarize(img, 10);
    std::size_t black = 0;
    for (auto b : bw.grid) black += b;
    CHECK_EQ(black, 5);
}

TEST_CASE("otsu agrees with the brute-force maximizer") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        std::array<std::uint64_t, 256> hist{};
        int occupied = 2 + int(rng() % 10);
        for (int i = 0; i < occupied; ++i) hist[rng() % 256] += 1 + rng() % 500;
        GrayImage img = gray_from_hist(hist);
        CHECK_EQ(otsu_threshold(img), oracle::naive_otsu(hist));
    }
}

TEST_CASE("binarize maps intensities at or below the threshold to black") {
    GrayImage img = GrayImage::blank(3, 1);
    img.set(0, 0, 99);
    img.set(1, 0, 100);
    img.set(2, 0, 101);
    BinaryImage bw = binarize(img, 100);
    CHECK_EQ(bw.at(0, 0), 1);
    CHECK_EQ(bw.at(1, 0), 1);
    CHECK_EQ(bw.at(2, 0), 0);
}

TEST_CASE("synthetic pages are deterministic in their arguments") {
    BinaryImage a = generate_synthetic(300, 150, 80, 42);
    BinaryImage b = generate_synthetic(300, 150, 80, 42);
    CHECK_EQ(a, b);
    CHECK_NE(a, generate_synthetic(300, 150, 80, 43));

    CHECK_EQ(a.width, 300);
    CHECK_EQ(a.height, 150);
    std::size_t ink = 0;
    for (auto px : a.grid) {
        CHECK_LE(px, 1);
        ink += px;
    }
    CHECK_GT(ink, 0);
    CHECK_LT(ink, a.pixel_count());
}

TEST_CASE("pixel_diff lists differing positions row by row") {
    BinaryImage a = BinaryImage::blank(4, 3);
    BinaryImage b = a;
    b.set(2, 0, 1);
    b.set(1, 2, 1);
    auto diff = pixel_diff(a, b);
    REQUIRE_EQ(diff.size(), 2);
    CHECK_EQ(diff[0], std::pair<int, int>(2, 0));
    CHECK_EQ(diff[1], std::pair<int, int>(1, 2));

    CHECK(pixel_diff(a, a).empty());
    CHECK_THROWS_AS(pixel_diff(a, BinaryImage::blank(4, 4)), DimensionError);
}

TEST_CASE("image construction rejects bad dimensions") {
    CHECK_THROWS_AS(BinaryImage::blank(0, 5), DimensionError);
    CHECK_THROWS_AS(BinaryImage::blank(5, -1), DimensionError);
    CHECK_THROWS_AS(GrayImage::blank(-3, 2), DimensionError);
}
