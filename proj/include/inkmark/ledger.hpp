#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "inkmark/codec.hpp"
#include "inkmark/image.hpp"

namespace inkmark {

using Hash32 = std::array<std::uint8_t, 32>;

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);

/// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no xorout.
/// Check value: crc16 of "123456789" is 0x29B1.
std::uint16_t crc16_ccitt_false(std::span<const std::uint8_t> data);

std::string to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> from_hex(std::string_view hex);

/// Why the embedded frame could not be decoded.
enum class FrameFault { BadLength, BadCrc, BadUtf8 };

/// Self-delimiting watermark payload: 16-bit big-endian byte length, the
/// utf-8 bytes, then their CRC-16/CCITT-FALSE, all serialized MSB first.
/// The frame lets a blind verifier distinguish a damaged image from altered
/// metadata without knowing the expected text up front.
WatermarkBits framed_bits(std::string_view metadata);

/// Parses a frame produced by framed_bits. The bit count must equal the
/// framed size announced by the length field exactly.
std::variant<std::string, FrameFault> unframe(const WatermarkBits& bits);

/// One ledger entry: a watermarked page plus the metadata text embedded in it.
struct ChainRecord {
    BinaryImage image;
    std::string metadata;
    int step = 0;
};

/// A sealed block. record_hash covers index, prev_hash, metadata and the
/// canonical P4 bytes of the image, so each block also seals its link.
struct Block {
    std::uint64_t index = 0;
    Hash32 prev_hash{};
    Hash32 record_hash{};
    ChainRecord payload;
};

enum class TamperKind { Intact, ImageTampered, MetadataTampered, ChainLinkBroken };

struct TamperVerdict {
    TamperKind kind = TamperKind::Intact;
    std::uint64_t block_index = 0;
    std::string detail;
};

const char* to_string(TamperKind kind);

/// SHA-256 over: index as 8 big-endian bytes, the 32 prev_hash bytes, the
/// metadata utf-8 bytes, the canonical P4 bytes of the watermarked image.
Hash32 block_hash(std::uint64_t index, const Hash32& prev_hash,
                  std::string_view metadata, std::span<const std::uint8_t> p4_bytes);

/// Record-level audit: extracts the frame from the image and compares its
/// text to the stored metadata. Undecodable frame (or not enough capacity)
/// means the image was changed; a valid frame with different text means the
/// metadata was changed.
TamperVerdict classify_tamper(const ChainRecord& record, std::uint64_t block_index = 0);

/// Append-only chain persisted as one JSON object per line; watermarked
/// images live as canonical P4 files in a sibling "<chain>.d" directory,
/// referenced by relative path.
class Chain {
public:
    struct StoredBlock {
        std::uint64_t index = 0;
        Hash32 prev_hash{};
        Hash32 record_hash{};
        std::string metadata;
        std::string image_path;  // relative to the chain file's directory
        int step = 0;
    };

    /// Creates an empty chain file. Throws StorageError if the file exists.
    static Chain create(const std::filesystem::path& file);

    /// Loads an existing chain file. Throws StorageError when missing or
    /// malformed.
    static Chain open(const std::filesystem::path& file);

    /// Embeds framed metadata into the raw page, seals and persists the
    /// block. Capacity failures propagate; write failures raise StorageError.
    Block append_record(const BinaryImage& raw_image, std::string_view metadata,
                        int step);

    /// One verdict per block: link and hash failures win over record-level
    /// classification.
    std::vector<TamperVerdict> verify_chain() const;

    std::size_t size() const { return blocks_.size(); }
    const StoredBlock& stored(std::size_t i) const { return blocks_.at(i); }
    const std::filesystem::path& file() const { return file_; }

    /// Loads the stored image of block i from disk.
    BinaryImage load_image(std::size_t i) const;

private:
    Chain() = default;

    std::filesystem::path file_;
    std::filesystem::path image_dir_;
    std::vector<StoredBlock> blocks_;
};

}  // namespace inkmark
