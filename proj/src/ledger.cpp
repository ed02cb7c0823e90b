#include "inkmark/ledger.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include <json.hpp>

namespace inkmark {

namespace fs = std::filesystem;

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data) {
    std::array<std::uint8_t, 32> digest{};
    unsigned int len = 0;
    static const std::uint8_t empty = 0;
    EVP_Digest(data.empty() ? &empty : data.data(), data.size(), digest.data(), &len,
               EVP_sha256(), nullptr);
    return digest;
}

std::uint16_t crc16_ccitt_false(std::span<const std::uint8_t> data) {
    std::uint16_t crc = 0xFFFF;
    for (std::uint8_t b : data) {
        crc ^= std::uint16_t(b) << 8;
        for (int i = 0; i < 8; ++i)
            crc = (crc & 0x8000) ? std::uint16_t((crc << 1) ^ 0x1021)
                                 : std::uint16_t(crc << 1);
    }
    return crc;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static const char* digits = "0123456789abcdef";
    std::string hex;
    hex.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        hex.push_back(digits[b >> 4]);
        hex.push_back(digits[b & 0xF]);
    }
    return hex;
}

std::vector<std::uint8_t> from_hex(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (hex.size() % 2 != 0) throw std::invalid_argument("odd hex length");
    std::vector<std::uint8_t> bytes(hex.size() / 2);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        int hi = nibble(hex[2 * i]), lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("bad hex digit");
        bytes[i] = std::uint8_t(hi << 4 | lo);
    }
    return bytes;
}

WatermarkBits framed_bits(std::string_view metadata) {
    if (metadata.size() >= 0x10000) throw PayloadTooLarge(metadata.size());
    std::vector<std::uint8_t> buf;
    buf.reserve(metadata.size() + 4);
    buf.push_back(std::uint8_t(metadata.size() >> 8));
    buf.push_back(std::uint8_t(metadata.size() & 0xFF));
    buf.insert(buf.end(), metadata.begin(), metadata.end());
    std::uint16_t crc = crc16_ccitt_false(
        {reinterpret_cast<const std::uint8_t*>(metadata.data()), metadata.size()});
    buf.push_back(std::uint8_t(crc >> 8));
    buf.push_back(std::uint8_t(crc & 0xFF));
    return bits_from_bytes(buf);
}

std::variant<std::string, FrameFault> unframe(const WatermarkBits& bits) {
    if (bits.length() < 16) return FrameFault::BadLength;
    std::size_t payload_len = 0;
    for (int i = 0; i < 16; ++i)
        payload_len = payload_len << 1 | (bits.bits[i] & 1);
    if (bits.length() != 32 + 8 * payload_len) return FrameFault::BadLength;

    auto bytes = bytes_from_bits(bits);  // length is a multiple of 8 here
    std::span<const std::uint8_t> payload(bytes->data() + 2, payload_len);
    std::uint16_t stored = std::uint16_t((*bytes)[2 + payload_len]) << 8 |
                           (*bytes)[3 + payload_len];
    if (crc16_ccitt_false(payload) != stored) return FrameFault::BadCrc;
    if (!utf8_valid(payload)) return FrameFault::BadUtf8;
    return std::string(payload.begin(), payload.end());
}

const char* to_string(TamperKind kind) {
    switch (kind) {
        case TamperKind::Intact: return "Intact";
        case TamperKind::ImageTampered: return "ImageTampered";
        case TamperKind::MetadataTampered: return "MetadataTampered";
        case TamperKind::ChainLinkBroken: return "ChainLinkBroken";
    }
    return "?";
}

Hash32 block_hash(std::uint64_t index, const Hash32& prev_hash,
                  std::string_view metadata, std::span<const std::uint8_t> p4_bytes) {
    std::vector<std::uint8_t> buf;
    buf.reserve(8 + prev_hash.size() + metadata.size() + p4_bytes.size());
    for (int i = 7; i >= 0; --i) buf.push_back(std::uint8_t(index >> (8 * i)));
    buf.insert(buf.end(), prev_hash.begin(), prev_hash.end());
    buf.insert(buf.end(), metadata.begin(), metadata.end());
    buf.insert(buf.end(), p4_bytes.begin(), p4_bytes.end());
    return sha256(buf);
}

TamperVerdict classify_tamper(const ChainRecord& record, std::uint64_t block_index) {
    WatermarkBits frame;
    try {
        WatermarkBits header = extract_bits(record.image, 16, record.step);
        std::size_t payload_len = 0;
        for (int i = 0; i < 16; ++i)
            payload_len = payload_len << 1 | (header.bits[i] & 1);
        frame = extract_bits(record.image, 32 + 8 * payload_len, record.step);
    } catch (const CapacityError&) {
        return {TamperKind::ImageTampered, block_index,
                "watermark not detected: too few codable columns"};
    }

    auto parsed = unframe(frame);
    if (const FrameFault* fault = std::get_if<FrameFault>(&parsed)) {
        const char* why = *fault == FrameFault::BadCrc    ? "checksum mismatch"
                          : *fault == FrameFault::BadUtf8 ? "invalid utf-8"
                                                          : "bad frame length";
        return {TamperKind::ImageTampered, block_index,
                std::string("watermark not detected: ") + why};
    }
    const std::string& text = std::get<std::string>(parsed);
    if (text != record.metadata)
        return {TamperKind::MetadataTampered, block_index,
                "embedded watermark disagrees with stored metadata"};
    return {TamperKind::Intact, block_index, ""};
}

namespace {

std::vector<std::uint8_t> read_file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StorageError("cannot read " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw StorageError("cannot read " + path.string());
    return bytes;
}

void write_file_bytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw StorageError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              std::streamsize(bytes.size()));
    out.flush();
    if (!out) throw StorageError("cannot write " + path.string());
}

fs::path image_dir_for(const fs::path& chain_file) {
    fs::path dir = chain_file;
    dir += ".d";
    return dir;
}

Hash32 hash_from_hex(const std::string& hex, const fs::path& file) {
    std::vector<std::uint8_t> bytes;
    try {
        bytes = from_hex(hex);
    } catch (const std::invalid_argument&) {
        throw StorageError("bad digest in " + file.string());
    }
    if (bytes.size() != 32) throw StorageError("bad digest in " + file.string());
    Hash32 h{};
    std::copy(bytes.begin(), bytes.end(), h.begin());
    return h;
}

}  // namespace

Chain Chain::create(const fs::path& file) {
    if (fs::exists(file)) throw StorageError("chain file already exists: " + file.string());
    std::ofstream out(file, std::ios::binary);
    if (!out) throw StorageError("cannot create " + file.string());
    Chain chain;
    chain.file_ = file;
    chain.image_dir_ = image_dir_for(file);
    return chain;
}

Chain Chain::open(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw StorageError("cannot open chain file " + file.string());
    Chain chain;
    chain.file_ = file;
    chain.image_dir_ = image_dir_for(file);

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw StorageError("malformed chain line in " + file.string());
        try {
            StoredBlock block;
            block.index = j.at("index").get<std::uint64_t>();
            block.prev_hash = hash_from_hex(j.at("prev_hash").get<std::string>(), file);
            block.record_hash = hash_from_hex(j.at("record_hash").get<std::string>(), file);
            block.metadata = j.at("metadata").get<std::string>();
            block.image_path = j.at("image_path").get<std::string>();
            block.step = j.at("step").get<int>();
            chain.blocks_.push_back(std::move(block));
        } catch (const nlohmann::json::exception&) {
            throw StorageError("malformed chain line in " + file.string());
        }
    }
    return chain;
}

Block Chain::append_record(const BinaryImage& raw_image, std::string_view metadata,
                           int step) {
    WatermarkBits wm = framed_bits(metadata);
    auto [stamped, report] = embed(raw_image, wm, step);
    std::vector<std::uint8_t> p4 = save_pbm(stamped, PbmFormat::P4);

    std::uint64_t index = blocks_.size();
    Hash32 prev = index == 0 ? Hash32{} : blocks_.back().record_hash;
    Hash32 rec = block_hash(index, prev, metadata, p4);

    std::error_code ec;
    fs::create_directories(image_dir_, ec);
    if (ec) throw StorageError("cannot create " + image_dir_.string());
    char name[32];
    std::snprintf(name, sizeof name, "block-%06llu.pbm",
                  static_cast<unsigned long long>(index));
    write_file_bytes(image_dir_ / name, p4);

    StoredBlock stored;
    stored.index = index;
    stored.prev_hash = prev;
    stored.record_hash = rec;
    stored.metadata = std::string(metadata);
    stored.image_path = (image_dir_.filename() / name).generic_string();
    stored.step = step;

    nlohmann::json j;
    j["index"] = stored.index;
    j["prev_hash"] = to_hex(stored.prev_hash);
    j["record_hash"] = to_hex(stored.record_hash);
    j["metadata"] = stored.metadata;
    j["image_path"] = stored.image_path;
    j["step"] = stored.step;
    std::ofstream out(file_, std::ios::binary | std::ios::app);
    if (!out) throw StorageError("cannot append to " + file_.string());
    out << j.dump() << "\n";
    out.flush();
    if (!out) throw StorageError("cannot append to " + file_.string());

    blocks_.push_back(std::move(stored));
    return Block{index, prev, rec,
                 ChainRecord{std::move(stamped), std::string(metadata), step}};
}

BinaryImage Chain::load_image(std::size_t i) const {
    const StoredBlock& block = blocks_.at(i);
    return load_pbm(read_file_bytes(file_.parent_path() / block.image_path));
}

std::vector<TamperVerdict> Chain::verify_chain() const {
    std::vector<TamperVerdict> verdicts;
    verdicts.reserve(blocks_.size());
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        const StoredBlock& block = blocks_[i];
        std::vector<std::uint8_t> p4 =
            read_file_bytes(file_.parent_path() / block.image_path);

        if (block.index != i) {
            verdicts.push_back({TamperKind::ChainLinkBroken, i, "index out of sequence"});
            continue;
        }
        Hash32 recomputed = block_hash(block.index, block.prev_hash, block.metadata, p4);
        if (recomputed != block.record_hash) {
            verdicts.push_back(
                {TamperKind::ChainLinkBroken, i, "record hash mismatch"});
            continue;
        }
        const Hash32 expected_prev = i == 0 ? Hash32{} : blocks_[i - 1].record_hash;
        if (block.prev_hash != expected_prev) {
            verdicts.push_back({TamperKind::ChainLinkBroken, i,
                                "hash link to previous block broken"});
            continue;
        }

        BinaryImage image;
        try {
            image = load_pbm(p4);
        } catch (const ParseError&) {
            verdicts.push_back(
                {TamperKind::ImageTampered, i, "stored image is not a valid bitmap"});
            continue;
        }
        verdicts.push_back(
            classify_tamper(ChainRecord{std::move(image), block.metadata, block.step}, i));
    }
    return verdicts;
}

}  // namespace inkmark
