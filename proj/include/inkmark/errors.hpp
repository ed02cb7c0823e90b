#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace inkmark {

/// Base class for all inkmark failures that are not precondition violations.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed netpbm input. Carries the byte offset the parser rejected.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error("parse error at byte " + std::to_string(offset) + ": " + msg),
          offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Graymap with maxval above 255.
class UnsupportedDepth : public Error {
public:
    explicit UnsupportedDepth(int maxval)
        : Error("unsupported sample depth: maxval " + std::to_string(maxval)) {}
};

/// Operation on images whose dimensions do not match, or an image too large
/// to process.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

/// Watermark longer than the number of fit columns in the container.
class CapacityError : public Error {
public:
    CapacityError(std::size_t available, std::size_t required)
        : Error("capacity exceeded: " + std::to_string(required) +
                " bits required, " + std::to_string(available) + " available"),
          available_(available), required_(required) {}
    std::size_t available() const noexcept { return available_; }
    std::size_t required() const noexcept { return required_; }

private:
    std::size_t available_;
    std::size_t required_;
};

/// Metadata whose utf-8 form does not fit the 16-bit frame length field.
class PayloadTooLarge : public Error {
public:
    explicit PayloadTooLarge(std::size_t bytes)
        : Error("metadata too large for frame: " + std::to_string(bytes) + " bytes") {}
};

/// Autocorrelation of an empty parity sequence.
class EmptySequence : public Error {
public:
    EmptySequence() : Error("empty parity sequence") {}
};

/// Difference of autocorrelation series computed over different lag sets.
class LagMismatch : public Error {
public:
    LagMismatch() : Error("autocorrelation lag sets do not match") {}
};

/// No candidate step satisfies the capacity floor on the whole corpus.
class NoFeasibleStep : public Error {
public:
    explicit NoFeasibleStep(std::size_t required_bits)
        : Error("no step provides " + std::to_string(required_bits) +
                " bits on every image") {}
};

/// Chain file or stored image cannot be read or written.
class StorageError : public Error {
public:
    explicit StorageError(const std::string& msg) : Error(msg) {}
};

}  // namespace inkmark
