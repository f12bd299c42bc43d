#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nlos {

// Base of every error thrown by the library. The CLI maps each kind to its
// own exit code and prints `error: <kind>: <message>` on one line.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

struct ShapeError : Error {
    explicit ShapeError(const std::string& what) : Error("shape", what) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};

struct GeometryError : Error {
    explicit GeometryError(const std::string& what) : Error("geometry", what) {}
};

struct DegenerateInputError : Error {
    explicit DegenerateInputError(const std::string& what) : Error("degenerate-input", what) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::uint64_t offset)
        : Error("parse", what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

struct CorruptCheckpointError : Error {
    explicit CorruptCheckpointError(const std::string& what) : Error("corrupt-checkpoint", what) {}
};

class TrainingError : public Error {
public:
    TrainingError(const std::string& what, int epoch)
        : Error("training", what + " (epoch " + std::to_string(epoch) + ")"), epoch_(epoch) {}
    int epoch() const noexcept { return epoch_; }

private:
    int epoch_;
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace nlos
