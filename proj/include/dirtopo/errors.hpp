#pragma once

#include <stdexcept>
#include <string>

namespace dirtopo {

struct DuplicateVertexInTuple : std::invalid_argument {
    explicit DuplicateVertexInTuple(const std::string& what) : std::invalid_argument(what) {}
};

struct ZeroDimensional : std::invalid_argument {
    explicit ZeroDimensional(const std::string& what) : std::invalid_argument(what) {}
};

struct IndexOutOfRange : std::out_of_range {
    explicit IndexOutOfRange(const std::string& what) : std::out_of_range(what) {}
};

struct ShapeMismatch : std::invalid_argument {
    explicit ShapeMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct NonFiniteLoss : std::runtime_error {
    explicit NonFiniteLoss(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyCommunity : std::runtime_error {
    explicit EmptyCommunity(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_number(line) {}
    std::size_t line_number;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dirtopo
