#pragma once

#include <stdexcept>
#include <string>

namespace trackswept {

struct EmptyInput : std::runtime_error {
    explicit EmptyInput(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by the minimax fit when every point shares one abscissa; the caller
// is expected to retry on the swapped axis pair.
struct DegenerateAbscissa : std::runtime_error {
    explicit DegenerateAbscissa(const std::string& what) : std::runtime_error(what) {}
};

struct TooLarge : std::runtime_error {
    explicit TooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, int line, int column)
        : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"),
          line(line),
          column(column) {}
    int line;
    int column;
};

struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

struct InfeasibleConfig : std::runtime_error {
    explicit InfeasibleConfig(const std::string& what) : std::runtime_error(what) {}
};

// Internal invariant violation inside the sweep engine.
struct CorruptState : std::logic_error {
    explicit CorruptState(const std::string& what) : std::logic_error(what) {}
};

}  // namespace trackswept
