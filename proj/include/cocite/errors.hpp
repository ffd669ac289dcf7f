#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cocite {

// A pipeline stage failed on otherwise valid invocation (bad data,
// unsatisfiable preconditions). Maps to exit code 1 in the CLI.
struct StageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file; carries the 1-based line number.
struct ParseError : StageError {
    ParseError(const std::string& path, std::size_t line, const std::string& what)
        : StageError(path + ":" + std::to_string(line) + ": " + what), line_number(line) {}

    std::size_t line_number;
};

// Invalid invocation: missing files, contradictory settings. Exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cocite
