#pragma once

#include <stdexcept>
#include <string>

namespace vbcalc {

/// Library errors (shape mismatches, unresolved names, violated preconditions).
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Syntax errors carry a 1-based source position.
struct ParseError : Error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int col_)
        : Error(msg + " at line " + std::to_string(line_) + ", column " +
                std::to_string(col_)),
          line(line_),
          column(col_) {}
};

}  // namespace vbcalc
