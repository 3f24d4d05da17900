#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlsol {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the offending location so callers can report it.
class ParseError : public Error {
public:
    ParseError(std::string file, std::size_t line, std::string attribute, const std::string& message)
        : Error(format(file, line, attribute, message)),
          file_(std::move(file)),
          line_(line),
          attribute_(std::move(attribute)) {}

    const std::string& file() const noexcept { return file_; }
    /// 1-based line number, 0 when not applicable.
    std::size_t line() const noexcept { return line_; }
    const std::string& attribute() const noexcept { return attribute_; }

private:
    static std::string format(const std::string& file, std::size_t line, const std::string& attribute,
                              const std::string& message) {
        std::string out = file;
        if (line > 0) out += ":" + std::to_string(line);
        if (!attribute.empty()) out += ": attribute '" + attribute + "'";
        return out + ": " + message;
    }

    std::string file_;
    std::size_t line_;
    std::string attribute_;
};

}  // namespace mlsol
