#pragma once

#include <stdexcept>
#include <string>

namespace mspseg {

// Bad user input: malformed files, invalid parameters, missing paths.
// The CLI maps this to exit code 1.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A file failed to parse. The message always carries "<file>:<line>: ".
class FormatError : public InputError {
public:
    FormatError(const std::string& file, std::size_t line, const std::string& what)
        : InputError(file + ":" + std::to_string(line) + ": " + what),
          file_(file), line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

// Internal invariant violated. The CLI maps this to exit code 2.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace mspseg
