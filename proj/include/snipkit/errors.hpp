#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace snipkit {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad configuration or usage. The CLI maps this to exit code 1.
struct ConfigError : Error {
    using Error::Error;
};

// Data integrity problem in a corpus, table or report input. Exit code 2.
struct DataError : Error {
    using Error::Error;
};

struct ParseError : DataError {
    ParseError(const std::string& file, std::size_t line, const std::string& message)
        : DataError(file + ":" + std::to_string(line) + ": " + message),
          file_name(file),
          line_number(line) {}

    std::string file_name;
    std::size_t line_number = 0;
};

}  // namespace snipkit
