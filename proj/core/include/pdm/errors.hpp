#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pdm {

/// Base class of every exception thrown by the library.
class pdm_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed sparse text input. `line()` is 1-based.
class parse_error : public pdm_error {
  public:
    parse_error(std::size_t line, const std::string &what)
        : pdm_error("line " + std::to_string(line) + ": " + what), line_{line} {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// A precondition on a numeric parameter or configuration was violated.
class invalid_parameter : public pdm_error {
  public:
    using pdm_error::pdm_error;
};

/// Degenerate numerics detected at run time (e.g. an absurd multiple-update count).
class numeric_error : public pdm_error {
  public:
    using pdm_error::pdm_error;
};

/// File could not be opened, read or written.
class io_error : public pdm_error {
  public:
    using pdm_error::pdm_error;
};

}  // namespace pdm
