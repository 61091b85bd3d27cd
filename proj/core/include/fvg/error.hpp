#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fvg {

/// Malformed polyMesh or case input. `line()` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A mesh that parsed but breaks a structural invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Degenerate geometry, e.g. a face of zero area.
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Linear solver failure: non-positive diagonal, divergence, non-convergence.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fvg
