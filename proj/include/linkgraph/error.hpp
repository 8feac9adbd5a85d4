#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace linkgraph {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed corpus or keyword input. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string &what)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A power iteration hit its iteration cap before meeting the tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string &algorithm, std::size_t iterations, double residual)
        : Error(algorithm + " did not converge after " + std::to_string(iterations)
                + " iterations (last residual " + std::to_string(residual) + ")"),
          iterations_(iterations), residual_(residual) {}

    std::size_t iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t iterations_;
    double residual_;
};

} // namespace linkgraph
