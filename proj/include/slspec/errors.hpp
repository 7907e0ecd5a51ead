#ifndef SLSPEC_ERRORS_HPP
#define SLSPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace slspec {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input detectable before any numerics run: unknown family, parameter
/// out of range, malformed config file.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

/// Integration or quadrature breakdown: step-size underflow, non-finite
/// coefficient sample, unresolved bisection cluster.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Operation invoked outside its validity region: wrong family, wrong
/// spectral case, lambda inside a gap, degenerate spectrum.
class DomainError : public Error {
public:
    using Error::Error;
};

} // namespace slspec

#endif
