#ifndef ARCOH_ERRORS_HPP
#define ARCOH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace arcoh {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments that are not covered by a more specific error.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

/// Too many lattice points (or search-tree nodes) for direct summation.
class EnumerationBudgetExceeded : public Error {
public:
    using Error::Error;
};

class ToleranceUnreachable : public Error {
public:
    using Error::Error;
};

class InvalidFieldSpec : public Error {
public:
    using Error::Error;
};

/// A custom field descriptor failed one of its cross-checks. The message
/// names the failing invariant.
class DescriptorInconsistent : public Error {
public:
    DescriptorInconsistent(std::string invariant, const std::string& detail)
        : Error("descriptor inconsistent (" + invariant + "): " + detail),
          invariant_(std::move(invariant)) {}

    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

class UnsupportedField : public Error {
public:
    using Error::Error;
};

/// A ghost-space descriptor violates one of the structure's invariants.
class InvalidGhostSpace : public Error {
public:
    using Error::Error;
};

} // namespace arcoh

#endif // ARCOH_ERRORS_HPP
