#pragma once

#include <stdexcept>
#include <string>

namespace smprod {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class invalid_discriminant : public error {
public:
    explicit invalid_discriminant(long value)
        : error("invalid discriminant " + std::to_string(value) +
                ": expected a negative integer congruent to 0 or 1 mod 4") {}
};

class invalid_argument : public error {
public:
    using error::error;
};

/// A point handed to the j evaluator is not in the closed fundamental domain.
class outside_domain : public error {
public:
    using error::error;
};

/// Ball arithmetic could not reach the requested accuracy within the retry budget.
class precision_exhausted : public error {
public:
    using error::error;
};

/// A Hilbert class polynomial coefficient ball did not isolate a unique integer.
class rounding_ambiguous : public error {
public:
    using error::error;
};

class degree_mismatch : public error {
public:
    using error::error;
};

class cache_miss : public error {
public:
    using error::error;
};

class corrupt_cache_entry : public error {
public:
    using error::error;
};

/// A branch of the case analysis failed to close, or trusted data failed its self-check.
class certification_failure : public error {
public:
    using error::error;
};

class zero_not_supported : public error {
public:
    zero_not_supported() : error("A = 0 is not supported: products are considered in Q^x") {}
};

/// Solve was called without a closed certificate or an explicit trust opt-in.
class certificate_required : public error {
public:
    using error::error;
};

}  // namespace smprod
