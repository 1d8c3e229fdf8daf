#pragma once

#include <stdexcept>
#include <string>

namespace risecure {

/// Raised when an operation's preconditions are violated (bad parameters,
/// width mismatches, reserved encodings). Recoverable failures such as an
/// uncorrectable read are reported as values instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by the output mux when the fuzzy extractor cannot recover R2.
class ReconstructFailure : public Error {
public:
    ReconstructFailure() : Error("reconstruction failed: uncorrectable read") {}
};

}  // namespace risecure
