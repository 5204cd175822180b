#pragma once

#include <stdexcept>
#include <string>

namespace synsis {

/// A numerical procedure failed to deliver its result (non-convergence,
/// integrator breakdown, eigensolver failure). Distinct from invalid-input
/// errors so callers can map the two onto different exit codes.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace synsis
