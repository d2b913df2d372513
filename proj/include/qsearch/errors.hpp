#pragma once

#include <stdexcept>
#include <string>

namespace qsearch {

// Parameter outside the mathematical domain of an operation (n range, omega = 0, ...).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Root bracketing failure, pole proximity, eigensolver trouble.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Request exceeds the configured memory cap.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operation applied to a state whose register layout does not fit it.
class state_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A spectral or model-level check could not be carried out or failed.
class analysis_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class verification_failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qsearch
