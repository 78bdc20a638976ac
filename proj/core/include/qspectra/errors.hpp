#pragma once

#include <stdexcept>
#include <string>

namespace qspectra {

// Malformed or inconsistent input; maps to exit status 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A configured resource limit would be exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A computation left its numerically trustworthy regime.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qspectra
