#pragma once

#include <stdexcept>
#include <string>

namespace elicit {

// Input rejected by a contract check (bad schema, out-of-range weight,
// invalid case). The CLI maps this to exit code 2.
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Failure while computing or writing results (unwritable path, numerical breakdown).
class runtime_failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace elicit
