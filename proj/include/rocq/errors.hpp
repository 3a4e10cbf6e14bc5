#pragma once

#include <stdexcept>
#include <string>

namespace rocq {

// Input data failed a schema or invariant check. The CLI maps this to exit
// code 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A file or stream could not be read or written. The CLI maps this to exit
// code 1.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rocq
