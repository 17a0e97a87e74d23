#pragma once

#include <stdexcept>

namespace cacrypt {

// Malformed input data: container headers, image files, grid dumps.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cacrypt
