#pragma once

#include <stdexcept>
#include <string>

namespace morphnet {

// Structural problems in a network description: bad dimensions, missing
// fields, sign entries outside {-1,+1}, and so on.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An operation was given a network (or serialized kind tag) of the wrong
// node kind, e.g. canonicalizing a sum-product network.
struct KindError : ValidationError {
    using ValidationError::ValidationError;
};

// Negating a multi-term three-slope max form pointwise leaves the class;
// see scale_by_sign in canonical.hpp.
struct FClassNegationError : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace morphnet
