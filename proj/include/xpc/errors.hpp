#pragma once

#include <stdexcept>
#include <string>

namespace xpc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidParameter : Error {
    using Error::Error;
};

// a <= 0.5: unary is optimal for every distribution; no Renyi order exists.
struct DegenerateRegime : Error {
    using Error::Error;
};

struct DivergentPenalty : Error {
    using Error::Error;
};

struct DivergentEntropy : Error {
    using Error::Error;
};

// No r up to the search cap could be certified for condition-based
// tail constructions; the distribution may be too heavy-tailed.
struct NotVerifiablyLightTailed : Error {
    using Error::Error;
};

// The stabilized-d length limit did not settle by d = 64.
struct NonStabilized : Error {
    using Error::Error;
};

struct OutOfAlphabet : Error {
    using Error::Error;
};

struct TruncatedStream : Error {
    using Error::Error;
};

struct MalformedStream : Error {
    using Error::Error;
};

}  // namespace xpc
