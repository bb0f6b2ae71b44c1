#pragma once

#include <stdexcept>
#include <string>

namespace cimp {

/// Input text (polynomial, instance, system, definition file) failed to parse.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A configured size or degree bound would be exceeded; the message names the bound.
class CapExceeded : public std::runtime_error {
public:
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// The requested engine does not apply to the given instance.
class EngineInapplicable : public std::runtime_error {
public:
    explicit EngineInapplicable(const std::string& what, bool induced_permutation = false)
        : std::runtime_error(what), induced_permutation_(induced_permutation) {}

    /// True when a consistency closure exposed a permutation relation that a
    /// preprocessing pass has to eliminate before retrying.
    bool induced_permutation() const { return induced_permutation_; }

private:
    bool induced_permutation_;
};

} // namespace cimp
