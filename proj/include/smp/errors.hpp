#pragma once

#include <stdexcept>
#include <string>

namespace smp {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: duplicate person in a matching, incomplete or
/// non-permutation preference list, unknown identifier, roster nesting
/// broken, preference drift between stages.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// An operation was handed a problem of the wrong variant.
class VariantError : public Error {
public:
    using Error::Error;
};

/// Input problem is not regular (|W1| <= |W2| = |U|) where regularity is required.
class RegularityError : public Error {
public:
    using Error::Error;
};

/// The supposed dominating matching does not men-dominate.
class DominanceError : public Error {
public:
    using Error::Error;
};

/// A difference-graph component violates the path/cycle dichotomy that is
/// guaranteed for stable inputs. Seeing this means an input was not stable
/// or there is an upstream bug.
class StructureViolation : public Error {
public:
    using Error::Error;
};

/// A theorem-guaranteed postcondition failed at runtime.
class PostconditionError : public Error {
public:
    using Error::Error;
};

/// An online policy emitted a matching that is not stable in its stage.
class ProtocolViolation : public Error {
public:
    using Error::Error;
};

/// Enumeration exceeded the caller's cap. Carries how many items were found
/// before giving up.
class CapExceeded : public Error {
public:
    CapExceeded(const std::string& what, long long found)
        : Error(what), partial_count(found) {}
    long long partial_count;
};

/// Problem-file parse failure with a 1-based line number.
class ParseError : public Error {
public:
    ParseError(int line_no, const std::string& msg)
        : Error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
    int line;
};

}  // namespace smp
