#pragma once

#include <stdexcept>
#include <string>

namespace tilings {

// Exit-code classes used by the CLI: 2 usage, 3 io, 4 numeric guard.
enum class ErrorClass { Usage = 2, Io = 3, NumericGuard = 4, Domain = 1 };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, std::string msg) : std::runtime_error(std::move(msg)), cls_(cls) {}
    ErrorClass error_class() const { return cls_; }

private:
    ErrorClass cls_;
};

struct OverflowGuard : Error {
    explicit OverflowGuard(const std::string& msg)
        : Error(ErrorClass::NumericGuard, "OverflowGuard: " + msg) {}
};

struct NotPrimitive : Error {
    explicit NotPrimitive(const std::string& msg)
        : Error(ErrorClass::Domain, "NotPrimitive: " + msg) {}
};

struct NoComplexRoot : Error {
    explicit NoComplexRoot(const std::string& msg)
        : Error(ErrorClass::Domain, "NoComplexRoot: " + msg) {}
};

struct Degenerate : Error {
    explicit Degenerate(const std::string& msg)
        : Error(ErrorClass::NumericGuard, "Degenerate: " + msg) {}
};

struct NonPerron : Error {
    explicit NonPerron(const std::string& msg)
        : Error(ErrorClass::Domain, "NonPerron: " + msg) {}
};

struct Reducible : Error {
    explicit Reducible(const std::string& msg)
        : Error(ErrorClass::Domain, "Reducible: " + msg) {}
};

struct InconsistentDriver : Error {
    explicit InconsistentDriver(const std::string& msg)
        : Error(ErrorClass::Domain, "InconsistentDriver: " + msg) {}
};

struct RadiusTooLarge : Error {
    explicit RadiusTooLarge(const std::string& msg)
        : Error(ErrorClass::NumericGuard, "RadiusTooLarge: " + msg) {}
};

struct ZeroVector : Error {
    explicit ZeroVector(const std::string& msg)
        : Error(ErrorClass::Usage, "ZeroVector: " + msg) {}
};

struct IncompleteCorona : Error {
    explicit IncompleteCorona(const std::string& msg)
        : Error(ErrorClass::Domain, "IncompleteCorona: " + msg) {}
};

struct NotSaturated : Error {
    explicit NotSaturated(const std::string& msg)
        : Error(ErrorClass::NumericGuard, "NotSaturated: " + msg) {}
};

struct DegenerateShape : Error {
    explicit DegenerateShape(const std::string& msg)
        : Error(ErrorClass::NumericGuard, "DegenerateShape: " + msg) {}
};

struct BoxTooLarge : Error {
    explicit BoxTooLarge(const std::string& msg)
        : Error(ErrorClass::NumericGuard, "BoxTooLarge: " + msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(ErrorClass::Io, "io: " + msg) {}
};

struct UsageError : Error {
    explicit UsageError(const std::string& msg) : Error(ErrorClass::Usage, "usage: " + msg) {}
};

} // namespace tilings
