#pragma once

#include <stdexcept>
#include <string>

namespace hbubble {

struct DegenerateMoebius : std::domain_error {
    explicit DegenerateMoebius(const std::string& what) : std::domain_error(what) {}
};

struct QuadratureNotConverged : std::runtime_error {
    explicit QuadratureNotConverged(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidAdaptation : std::invalid_argument {
    explicit InvalidAdaptation(const std::string& what) : std::invalid_argument(what) {}
};

struct NearBoundary : std::domain_error {
    explicit NearBoundary(const std::string& what) : std::domain_error(what) {}
};

struct NotInTable : std::out_of_range {
    explicit NotInTable(const std::string& what) : std::out_of_range(what) {}
};

struct TruncationNotConverged : std::runtime_error {
    explicit TruncationNotConverged(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownIdentity : std::out_of_range {
    explicit UnknownIdentity(const std::string& what) : std::out_of_range(what) {}
};

struct BubblesTooClose : std::domain_error {
    explicit BubblesTooClose(const std::string& what) : std::domain_error(what) {}
};

struct OutOfRange : std::domain_error {
    explicit OutOfRange(const std::string& what) : std::domain_error(what) {}
};

struct InsufficientData : std::invalid_argument {
    explicit InsufficientData(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace hbubble
