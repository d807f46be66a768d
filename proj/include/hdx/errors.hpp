#pragma once

#include <stdexcept>
#include <string>

namespace hdx {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct BudgetExceeded : Error {
    std::uint64_t projected;
    BudgetExceeded(const std::string& what, std::uint64_t projected_count)
        : Error(what + " (projected " + std::to_string(projected_count) + ")"),
          projected(projected_count) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NonIsotropic : Error {
    using Error::Error;
};

struct NoExtension : Error {
    using Error::Error;
};

struct FaceNotInComplex : Error {
    using Error::Error;
};

struct Disconnected : Error {
    int components;
    Disconnected(const std::string& what, int n_components)
        : Error(what + " (" + std::to_string(n_components) + " components)"),
          components(n_components) {}
};

struct NotPartite : Error {
    using Error::Error;
};

struct NoCliquesAtLevel : Error {
    using Error::Error;
};

struct NotCocycle : Error {
    using Error::Error;
};

struct NotCliqueComplex : Error {
    using Error::Error;
};

struct NotProper : Error {
    std::uint64_t witness_a = 0, witness_b = 0;
    NotProper(const std::string& what, std::uint64_t a, std::uint64_t b)
        : Error(what), witness_a(a), witness_b(b) {}
};

struct PreconditionViolated : Error {
    using Error::Error;
};

struct ParameterError : Error {
    using Error::Error;
};

}  // namespace hdx
