#pragma once

#include <stdexcept>
#include <string>

namespace canput {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI's JSON error records.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define CANPUT_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                     \
    public:                                                         \
        explicit Name(const std::string& what) : Error(#Name, what) {} \
    }

CANPUT_DEFINE_ERROR(InvalidParams);
CANPUT_DEFINE_ERROR(DegenerateCancellation);
CANPUT_DEFINE_ERROR(PoleError);
CANPUT_DEFINE_ERROR(DegenerateRoots);
CANPUT_DEFINE_ERROR(DomainError);
CANPUT_DEFINE_ERROR(ThresholdOutOfRange);
CANPUT_DEFINE_ERROR(QuadratureFailure);
CANPUT_DEFINE_ERROR(BranchError);
CANPUT_DEFINE_ERROR(ConfigError);

#undef CANPUT_DEFINE_ERROR

}  // namespace canput
