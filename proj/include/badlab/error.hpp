#pragma once

// Error hierarchy shared by every module. Each subclass carries a stable
// machine-readable kind string that the CLI surfaces on failure.

#include <stdexcept>
#include <string>

namespace badlab {

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define BADLAB_DEFINE_ERROR(Name, kind_str)                                   \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& message) : Error(kind_str, message) {} \
    };

BADLAB_DEFINE_ERROR(FormatError, "format")
BADLAB_DEFINE_ERROR(MappingError, "mapping")
BADLAB_DEFINE_ERROR(SingularDesignError, "singular_design")
BADLAB_DEFINE_ERROR(InsufficientDataError, "insufficient_data")
BADLAB_DEFINE_ERROR(DomainError, "domain")
BADLAB_DEFINE_ERROR(ArgumentError, "argument")
BADLAB_DEFINE_ERROR(DecompositionError, "decomposition")
BADLAB_DEFINE_ERROR(InsufficientStatisticsError, "insufficient_statistics")
BADLAB_DEFINE_ERROR(DegenerateDistributionError, "degenerate_distribution")
BADLAB_DEFINE_ERROR(FileNotFoundError, "file_not_found")
BADLAB_DEFINE_ERROR(IoError, "io")

#undef BADLAB_DEFINE_ERROR

} // namespace badlab
