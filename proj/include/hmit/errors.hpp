#pragma once

#include <stdexcept>
#include <string>

namespace hmit {

// Malformed input file (CSV/ARFF/JSON); message carries the line number
// where applicable.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyDatasetError : std::runtime_error {
    explicit EmptyDatasetError(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidArgument : std::runtime_error {
    explicit InvalidArgument(const std::string& what) : std::runtime_error(what) {}
};

// A token or cell has no entry in the item codebook.
struct CodebookMissError : std::runtime_error {
    explicit CodebookMissError(const std::string& what) : std::runtime_error(what) {}
};

// Requested missing rate cannot be met while keeping one known
// non-class cell per row.
struct InfeasibleRateError : std::runtime_error {
    explicit InfeasibleRateError(const std::string& what) : std::runtime_error(what) {}
};

// Downloaded payload did not match the manifest digest.
struct IntegrityError : std::runtime_error {
    explicit IntegrityError(const std::string& what) : std::runtime_error(what) {}
};

struct FetchError : std::runtime_error {
    explicit FetchError(const std::string& what) : std::runtime_error(what) {}
};

// A frequent-itemset list handed to rule generation is not downward closed.
struct ClosureViolationError : std::runtime_error {
    explicit ClosureViolationError(const std::string& what) : std::runtime_error(what) {}
};

// Aggregation was asked for an empty fired set; callers route to kNN instead.
struct EmptyFiredSetError : std::runtime_error {
    explicit EmptyFiredSetError(const std::string& what) : std::runtime_error(what) {}
};

struct IncompleteImputationError : std::runtime_error {
    explicit IncompleteImputationError(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyMetricsError : std::runtime_error {
    explicit EmptyMetricsError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hmit
