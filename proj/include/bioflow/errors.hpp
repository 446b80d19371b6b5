#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bioflow {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class IssueKind {
    MissingColumn,
    BadUnit,
    UnknownBiomass,
    EligibilityViolation,
    UnknownReference,
    Inconsistent,
};

const char* to_string(IssueKind kind);

/// One validation finding. `row` is 1-based over data rows (0 when the
/// finding is about the header or the file as a whole).
struct Issue {
    IssueKind kind;
    std::string file;
    std::size_t row = 0;
    std::string field;
    std::string message;

    std::string describe() const;
};

/// Thrown by dataset loading; carries every finding, never a partial dataset.
class DatasetError : public Error {
public:
    explicit DatasetError(std::vector<Issue> issues);

    const std::vector<Issue>& issues() const noexcept { return issues_; }

private:
    std::vector<Issue> issues_;
};

class SizeOutOfRange : public Error {
public:
    using Error::Error;
};

class IneligibleBiomass : public Error {
public:
    using Error::Error;
};

class MissingMatrixEntry : public Error {
public:
    using Error::Error;
};

class NoEligibleFeedstock : public Error {
public:
    using Error::Error;
};

class AllZeroWeights : public Error {
public:
    using Error::Error;
};

class NonOptimalSolution : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace bioflow
