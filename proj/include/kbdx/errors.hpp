#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kbdx {

enum class ErrorCode {
    Parse,
    DuplicateAxiomId,
    SectionUnknown,
    UnsupportedAxiom,
    UnsupportedAxiomKind,
    InconsistentInput,
    SizeLimitExceeded,
    EmptyDiagnosisList,
    MissingPrior,
    EmptyQuery,
    TooFewDiagnoses,
    EmptyCandidates,
    InvalidDpi,
    AnswerMismatch,
    SessionNotActive,
    ModeMismatch,
    DuplicateTestCase,
    ContradictsAcquired,
    UnknownDiagnosis,
    ScriptExhausted,
    GenerationFailure,
};

std::string_view toString(ErrorCode code) noexcept;

/// Base class of every error raised by the engine. The code is stable and
/// is what the CLI and HTTP layers map to exit statuses and status codes.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Malformed axiom or DPI text. Line and column are 1-based and always point
/// at a character of the input (end-of-input errors point at the last one).
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, std::string detail,
               std::vector<std::string> expected = {});

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& detail() const noexcept { return detail_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string detail_;
    std::vector<std::string> expected_;
};

}  // namespace kbdx
