// Sequential debugging sessions. States are plain values: every operation
// takes a state and returns the successor, leaving the input untouched.

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kbdx/diagnoses.hpp"
#include "kbdx/model.hpp"
#include "kbdx/query.hpp"
#include "kbdx/reasoner.hpp"

namespace kbdx {

enum class Mode { QueryBased, TestCaseBased };
enum class Status { Active, Solved, Stalled, Aborted };
enum class Polarity { Positive, Negative };
enum class PriorKind { Uniform, Complexity };

std::string_view toString(Mode m) noexcept;
std::string_view toString(Status s) noexcept;
std::string_view toString(Classification c) noexcept;
std::optional<Mode> parseMode(std::string_view text) noexcept;
std::optional<Classification> parseClassification(std::string_view text) noexcept;

inline constexpr int kMaxConsecutiveUnknown = 3;

struct SessionConfig {
    std::size_t k = kExhaustiveSeedLimit;
    PriorKind priors = PriorKind::Uniform;
    std::optional<FaultProbabilities> customPriors;  // overrides `priors`
    StrategySpec strategy;
    std::optional<bool> requireCoherence;  // overrides the DPI flag when set
    GenerateOptions generate;
};

struct Metrics {
    std::size_t queriesAnswered = 0;
    std::size_t testCasesAdded = 0;
    std::size_t interactions = 0;
    std::chrono::nanoseconds elapsed{0};
    std::size_t remainingDiagnoses = 0;
    std::optional<bool> trueDiagnosisFound;
};

struct HistoryEntry {
    enum class Kind { QueryAnswer, TestCase, Mark };
    Kind kind = Kind::QueryAnswer;
    std::vector<Axiom> axioms;  // query axioms, or the single test case
    Answer answer;              // per-axiom classification (test case: its polarity)
    std::optional<Diagnosis> marked;
    std::chrono::system_clock::time_point at;
};

struct SessionState {
    Dpi dpi;  // acquired test cases are folded into P and N
    Mode mode = Mode::QueryBased;
    SessionConfig config;
    FaultProbabilities priors;
    std::vector<Diagnosis> leading;
    std::optional<Query> currentQuery;
    std::vector<Query> pending;               // remaining ranked candidates after currentQuery
    std::vector<std::vector<Axiom>> discarded;  // fully unknown queries, never asked again
    int consecutiveUnknown = 0;
    std::vector<HistoryEntry> history;
    Metrics metrics;
    Status status = Status::Active;
    std::optional<Diagnosis> solved;
    std::uint64_t revision = 0;
    std::chrono::steady_clock::time_point started;
};

/// Validates the DPI (InvalidDpiError), ranks the leading diagnoses and, in
/// query mode, selects the first query.
SessionState startSession(Dpi dpi, Mode mode, const SessionConfig& config = {},
                          const Reasoner& reasoner = defaultReasoner());

/// Ids of the current query missing from `answer` count as unknown.
SessionState submitAnswer(const SessionState& state, const Answer& answer,
                          const Reasoner& reasoner = defaultReasoner());

/// An empty axiom id is replaced by a fresh t<N> id.
SessionState addTestCase(const SessionState& state, Axiom axiom, Polarity polarity,
                         const Reasoner& reasoner = defaultReasoner());

SessionState markDiagnosis(const SessionState& state, DiagnosisRef diagnosis);

}  // namespace kbdx
