// Simulated oracles and the seeded fault-injection benchmark.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kbdx/model.hpp"
#include "kbdx/query.hpp"
#include "kbdx/reasoner.hpp"
#include "kbdx/session.hpp"

namespace kbdx {

struct OracleSpec {
    enum class Kind { Perfect, Noisy, Scripted };
    Kind kind = Kind::Perfect;
    std::vector<Axiom> intended;  // M_t, without the background
    double gamma = 1.0;
    std::uint64_t seed = 0;
    std::vector<Answer> script;
};

/// Answers queries relative to intended ∪ background. Noisy oracles flip each
/// perfect classification with probability gamma * (1 - M_ax(ax)).
class Oracle {
public:
    Oracle(OracleSpec spec, std::vector<Axiom> background, const Reasoner& reasoner = defaultReasoner());

    /// Throws ScriptExhausted when a scripted oracle runs out of answers.
    Answer answer(const Query& query);

    std::size_t flips() const noexcept { return flips_; }

private:
    OracleSpec spec_;
    std::vector<Axiom> knowledge_;
    const Reasoner* reasoner_;
    std::mt19937_64 rng_;
    std::size_t cursor_ = 0;
    std::size_t flips_ = 0;
};

/// One generated benchmark instance.
struct Trial {
    std::uint64_t seed = 0;
    std::vector<Axiom> intended;    // M_t terminology
    Dpi dpi;                        // faulty O, assertions in B, P and N
    std::vector<std::string> truth;  // ids of the injected faults, sorted
};

/// Random consistent terminology of 14-20 classes (mostly chains), 2-3
/// individuals typed in the bottom third, then `faults` mutations (flip,
/// retarget, spurious disjointness). N holds wrong assertions about the
/// individuals, so a draw whose faults reach no individual is retried, as is
/// one that does not violate. GenerationFailure after bounded retries.
Trial generateTrial(std::uint64_t seed, std::size_t faults, const Reasoner& reasoner = defaultReasoner());

/// The injected set is a minimal diagnosis of the trial's DPI.
bool truthIsMinimalDiagnosis(const Trial& trial, const Reasoner& reasoner = defaultReasoner());

struct SimulationConfig {
    std::uint64_t seed = 1;
    std::size_t trials = 100;
    std::size_t faults = 1;
    std::vector<Strategy> strategies{Strategy::Entropy};
    OracleSpec::Kind oracle = OracleSpec::Kind::Perfect;
    double gamma = 1.0;
    std::size_t k = kExhaustiveSeedLimit;
    std::size_t maxSteps = 200;
};

struct TrialRecord {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    Strategy strategy = Strategy::Entropy;
    std::size_t faults = 0;
    bool eligible = false;          // injected set is a minimal diagnosis
    std::size_t initialDiagnoses = 0;
    std::size_t queries = 0;
    std::size_t interactions = 0;
    std::size_t remaining = 0;
    bool success = false;           // solved with exactly the injected set
    Status status = Status::Active;
    std::size_t flips = 0;
    std::vector<std::string> truth;
    std::vector<std::string> solved;
};

struct StrategySummary {
    Strategy strategy = Strategy::Entropy;
    std::size_t trials = 0;
    std::size_t eligible = 0;
    double meanQueries = 0.0;
    double medianQueries = 0.0;
    double successRate = 0.0;          // over eligible trials
    double meanRemaining = 0.0;
    double meanInteractions = 0.0;
    std::size_t divergences = 0;       // eligible trials that did not end at the truth
};

struct SimulationReport {
    std::vector<TrialRecord> records;  // trial-major, strategies in config order
    std::vector<StrategySummary> summaries;
};

/// Every strategy runs on the same generated DPI of each trial.
SimulationReport runSimulation(const SimulationConfig& config, const Reasoner& reasoner = defaultReasoner());

std::string toNdjson(const TrialRecord& record);
std::string summaryTable(const SimulationReport& report, const SimulationConfig& config);

}  // namespace kbdx
