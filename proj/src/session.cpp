#include "kbdx/session.hpp"

#include <algorithm>

#include "kbdx/errors.hpp"
#include "kbdx/validate.hpp"

namespace kbdx {

namespace {

std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t revision) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (revision + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

bool sameAxiomSet(const std::vector<Axiom>& a, const std::vector<Axiom>& b) {
    if (a.size() != b.size()) return false;
    return std::all_of(a.begin(), a.end(), [&](const Axiom& x) { return containsStructurally(b, x); });
}

void touch(SessionState& s) {
    ++s.revision;
    s.metrics.elapsed = std::chrono::steady_clock::now() - s.started;
    s.metrics.remainingDiagnoses = s.leading.size();
}

void recomputeLeading(SessionState& s, const Reasoner& reasoner) {
    DiagnosisSearch search{s.config.k, &s.priors};
    s.leading = searchDiagnoses(s.dpi, search, reasoner).diagnoses;
}

// Promotes the best pending candidate that was not discarded; stalls when
// nothing is left.
void advanceQuery(SessionState& s, const Reasoner& reasoner) {
    s.currentQuery.reset();
    while (!s.pending.empty()) {
        Query next = std::move(s.pending.front());
        s.pending.erase(s.pending.begin());
        const bool dropped = std::any_of(s.discarded.begin(), s.discarded.end(),
                                         [&](const std::vector<Axiom>& d) { return sameAxiomSet(d, next.axioms); });
        if (dropped) continue;
        Query q = minimizeQuery(next, s.dpi, s.leading, reasoner);
        if (std::any_of(s.discarded.begin(), s.discarded.end(),
                        [&](const std::vector<Axiom>& d) { return sameAxiomSet(d, q.axioms); })) {
            continue;
        }
        s.currentQuery = std::move(q);
        return;
    }
    s.status = Status::Stalled;
}

void selectNext(SessionState& s, const Reasoner& reasoner) {
    std::vector<Query> candidates = generateCandidates(s.dpi, s.leading, s.config.generate, reasoner);
    StrategySpec strategy = s.config.strategy;
    strategy.seed = mixSeed(strategy.seed, s.revision);
    s.pending.clear();
    for (std::size_t i : rankCandidates(candidates, s.leading, strategy)) {
        Query q = candidates[i];
        q.score = strategy.kind == Strategy::SplitInHalf ? splitScore(q.partition) : entropyScore(q.partition, s.leading);
        s.pending.push_back(std::move(q));
    }
    advanceQuery(s, reasoner);
}

// Status after the leading set changed.
void settle(SessionState& s, const Reasoner& reasoner) {
    s.currentQuery.reset();
    s.pending.clear();
    if (s.leading.empty()) {
        s.status = Status::Aborted;
        return;
    }
    const bool onlyEmpty = s.leading.size() == 1 && s.leading[0].axioms.empty();
    if (onlyEmpty || (s.mode == Mode::QueryBased && s.leading.size() == 1)) {
        s.status = Status::Solved;
        s.solved = s.leading[0];
        return;
    }
    s.status = Status::Active;
    if (s.mode == Mode::QueryBased) selectNext(s, reasoner);
}

void requireActive(const SessionState& s, Mode mode) {
    if (s.mode != mode) {
        throw Error(ErrorCode::ModeMismatch, std::string("operation needs a ") +
                                                 std::string(toString(mode)) + " session");
    }
    if (s.status != Status::Active) {
        throw Error(ErrorCode::SessionNotActive, "session is " + std::string(toString(s.status)));
    }
}

}  // namespace

std::string_view toString(Mode m) noexcept { return m == Mode::QueryBased ? "query" : "testcase"; }

std::string_view toString(Status s) noexcept {
    switch (s) {
        case Status::Active: return "active";
        case Status::Solved: return "solved";
        case Status::Stalled: return "stalled";
        case Status::Aborted: return "aborted";
    }
    return "active";
}

std::string_view toString(Classification c) noexcept {
    switch (c) {
        case Classification::Positive: return "positive";
        case Classification::Negative: return "negative";
        case Classification::Unknown: return "unknown";
    }
    return "unknown";
}

std::optional<Mode> parseMode(std::string_view text) noexcept {
    if (text == "query" || text == "queryBased") return Mode::QueryBased;
    if (text == "testcase" || text == "testCaseBased") return Mode::TestCaseBased;
    return std::nullopt;
}

std::optional<Classification> parseClassification(std::string_view text) noexcept {
    if (text == "positive" || text == "+") return Classification::Positive;
    if (text == "negative" || text == "-") return Classification::Negative;
    if (text == "unknown" || text == "?") return Classification::Unknown;
    return std::nullopt;
}

SessionState startSession(Dpi dpi, Mode mode, const SessionConfig& config, const Reasoner& reasoner) {
    if (config.requireCoherence) dpi.requireCoherence = *config.requireCoherence;
    ValidationReport report = validateDpi(dpi, reasoner);
    if (!report.valid()) throw InvalidDpiError(std::move(report));

    SessionState s;
    s.started = std::chrono::steady_clock::now();
    s.dpi = std::move(dpi);
    s.mode = mode;
    s.config = config;
    if (config.customPriors) {
        s.priors = *config.customPriors;
    } else if (config.priors == PriorKind::Complexity) {
        s.priors = priorsFromComplexity(s.dpi.ontology);
    } else {
        s.priors = uniformPriors(s.dpi.ontology);
    }
    recomputeLeading(s, reasoner);
    settle(s, reasoner);
    s.metrics.elapsed = std::chrono::steady_clock::now() - s.started;
    s.metrics.remainingDiagnoses = s.leading.size();
    return s;
}

SessionState submitAnswer(const SessionState& state, const Answer& answer, const Reasoner& reasoner) {
    requireActive(state, Mode::QueryBased);
    if (!state.currentQuery) throw Error(ErrorCode::SessionNotActive, "no open query");
    const Query& q = *state.currentQuery;
    for (const auto& [id, cls] : answer.classifications) {
        (void)cls;
        if (std::none_of(q.axioms.begin(), q.axioms.end(), [&](const Axiom& a) { return a.id == id; })) {
            throw Error(ErrorCode::AnswerMismatch, "axiom " + id + " is not part of the current query");
        }
    }

    SessionState s = state;
    HistoryEntry entry{HistoryEntry::Kind::QueryAnswer, q.axioms, {}, std::nullopt, std::chrono::system_clock::now()};
    bool informative = false;
    for (const auto& a : q.axioms) {
        auto it = answer.classifications.find(a.id);
        const Classification c = it == answer.classifications.end() ? Classification::Unknown : it->second;
        entry.answer.classifications[a.id] = c;
        if (c == Classification::Positive) {
            s.dpi.positives.push_back(a);
            informative = true;
        } else if (c == Classification::Negative) {
            s.dpi.negatives.push_back(a);
            informative = true;
        }
    }
    s.history.push_back(std::move(entry));
    ++s.metrics.queriesAnswered;
    ++s.metrics.interactions;

    if (!informative) {
        s.discarded.push_back(q.axioms);
        if (++s.consecutiveUnknown >= kMaxConsecutiveUnknown) {
            s.currentQuery.reset();
            s.pending.clear();
            s.status = Status::Stalled;
        } else {
            advanceQuery(s, reasoner);
        }
        touch(s);
        return s;
    }

    s.consecutiveUnknown = 0;
    recomputeLeading(s, reasoner);
    settle(s, reasoner);
    touch(s);
    return s;
}

SessionState addTestCase(const SessionState& state, Axiom axiom, Polarity polarity, const Reasoner& reasoner) {
    requireActive(state, Mode::TestCaseBased);
    if (!reasoner.supports(axiom)) reasoner.requireSupported({axiom});
    const auto& same = polarity == Polarity::Positive ? state.dpi.positives : state.dpi.negatives;
    const auto& other = polarity == Polarity::Positive ? state.dpi.negatives : state.dpi.positives;
    if (containsStructurally(same, axiom)) {
        throw Error(ErrorCode::DuplicateTestCase, "test case already acquired");
    }
    if (containsStructurally(other, axiom)) {
        throw Error(ErrorCode::ContradictsAcquired, "test case already acquired with the opposite polarity");
    }

    SessionState s = state;
    const std::set<std::string> taken = s.dpi.allIds();
    if (axiom.id.empty() || taken.count(axiom.id)) axiom.id = freshId("t", taken);
    (polarity == Polarity::Positive ? s.dpi.positives : s.dpi.negatives).push_back(axiom);

    ValidationReport report = validateDpi(s.dpi, reasoner);
    if (!report.valid()) throw InvalidDpiError(std::move(report));

    HistoryEntry entry{HistoryEntry::Kind::TestCase, {axiom}, {}, std::nullopt, std::chrono::system_clock::now()};
    entry.answer.classifications[axiom.id] =
        polarity == Polarity::Positive ? Classification::Positive : Classification::Negative;
    s.history.push_back(std::move(entry));
    ++s.metrics.testCasesAdded;
    ++s.metrics.interactions;
    recomputeLeading(s, reasoner);
    settle(s, reasoner);
    touch(s);
    return s;
}

SessionState markDiagnosis(const SessionState& state, DiagnosisRef diagnosis) {
    if (state.status != Status::Active && state.status != Status::Stalled) {
        throw Error(ErrorCode::SessionNotActive, "session is " + std::string(toString(state.status)));
    }
    if (diagnosis >= state.leading.size()) {
        throw Error(ErrorCode::UnknownDiagnosis, "no leading diagnosis #" + std::to_string(diagnosis));
    }
    SessionState s = state;
    s.status = Status::Solved;
    s.solved = s.leading[diagnosis];
    s.currentQuery.reset();
    s.pending.clear();
    s.history.push_back(
        {HistoryEntry::Kind::Mark, {}, {}, s.solved, std::chrono::system_clock::now()});
    ++s.metrics.interactions;
    touch(s);
    return s;
}

}  // namespace kbdx
