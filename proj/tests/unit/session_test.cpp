#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "kbdx/diagnoses.hpp"
#include "kbdx/errors.hpp"
#include "kbdx/session.hpp"
#include "kbdx/validate.hpp"

using namespace kbdx;

namespace {

using Sets = std::vector<std::vector<std::string>>;

Sets ids(const SessionState& s) {
    Sets out;
    for (const auto& d : s.leading) out.push_back(d.axioms);
    return out;
}

std::vector<std::string> queryTexts(const SessionState& s) {
    std::vector<std::string> out;
    for (const auto& a : s.currentQuery->axioms) out.push_back(serializeAxiom(a));
    return out;
}

Answer all(const SessionState& s, Classification c) {
    Answer a;
    for (const auto& ax : s.currentQuery->axioms) a.classifications[ax.id] = c;
    return a;
}

ErrorCode codeOf(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error";
    return ErrorCode::Parse;
}

}  // namespace

TEST(Session, StartsWithCw) {
    const SessionState s = startSession(support::runningDpi(), Mode::QueryBased);
    EXPECT_EQ(s.status, Status::Active);
    EXPECT_EQ(ids(s), (Sets{{"a1"}, {"a2"}, {"a3"}, {"a4"}}));
    ASSERT_TRUE(s.currentQuery);
    EXPECT_EQ(queryTexts(s), std::vector<std::string>{"C(w)"});
    EXPECT_EQ(s.revision, 0u);
}

TEST(Session, TwoNegativeAnswersSolveA1) {
    const SessionState s0 = startSession(support::runningDpi(), Mode::QueryBased);
    const SessionState s1 = submitAnswer(s0, all(s0, Classification::Negative));
    EXPECT_EQ(ids(s1), (Sets{{"a1"}, {"a2"}}));
    EXPECT_EQ(queryTexts(s1), std::vector<std::string>{"B(w)"});
    const SessionState s2 = submitAnswer(s1, all(s1, Classification::Negative));
    EXPECT_EQ(s2.status, Status::Solved);
    ASSERT_TRUE(s2.solved);
    EXPECT_EQ(s2.solved->axioms, std::vector<std::string>{"a1"});
    EXPECT_EQ(s2.metrics.queriesAnswered, 2u);
    EXPECT_EQ(s2.dpi.negatives.size(), 3u);
    // Value semantics: the earlier states are untouched.
    EXPECT_EQ(s0.leading.size(), 4u);
    EXPECT_EQ(s0.dpi.negatives.size(), 1u);
    EXPECT_LT(s0.revision, s1.revision);
    EXPECT_LT(s1.revision, s2.revision);
}

TEST(Session, PositiveAnswerKeepsUpperChain) {
    const SessionState s0 = startSession(support::runningDpi(), Mode::QueryBased);
    const SessionState s1 = submitAnswer(s0, all(s0, Classification::Positive));
    EXPECT_EQ(ids(s1), (Sets{{"a3"}, {"a4"}}));
    EXPECT_EQ(s1.dpi.positives.size(), 2u);
}

TEST(Session, NothingWrongSolvesWithEmptyDiagnosis) {
    Dpi d = support::runningDpi();
    d.negatives.clear();
    const SessionState s = startSession(d, Mode::QueryBased);
    EXPECT_EQ(s.status, Status::Solved);
    EXPECT_TRUE(s.solved->axioms.empty());
}

TEST(Session, InvalidDpiRejected) {
    Dpi d = support::runningDpi();
    d.negatives.push_back(parseAxiom("B(v)", "n2"));
    EXPECT_THROW(startSession(d, Mode::QueryBased), InvalidDpiError);
}

TEST(Session, AnswerErrors) {
    const SessionState s = startSession(support::runningDpi(), Mode::QueryBased);
    Answer foreign;
    foreign.classifications["zz"] = Classification::Negative;
    EXPECT_EQ(codeOf([&] { submitAnswer(s, foreign); }), ErrorCode::AnswerMismatch);
    const SessionState t = startSession(support::runningDpi(), Mode::TestCaseBased);
    EXPECT_EQ(codeOf([&] { submitAnswer(t, {}); }), ErrorCode::ModeMismatch);
    SessionState done = submitAnswer(s, all(s, Classification::Negative));
    done = submitAnswer(done, all(done, Classification::Negative));
    EXPECT_EQ(codeOf([&] { submitAnswer(done, {}); }), ErrorCode::SessionNotActive);
}

TEST(Session, UnknownAnswersDiscardThenStall) {
    SessionState s = startSession(support::runningDpi(), Mode::QueryBased);
    std::vector<std::vector<std::string>> asked;
    for (int i = 0; i < kMaxConsecutiveUnknown; ++i) {
        ASSERT_EQ(s.status, Status::Active);
        asked.push_back(queryTexts(s));
        s = submitAnswer(s, all(s, Classification::Unknown));
    }
    EXPECT_EQ(s.status, Status::Stalled);
    EXPECT_EQ(s.leading.size(), 4u);
    EXPECT_EQ(s.dpi.positives.size(), 1u);
    EXPECT_EQ(s.dpi.negatives.size(), 1u);
    std::sort(asked.begin(), asked.end());
    EXPECT_EQ(std::unique(asked.begin(), asked.end()), asked.end());
    // Stalled sessions can still be closed by marking.
    const SessionState m = markDiagnosis(s, 2);
    EXPECT_EQ(m.status, Status::Solved);
    EXPECT_EQ(m.solved->axioms, std::vector<std::string>{"a3"});
}

TEST(Session, TestCaseModeFollowsAddAndMark) {
    const SessionState s0 = startSession(support::runningDpi(), Mode::TestCaseBased);
    EXPECT_FALSE(s0.currentQuery);
    const SessionState s1 = addTestCase(s0, parseAxiom("D(w)"), Polarity::Positive);
    EXPECT_EQ(ids(s1), (Sets{{"a4"}}));
    EXPECT_EQ(s1.status, Status::Active);  // no auto-solve in this mode
    EXPECT_EQ(s1.metrics.testCasesAdded, 1u);
    EXPECT_EQ(s1.dpi.positives.back().id.rfind("t", 0), 0u);
    const SessionState s2 = markDiagnosis(s1, 0);
    EXPECT_EQ(s2.status, Status::Solved);
    EXPECT_EQ(s2.solved->axioms, std::vector<std::string>{"a4"});
    EXPECT_EQ(s2.metrics.remainingDiagnoses, 1u);
}

TEST(Session, TestCaseErrors) {
    const SessionState s = startSession(support::runningDpi(), Mode::TestCaseBased);
    EXPECT_EQ(codeOf([&] { addTestCase(s, parseAxiom("B(v)"), Polarity::Positive); }), ErrorCode::DuplicateTestCase);
    EXPECT_EQ(codeOf([&] { addTestCase(s, parseAxiom("B(v)"), Polarity::Negative); }),
              ErrorCode::ContradictsAcquired);
    EXPECT_EQ(codeOf([&] { addTestCase(s, parseAxiom("A SubClassOf p some B"), Polarity::Negative); }),
              ErrorCode::UnsupportedAxiom);
    EXPECT_EQ(codeOf([&] { markDiagnosis(s, 9); }), ErrorCode::UnknownDiagnosis);
    const SessionState q = startSession(support::runningDpi(), Mode::QueryBased);
    EXPECT_EQ(codeOf([&] { addTestCase(q, parseAxiom("D(w)"), Polarity::Positive); }), ErrorCode::ModeMismatch);
    // A negative test case already entailed by B and P cannot be acquired.
    EXPECT_THROW(addTestCase(s, parseAxiom("A(w)"), Polarity::Negative), InvalidDpiError);
}

TEST(Session, MarkRecordsRemaining) {
    const SessionState s = startSession(support::runningDpi(), Mode::TestCaseBased);
    const SessionState m = markDiagnosis(s, 3);
    EXPECT_EQ(m.metrics.remainingDiagnoses, 4u);
    EXPECT_EQ(m.solved->axioms, std::vector<std::string>{"a4"});
}

TEST(Session, ParsersAndNames) {
    EXPECT_EQ(parseMode("query"), Mode::QueryBased);
    EXPECT_EQ(parseMode("testcase"), Mode::TestCaseBased);
    EXPECT_FALSE(parseMode("other"));
    EXPECT_EQ(parseClassification("+"), Classification::Positive);
    EXPECT_EQ(parseClassification("negative"), Classification::Negative);
    EXPECT_EQ(parseClassification("?"), Classification::Unknown);
    EXPECT_FALSE(parseClassification("x"));
    EXPECT_EQ(toString(Status::Stalled), "stalled");
}

// Random sessions answered by a perfect oracle over a random diagnosis.
TEST(SessionProperty, EveryAnswerEliminatesALeadingDiagnosis) {
    support::Rng rng(41);
    for (int i = 0; i < 150; ++i) {
        const Dpi d = support::randomViolatingDpi(rng);
        SessionState s = startSession(d, Mode::QueryBased);
        if (s.status != Status::Active) continue;
        const auto truth = s.leading[support::pick(rng, 0, s.leading.size() - 1)].axioms;
        std::size_t steps = 0;
        while (s.status == Status::Active) {
            ASSERT_TRUE(s.currentQuery);
            const auto before = s.leading;
            const auto acquired = s.dpi.positives.size() + s.dpi.negatives.size();
            Answer a;
            auto kb = complementOf(d.ontology, truth);
            kb.insert(kb.end(), s.dpi.background.begin(), s.dpi.background.end());
            kb.insert(kb.end(), d.positives.begin(), d.positives.end());
            for (const auto& ax : s.currentQuery->axioms) {
                a.classifications[ax.id] =
                    defaultReasoner().entails(kb, ax) ? Classification::Positive : Classification::Negative;
            }
            s = submitAnswer(s, a);
            ++steps;
            EXPECT_GT(s.dpi.positives.size() + s.dpi.negatives.size(), acquired);
            EXPECT_TRUE(std::any_of(before.begin(), before.end(),
                                    [&](const Diagnosis& x) { return !isDiagnosis(s.dpi, x.axioms); }));
            ASSERT_LT(steps, 100u);
        }
        EXPECT_EQ(s.metrics.queriesAnswered + s.metrics.testCasesAdded, s.history.size());
        EXPECT_EQ(s.metrics.interactions, s.history.size());
        if (s.status == Status::Solved) {
            EXPECT_EQ(s.solved->axioms, truth);
        } else {
            ASSERT_EQ(s.status, Status::Stalled);
            EXPECT_TRUE(std::any_of(s.leading.begin(), s.leading.end(),
                                    [&](const Diagnosis& x) { return x.axioms == truth; }));
        }
    }
}
