#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "generators.hpp"
#include "kbdx/conflicts.hpp"
#include "kbdx/diagnoses.hpp"
#include "kbdx/errors.hpp"
#include "kbdx/validate.hpp"
#include "oracle.hpp"

using namespace kbdx;

namespace {

std::vector<std::vector<std::string>> idSets(const std::vector<Diagnosis>& ds) {
    std::vector<std::vector<std::string>> out;
    for (const auto& d : ds) out.push_back(d.axioms);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Axiom> pickIds(const Dpi& d, std::initializer_list<const char*> ids) {
    std::vector<Axiom> out;
    for (const char* id : ids) out.push_back(*d.find(id));
    return out;
}

using Sets = std::vector<std::vector<std::string>>;

}  // namespace

TEST(Validate, RunningExampleIsValid) { EXPECT_TRUE(validateDpi(support::runningDpi()).valid()); }

TEST(Validate, Violations) {
    Dpi d = support::runningDpi();
    d.negatives.push_back(parseAxiom("B(v)", "n2"));
    auto r = validateDpi(d);
    EXPECT_TRUE(r.has(ViolationKind::PositiveNegativeOverlap));
    EXPECT_TRUE(r.has(ViolationKind::NegativeEntailed));

    d = support::runningDpi();
    d.background.push_back(parseAxiom("A SubClassOf B", "b9"));
    EXPECT_TRUE(validateDpi(d).has(ViolationKind::OntologyBackgroundOverlap));

    d = support::runningDpi();
    d.background.push_back(parseAxiom("A SubClassOf Nothing", "b9"));
    EXPECT_TRUE(validateDpi(d).has(ViolationKind::BackgroundInconsistent));

    d = support::runningDpi();
    d.requireCoherence = true;
    d.background.push_back(parseAxiom("Q SubClassOf Nothing", "b9"));
    EXPECT_TRUE(validateDpi(d).has(ViolationKind::BackgroundIncoherent));

    d = support::runningDpi();
    d.background[0].id = "a1";
    EXPECT_TRUE(validateDpi(d).has(ViolationKind::DuplicateId));
}

TEST(Validate, RejectsUnsupportedOntologyAxiom) {
    Dpi d = support::runningDpi();
    d.ontology.push_back(parseAxiom("A SubClassOf p some B", "a9"));
    EXPECT_THROW(validateDpi(d), Error);
}

TEST(Conflicts, Violates) {
    const Dpi d = support::runningDpi();
    EXPECT_TRUE(violates(pickIds(d, {"a1", "a2", "a3", "a4"}), d));
    EXPECT_FALSE(violates(pickIds(d, {"a1", "a2", "a3"}), d));
}

TEST(Conflicts, MinimalConflictOfRunningExample) {
    const Dpi d = support::runningDpi();
    const auto c = findMinimalConflict(d.ontology, d);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->axioms, (std::vector<std::string>{"a1", "a2", "a3", "a4"}));
    EXPECT_FALSE(findMinimalConflict(pickIds(d, {"a1", "a2"}), d));
}

TEST(Conflicts, SingleAxiomConflict) {
    Dpi d = support::runningDpi();
    d.negatives = {parseAxiom("B(w)", "n1")};
    const auto c = findMinimalConflict({*d.find("a1")}, d);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->axioms, std::vector<std::string>{"a1"});
}

TEST(Conflicts, QuickXplainOnIntegers) {
    // Predicate: the set contains both 3 and 7.
    auto pred = [](const std::vector<int>& s) {
        return std::count(s.begin(), s.end(), 3) && std::count(s.begin(), s.end(), 7);
    };
    EXPECT_EQ(quickXplain(std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8}, pred), (std::vector<int>{3, 7}));
    EXPECT_TRUE(quickXplain(std::vector<int>{}, pred).empty());
}

TEST(ConflictsProperty, QuickXplainIsMinimalForThresholdPredicates) {
    support::Rng rng(3);
    for (int i = 0; i < 500; ++i) {
        std::vector<int> items;
        for (int k = 0, n = static_cast<int>(support::pick(rng, 1, 14)); k < n; ++k) items.push_back(k);
        std::vector<int> target;
        for (int x : items) {
            if (support::coin(rng, 0.3)) target.push_back(x);
        }
        if (target.empty()) target.push_back(items.back());
        auto pred = [&](const std::vector<int>& s) {
            return std::all_of(target.begin(), target.end(),
                               [&](int t) { return std::find(s.begin(), s.end(), t) != s.end(); });
        };
        EXPECT_EQ(quickXplain(items, pred), target);
    }
}

TEST(ConflictsProperty, ConflictsAreIrreducible) {
    support::Rng rng(4);
    for (int i = 0; i < 300; ++i) {
        const Dpi d = support::randomViolatingDpi(rng);
        const auto c = findMinimalConflict(d.ontology, d);
        ASSERT_TRUE(c);
        std::vector<Axiom> members;
        for (const auto& id : c->axioms) members.push_back(*d.find(id));
        EXPECT_TRUE(support::oracle::violates(members, d));
        for (std::size_t k = 0; k < members.size(); ++k) {
            auto fewer = members;
            fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(k));
            EXPECT_FALSE(support::oracle::violates(fewer, d));
        }
    }
}

TEST(Diagnoses, RunningExampleStageOne) {
    EXPECT_EQ(idSets(computeMinimalDiagnoses(support::runningDpi())), (Sets{{"a1"}, {"a2"}, {"a3"}, {"a4"}}));
}

TEST(Diagnoses, RunningExampleStageTwo) {
    Dpi d = support::runningDpi();
    d.negatives.push_back(parseAxiom("B(w)", "n2"));
    EXPECT_EQ(idSets(computeMinimalDiagnoses(d)), (Sets{{"a1"}}));
    d = support::runningDpi();
    d.positives.push_back(parseAxiom("D(w)", "p2"));
    EXPECT_EQ(idSets(computeMinimalDiagnoses(d)), (Sets{{"a4"}}));
}

TEST(Diagnoses, NoViolationGivesEmptyDiagnosis) {
    Dpi d = support::runningDpi();
    d.negatives.clear();
    const auto ds = computeMinimalDiagnoses(d);
    ASSERT_EQ(ds.size(), 1u);
    EXPECT_TRUE(ds[0].axioms.empty());
}

TEST(Diagnoses, TwoConflicts) {
    const Dpi d = parseDpiFile(
        "[ONTOLOGY]\na1: A SubClassOf B\na2: B SubClassOf C\na3: A SubClassOf D\n"
        "[BACKGROUND]\nb1: A(x)\n[NEGATIVE]\nn1: C(x)\nn2: D(x)\n");
    const auto r = searchDiagnoses(d);
    EXPECT_EQ(idSets(r.diagnoses), (Sets{{"a1", "a3"}, {"a2", "a3"}}));
    EXPECT_EQ(r.conflicts.size(), 2u);
}

TEST(Diagnoses, LimitFinishesLevelThenTruncates) {
    const auto ds = computeMinimalDiagnoses(support::runningDpi(), 2);
    EXPECT_EQ(idSets(ds), (Sets{{"a1"}, {"a2"}}));
}

TEST(Diagnoses, ProbabilitiesGolden) {
    // Member-only weights p/(1-p): 0.1/0.9 against 0.05/0.95.
    FaultProbabilities pr;
    pr.perAxiom = {{"a1", 0.1}, {"a2", 0.05}, {"a3", 0.01}};
    const auto ds = diagnosisProbabilities({{{"a1"}, {}}, {{"a2"}, {}}}, pr);
    const double expected = (0.1 * 0.95) / (0.1 * 0.95 + 0.05 * 0.9);
    EXPECT_NEAR(*ds[0].probability, expected, 1e-12);
    EXPECT_NEAR(*ds[0].probability, 0.679, 1e-3);
    EXPECT_NEAR(*ds[0].probability + *ds[1].probability, 1.0, 1e-12);
}

TEST(Diagnoses, ProbabilityErrors) {
    FaultProbabilities pr;
    try {
        diagnosisProbabilities({}, pr);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyDiagnosisList);
    }
    try {
        diagnosisProbabilities({{{"a1"}, {}}}, pr);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingPrior);
    }
}

TEST(Diagnoses, ComplexityPriors) {
    const std::vector<Axiom> o{parseAxiom("X SubClassOf Y", "a1"), parseAxiom("X SubClassOf not (p some Z)", "a2")};
    const auto pr = priorsFromComplexity(o);
    EXPECT_NEAR(pr.perAxiom.at("a1"), 0.01, 1e-12);
    EXPECT_NEAR(pr.perAxiom.at("a2"), 0.5 * 0.75 + 0.01, 1e-12);
    const auto flat = priorsFromComplexity(o, 0.0);
    EXPECT_NEAR(flat.perAxiom.at("a2"), 0.01, 1e-12);
}

TEST(Diagnoses, BruteForceLimit) {
    Dpi d;
    for (int i = 0; i < 21; ++i) d.ontology.push_back(subClassOf("a" + std::to_string(i), named("A"), named("B")));
    try {
        bruteForceDiagnoses(d);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SizeLimitExceeded);
    }
}

TEST(DiagnosesProperty, HsTreeMatchesSubsetEnumeration) {
    support::Rng rng(5);
    for (int i = 0; i < 300; ++i) {
        const Dpi d = support::randomViolatingDpi(rng);
        const auto expected = support::oracle::minimalDiagnoses(d);
        ASSERT_EQ(idSets(computeMinimalDiagnoses(d)), expected) << serializeDpi(d);
        EXPECT_EQ(idSets(bruteForceDiagnoses(d)), expected);
    }
}

TEST(DiagnosesProperty, EveryDiagnosisHitsEveryConflict) {
    support::Rng rng(6);
    for (int i = 0; i < 200; ++i) {
        const Dpi d = support::randomViolatingDpi(rng);
        const auto r = searchDiagnoses(d);
        for (const auto& diag : r.diagnoses) {
            EXPECT_TRUE(isDiagnosis(d, diag.axioms));
            for (const auto& c : r.conflicts) {
                const bool hit = std::any_of(c.axioms.begin(), c.axioms.end(), [&](const std::string& id) {
                    return std::find(diag.axioms.begin(), diag.axioms.end(), id) != diag.axioms.end();
                });
                EXPECT_TRUE(hit);
            }
        }
    }
}

TEST(DiagnosesProperty, ProbabilitiesSumToOne) {
    support::Rng rng(12);
    for (int i = 0; i < 100; ++i) {
        const Dpi d = support::randomViolatingDpi(rng);
        const auto pr = uniformPriors(d.ontology);
        DiagnosisSearch s;
        s.priors = &pr;
        const auto ds = searchDiagnoses(d, s).diagnoses;
        double sum = 0;
        for (const auto& x : ds) sum += *x.probability;
        EXPECT_NEAR(sum, 1.0, 1e-9);
        for (std::size_t k = 1; k < ds.size(); ++k) EXPECT_LE(ds[k - 1].axioms.size(), ds[k].axioms.size());
    }
}
