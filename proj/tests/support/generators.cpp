#include "generators.hpp"

#include <algorithm>

#include "kbdx/reasoner.hpp"
#include "kbdx/validate.hpp"
#include "oracle.hpp"

namespace kbdx::support {

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

namespace {

const std::vector<std::string> kClasses{"A", "B", "Koala", "Person_2", "x", "Y9"};
const std::vector<std::string> kProperties{"p", "hasChild", "r_1"};
const std::vector<std::string> kIndividuals{"w", "v", "ind3"};
const std::vector<std::string> kDatatypes{"integer", "string", "boolean"};
const std::vector<std::string> kLiterals{"", "42", "two words", "quote\"inside", "back\\slash", "line\nbreak"};

template <class T>
const T& any(Rng& rng, const std::vector<T>& v) {
    return v[pick(rng, 0, v.size() - 1)];
}

CardinalityKind anyKind(Rng& rng) {
    return static_cast<CardinalityKind>(pick(rng, 0, 2));
}

ClassExpressionPtr leaf(Rng& rng) {
    switch (pick(rng, 0, 9)) {
        case 0: return top();
        case 1: return bottom();
        case 2: {
            std::vector<std::string> ids;
            for (std::size_t i = 0, n = pick(rng, 1, 3); i < n; ++i) ids.push_back(any(rng, kIndividuals));
            return oneOf(ids);
        }
        case 3: return dataSome(any(rng, kProperties), any(rng, kDatatypes));
        case 4: return dataOnly(any(rng, kProperties), any(rng, kDatatypes));
        // unqualified, it would read back as the object form
        case 5:
            return dataCardinality(anyKind(rng), static_cast<std::uint32_t>(pick(rng, 0, 5)), any(rng, kProperties),
                                   any(rng, kDatatypes));
        case 6: return hasValue(any(rng, kProperties), any(rng, kIndividuals));
        case 7: return hasSelf(any(rng, kProperties));
        case 8: return dataHasValue(any(rng, kProperties), any(rng, kLiterals));
        default: return named(any(rng, kClasses));
    }
}

}  // namespace

ClassExpressionPtr randomExpression(Rng& rng, int depth) {
    if (depth <= 0 || coin(rng, 0.25)) return leaf(rng);
    switch (pick(rng, 0, 5)) {
        case 0: return intersection(randomExpression(rng, depth - 1), randomExpression(rng, depth - 1));
        case 1: return unionOf(randomExpression(rng, depth - 1), randomExpression(rng, depth - 1));
        case 2: return complement(randomExpression(rng, depth - 1));
        case 3: return objectSome(any(rng, kProperties), randomExpression(rng, depth - 1));
        case 4: return objectOnly(any(rng, kProperties), randomExpression(rng, depth - 1));
        default: {
            ClassExpressionPtr filler;
            if (coin(rng, 0.7)) filler = randomExpression(rng, depth - 1);
            return objectCardinality(anyKind(rng), static_cast<std::uint32_t>(pick(rng, 0, 7)),
                                     any(rng, kProperties), filler);
        }
    }
}

Axiom randomAxiom(Rng& rng, int depth) {
    auto operands = [&] {
        std::vector<ClassExpressionPtr> ops;
        for (std::size_t i = 0, n = pick(rng, 2, 4); i < n; ++i) ops.push_back(randomExpression(rng, depth));
        return ops;
    };
    switch (pick(rng, 0, 4)) {
        case 0: return equivalentClasses("", operands());
        case 1: return disjointClasses("", operands());
        case 2: return disjointUnion("", operands());
        case 3: return classAssertion("", randomExpression(rng, depth), any(rng, kIndividuals));
        default: return subClassOf("", randomExpression(rng, depth), randomExpression(rng, depth));
    }
}

std::vector<Axiom> randomFragmentTheory(Rng& rng, const FragmentShape& shape) {
    const std::size_t n = pick(rng, 2, shape.maxClasses);
    auto atom = [&]() -> ClassExpressionPtr {
        const std::size_t r = pick(rng, 0, n + 1);
        if (r == n) return coin(rng, 0.5) ? top() : named("C1");
        if (r == n + 1) return coin(rng, 0.2) ? bottom() : named("C" + std::to_string(n));
        return named("C" + std::to_string(r + 1));
    };
    std::vector<Axiom> out;
    for (std::size_t i = 0, m = pick(rng, 0, shape.maxOntology); i < m; ++i) {
        const std::size_t kind = pick(rng, 0, 9);
        if (kind < 5) {
            out.push_back(subClassOf("", atom(), atom()));
        } else if (kind < 7 && shape.disjointness) {
            std::vector<ClassExpressionPtr> ops{atom(), atom()};
            if (coin(rng, 0.3)) ops.push_back(atom());
            out.push_back(disjointClasses("", ops));
        } else {
            out.push_back(classAssertion("", atom(), "i" + std::to_string(pick(rng, 1, shape.maxIndividuals))));
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i].id = "t" + std::to_string(i + 1);
    return out;
}

Dpi randomViolatingDpi(Rng& rng, const FragmentShape& shape) {
    const Reasoner& reasoner = defaultReasoner();
    for (;;) {
        const std::size_t n = pick(rng, 3, shape.maxClasses);
        auto cls = [](std::size_t i) { return named("C" + std::to_string(i + 1)); };

        std::vector<Axiom> intended;
        const std::size_t faults = pick(rng, 1, shape.maxFaults);
        const std::size_t budget = shape.maxOntology - std::min(shape.maxOntology - 1, faults);
        for (std::size_t i = 1; i < n && intended.size() < budget; ++i) {
            const std::size_t parent = coin(rng, 0.6) ? i - 1 : pick(rng, 0, i - 1);
            intended.push_back(subClassOf("", cls(i), cls(parent)));
        }

        Dpi dpi;
        dpi.requireCoherence = coin(rng, 0.2);
        for (std::size_t i = 0, m = pick(rng, 1, shape.maxIndividuals); i < m; ++i) {
            dpi.background.push_back(
                classAssertion("b" + std::to_string(i + 1), cls(pick(rng, n / 2, n - 1)), "i" + std::to_string(i + 1)));
        }
        std::vector<Axiom> truth = intended;
        truth.insert(truth.end(), dpi.background.begin(), dpi.background.end());

        std::vector<Axiom> faulty = intended;
        for (std::size_t f = 0; f < faults && faulty.size() < shape.maxOntology; ++f) {
            const std::size_t x = pick(rng, 0, n - 1);
            const std::size_t y = pick(rng, 0, n - 1);
            if (x == y) continue;
            Axiom extra = shape.disjointness && coin(rng, 0.3) ? disjointClasses("", {cls(x), cls(y)})
                                                                : subClassOf("", cls(x), cls(y));
            if (reasoner.entails(truth, extra) || containsStructurally(faulty, extra)) continue;
            if (coin(rng, 0.4) && !faulty.empty() && extra.as<ax::SubClassOf>()) {
                faulty[pick(rng, 0, faulty.size() - 1)] = extra;  // replace rather than add
            } else {
                faulty.push_back(extra);
            }
        }
        std::shuffle(faulty.begin(), faulty.end(), rng);
        for (std::size_t i = 0; i < faulty.size(); ++i) faulty[i].id = "a" + std::to_string(i + 1);
        dpi.ontology = faulty;

        std::vector<Axiom> faultyTheory = faulty;
        faultyTheory.insert(faultyTheory.end(), dpi.background.begin(), dpi.background.end());
        if (reasoner.isConsistent(faultyTheory)) {
            std::vector<Axiom> wrong;
            for (auto& a : reasoner.realize(faultyTheory)) {
                if (!reasoner.entails(truth, a)) wrong.push_back(a);
            }
            for (auto& a : reasoner.classify(faultyTheory)) {
                if (!reasoner.entails(truth, a) && coin(rng, 0.3)) wrong.push_back(a);
            }
            std::shuffle(wrong.begin(), wrong.end(), rng);
            for (std::size_t i = 0; i < std::min<std::size_t>(wrong.size(), pick(rng, 1, 2)); ++i) {
                wrong[i].id = "n" + std::to_string(i + 1);
                dpi.negatives.push_back(wrong[i]);
            }
        }
        if (coin(rng, 0.4)) {
            auto right = reasoner.realize(truth);
            std::erase_if(right, [&](const Axiom& a) { return containsStructurally(dpi.negatives, a); });
            if (!right.empty()) {
                Axiom p = any(rng, right);
                p.id = "p1";
                dpi.positives.push_back(p);
            }
        }
        if (!validateDpi(dpi, reasoner).valid()) continue;
        if (!oracle::violates(dpi.ontology, dpi)) continue;
        return dpi;
    }
}

}  // namespace kbdx::support
