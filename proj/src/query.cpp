#include "kbdx/query.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "kbdx/conflicts.hpp"
#include "kbdx/diagnoses.hpp"
#include "kbdx/errors.hpp"

namespace kbdx {

namespace {

constexpr double kTieTolerance = 1e-12;

struct BodyLess {
    bool operator()(const Axiom& a, const Axiom& b) const { return bodyLess(a, b); }
};

using Pool = std::vector<Axiom>;  // sorted by BodyLess, unique

Pool intersect(const Pool& a, const Pool& b) {
    Pool out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), BodyLess{});
    return out;
}

Pool subtract(const Pool& a, const Pool& b) {
    Pool out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), BodyLess{});
    return out;
}

std::vector<Axiom> theoryFor(const Dpi& dpi, const Diagnosis& d) {
    std::vector<Axiom> t = complementOf(dpi.ontology, d.axioms);
    t.insert(t.end(), dpi.positives.begin(), dpi.positives.end());
    t.insert(t.end(), dpi.background.begin(), dpi.background.end());
    return t;
}

bool entailsAll(const std::vector<Axiom>& theory, const std::vector<Axiom>& q, const Reasoner& reasoner) {
    const Verdict v = reasoner.check(theory, q, false);
    return std::all_of(v.entailed.begin(), v.entailed.end(), [](bool b) { return b; });
}

bool withQueryViolates(const std::vector<Axiom>& q, const Dpi& dpi, const Diagnosis& d, const Reasoner& reasoner) {
    std::vector<Axiom> t = complementOf(dpi.ontology, d.axioms);
    t.insert(t.end(), q.begin(), q.end());
    return violates(t, dpi, reasoner);
}

bool isSortedSubset(const std::vector<DiagnosisRef>& small, const std::vector<DiagnosisRef>& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

bool isValid(const std::vector<Axiom>& q, const Partition& p, const Dpi& dpi, const std::vector<Diagnosis>& leading,
             const Reasoner& reasoner) {
    if (!p.dPlus.empty() && !p.dMinus.empty()) return true;
    if (q.size() > kVerifyLimit) return false;
    return verifyQuery(q, dpi, leading, reasoner);
}

double weight(const std::vector<DiagnosisRef>& refs, const std::vector<Diagnosis>& leading) {
    double s = 0.0;
    const bool uniform = std::any_of(leading.begin(), leading.end(), [](const Diagnosis& d) { return !d.probability; });
    for (DiagnosisRef r : refs) {
        s += uniform ? 1.0 / static_cast<double>(leading.size()) : *leading[r].probability;
    }
    return s;
}

}  // namespace

std::string_view toString(Strategy s) noexcept {
    switch (s) {
        case Strategy::Entropy: return "entropy";
        case Strategy::SplitInHalf: return "split";
        case Strategy::Random: return "random";
    }
    return "entropy";
}

std::optional<Strategy> parseStrategy(std::string_view text) noexcept {
    if (text == "entropy") return Strategy::Entropy;
    if (text == "split" || text == "splitInHalf") return Strategy::SplitInHalf;
    if (text == "random") return Strategy::Random;
    return std::nullopt;
}

std::vector<Axiom> entailmentPool(const Dpi& dpi, const Diagnosis& diagnosis, int tier, const Reasoner& reasoner) {
    const std::vector<Axiom> theory = theoryFor(dpi, diagnosis);
    std::vector<Axiom> raw = reasoner.realize(theory);
    if (tier >= 2) {
        for (auto& a : reasoner.classify(theory)) {
            if (a.as<ax::SubClassOf>() || tier >= 3) raw.push_back(std::move(a));
        }
    }
    Pool pool;
    for (auto& a : raw) {
        if (containsStructurally(dpi.positives, a) || containsStructurally(dpi.negatives, a) ||
            containsStructurally(dpi.background, a)) {
            continue;
        }
        pool.push_back(std::move(a));
    }
    std::sort(pool.begin(), pool.end(), BodyLess{});
    pool.erase(std::unique(pool.begin(), pool.end(), [](const Axiom& a, const Axiom& b) { return structuralEquals(a, b); }),
               pool.end());
    return pool;
}

std::vector<Query> generateCandidates(const Dpi& dpi, const std::vector<Diagnosis>& leading,
                                      const GenerateOptions& options, const Reasoner& reasoner) {
    if (leading.size() < 2) throw Error(ErrorCode::TooFewDiagnoses, "need at least two leading diagnoses");
    const std::size_t n = leading.size();

    // Seed bits follow the id-sorted order of the leading diagnoses.
    std::vector<std::size_t> byIds(n);
    for (std::size_t i = 0; i < n; ++i) byIds[i] = i;
    std::sort(byIds.begin(), byIds.end(),
              [&](std::size_t a, std::size_t b) { return leading[a].axioms < leading[b].axioms; });

    std::vector<std::uint64_t> seeds;
    if (n <= options.exhaustiveSeedLimit) {
        for (std::uint64_t m = 1; m + 1 < (std::uint64_t{1} << n); ++m) seeds.push_back(m);
    } else {
        for (std::size_t b = 0; b < n && b < 64; ++b) seeds.push_back(std::uint64_t{1} << b);
    }

    std::vector<Query> out;
    const int lastTier = options.widenPool ? 3 : 1;
    for (int tier = 1; tier <= lastTier && out.empty(); ++tier) {
        std::vector<Pool> e(n);
        for (std::size_t i = 0; i < n; ++i) e[i] = entailmentPool(dpi, leading[i], tier, reasoner);
        Pool common = e[0];
        for (std::size_t i = 1; i < n; ++i) common = intersect(common, e[i]);

        std::vector<Pool> kept;
        for (std::uint64_t mask : seeds) {
            Pool q;
            bool first = true;
            for (std::size_t b = 0; b < n; ++b) {
                if (!(mask >> b & 1U)) continue;
                q = first ? e[byIds[b]] : intersect(q, e[byIds[b]]);
                first = false;
            }
            q = subtract(q, common);
            if (q.empty()) continue;
            if (std::any_of(kept.begin(), kept.end(), [&](const Pool& k) {
                    return k.size() == q.size() &&
                           std::equal(k.begin(), k.end(), q.begin(), [](const Axiom& a, const Axiom& b) {
                               return structuralEquals(a, b);
                           });
                })) {
                continue;
            }
            kept.push_back(q);
            Partition p = partitionDiagnoses(q, dpi, leading, reasoner);
            if (!isValid(q, p, dpi, leading, reasoner)) continue;
            Query query{std::move(q), std::move(p), 0.0};
            query.score = entropyScore(query.partition, leading);
            out.push_back(std::move(query));
        }
    }

    // One fresh id per distinct axiom, stable across candidates.
    std::vector<Axiom> distinct;
    for (const auto& q : out) {
        for (const auto& a : q.axioms) {
            auto it = std::lower_bound(distinct.begin(), distinct.end(), a, BodyLess{});
            if (it == distinct.end() || !structuralEquals(*it, a)) distinct.insert(it, a);
        }
    }
    std::set<std::string> taken = dpi.allIds();
    for (auto& a : distinct) {
        a.id = freshId("q", taken);
        taken.insert(a.id);
    }
    for (auto& q : out) {
        for (auto& a : q.axioms) a.id = std::lower_bound(distinct.begin(), distinct.end(), a, BodyLess{})->id;
    }
    return out;
}

Partition partitionDiagnoses(const std::vector<Axiom>& q, const Dpi& dpi, const std::vector<Diagnosis>& leading,
                             const Reasoner& reasoner) {
    if (q.empty()) throw Error(ErrorCode::EmptyQuery, "cannot partition with an empty query");
    Partition p;
    for (std::size_t i = 0; i < leading.size(); ++i) {
        if (entailsAll(theoryFor(dpi, leading[i]), q, reasoner)) {
            p.dPlus.push_back(i);
        } else if (withQueryViolates(q, dpi, leading[i], reasoner)) {
            p.dMinus.push_back(i);
        } else {
            p.dZero.push_back(i);
        }
    }
    return p;
}

bool verifyQuery(const std::vector<Axiom>& q, const Dpi& dpi, const std::vector<Diagnosis>& leading,
                 const Reasoner& reasoner) {
    if (q.size() > kVerifyLimit) {
        throw Error(ErrorCode::SizeLimitExceeded, "query verification needs at most " +
                                                      std::to_string(kVerifyLimit) + " axioms");
    }
    if (q.empty()) return false;
    for (std::uint32_t mask = 0; mask < (1U << q.size()); ++mask) {
        Dpi extended = dpi;
        for (std::size_t j = 0; j < q.size(); ++j) {
            (mask >> j & 1U ? extended.positives : extended.negatives).push_back(q[j]);
        }
        const bool eliminates = std::any_of(leading.begin(), leading.end(), [&](const Diagnosis& d) {
            return !isDiagnosis(extended, d.axioms, reasoner);
        });
        if (!eliminates) return false;
    }
    return true;
}

double entropyScore(const Partition& partition, const std::vector<Diagnosis>& leading) {
    return weight(partition.dZero, leading) +
           std::abs(weight(partition.dPlus, leading) - weight(partition.dMinus, leading));
}

double splitScore(const Partition& partition) {
    const auto plus = static_cast<double>(partition.dPlus.size());
    const auto minus = static_cast<double>(partition.dMinus.size());
    return std::abs(plus - minus) + static_cast<double>(partition.dZero.size());
}

std::size_t selectQuery(const std::vector<Query>& candidates, const std::vector<Diagnosis>& leading,
                        const StrategySpec& strategy) {
    if (candidates.empty()) throw Error(ErrorCode::EmptyCandidates, "no query candidates");
    if (strategy.kind == Strategy::Random) {
        std::mt19937_64 rng(strategy.seed);
        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
        return pick(rng);
    }
    auto score = [&](const Query& q) {
        return strategy.kind == Strategy::Entropy ? entropyScore(q.partition, leading) : splitScore(q.partition);
    };
    std::size_t best = 0;
    double bestScore = score(candidates[0]);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double s = score(candidates[i]);
        if (s < bestScore - kTieTolerance ||
            (std::abs(s - bestScore) <= kTieTolerance && candidates[i].axioms.size() < candidates[best].axioms.size())) {
            best = i;
            bestScore = s;
        }
    }
    return best;
}

std::vector<std::size_t> rankCandidates(const std::vector<Query>& candidates, const std::vector<Diagnosis>& leading,
                                        const StrategySpec& strategy) {
    if (candidates.empty()) return {};
    std::vector<std::size_t> order;
    if (strategy.kind == Strategy::Random) {
        const std::size_t first = selectQuery(candidates, leading, strategy);
        order.push_back(first);
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (i != first) rest.push_back(i);
        }
        std::mt19937_64 rng(strategy.seed + 1);
        std::shuffle(rest.begin(), rest.end(), rng);
        order.insert(order.end(), rest.begin(), rest.end());
        return order;
    }
    // Repeated selection keeps the tolerance-based tie rule of selectQuery.
    std::vector<Query> remaining = candidates;
    std::vector<std::size_t> index(candidates.size());
    for (std::size_t i = 0; i < index.size(); ++i) index[i] = i;
    while (!remaining.empty()) {
        const std::size_t pick = selectQuery(remaining, leading, strategy);
        order.push_back(index[pick]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
        index.erase(index.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return order;
}

Query minimizeQuery(const Query& query, const Dpi& dpi, const std::vector<Diagnosis>& leading,
                    const Reasoner& reasoner) {
    if (query.axioms.size() <= 1) return query;
    const Partition& target = query.partition;
    auto keeps = [&](const std::vector<Axiom>& s) {
        if (s.empty()) return false;
        const Partition p = partitionDiagnoses(s, dpi, leading, reasoner);
        return isSortedSubset(p.dPlus, target.dPlus) && isSortedSubset(target.dMinus, p.dMinus);
    };
    std::vector<Axiom> reduced = quickXplain(query.axioms, keeps);
    // Restore the original axiom order.
    std::vector<Axiom> ordered;
    for (const auto& a : query.axioms) {
        if (containsStructurally(reduced, a)) {
            ordered.push_back(a);
        }
    }
    Partition partition = partitionDiagnoses(ordered, dpi, leading, reasoner);
    Query out{std::move(ordered), std::move(partition), query.score};
    if (!(out.partition.dPlus == target.dPlus && out.partition.dMinus == target.dMinus)) {
        throw std::logic_error("query minimization changed the partition");
    }
    return out;
}

}  // namespace kbdx
