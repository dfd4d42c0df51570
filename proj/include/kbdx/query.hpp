// Query generation, partitioning, verification, selection and minimization
// over a list of leading diagnoses.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kbdx/model.hpp"
#include "kbdx/reasoner.hpp"

namespace kbdx {

inline constexpr std::size_t kExhaustiveSeedLimit = 9;
inline constexpr std::size_t kVerifyLimit = 12;

enum class Strategy { Entropy, SplitInHalf, Random };

std::string_view toString(Strategy s) noexcept;
std::optional<Strategy> parseStrategy(std::string_view text) noexcept;

struct StrategySpec {
    Strategy kind = Strategy::Entropy;
    std::uint64_t seed = 0;  // used by Random only
};

struct GenerateOptions {
    std::size_t exhaustiveSeedLimit = kExhaustiveSeedLimit;
    /// When no assertion-only candidate is valid, widen the pool with
    /// entailed subclass axioms, then with entailed pairwise disjointness.
    bool widenPool = true;
};

/// Entailments of (O \ D) ∪ P ∪ B usable as query axioms: realized class
/// assertions (tier 1), plus subclass (tier 2) and disjointness (tier 3)
/// entailments. Axioms present in P, N or B are dropped. Ids are empty.
std::vector<Axiom> entailmentPool(const Dpi& dpi, const Diagnosis& diagnosis, int tier,
                                  const Reasoner& reasoner = defaultReasoner());

/// Every returned candidate satisfies Def.-4 validity. Query axioms carry
/// fresh ids q1, q2, ... that do not clash with ids of the DPI.
/// Throws TooFewDiagnoses for fewer than two leading diagnoses.
std::vector<Query> generateCandidates(const Dpi& dpi, const std::vector<Diagnosis>& leading,
                                      const GenerateOptions& options = {},
                                      const Reasoner& reasoner = defaultReasoner());

/// dPlus: (O \ D_i) ∪ P ∪ B entails all of q. dMinus: (O \ D_i) ∪ B ∪ P ∪ q
/// violates. dZero: the rest. References are indices into `leading`.
Partition partitionDiagnoses(const std::vector<Axiom>& q, const Dpi& dpi, const std::vector<Diagnosis>& leading,
                             const Reasoner& reasoner = defaultReasoner());

/// Brute force over all 2^|q| total classifications. SizeLimitExceeded above 12.
bool verifyQuery(const std::vector<Axiom>& q, const Dpi& dpi, const std::vector<Diagnosis>& leading,
                 const Reasoner& reasoner = defaultReasoner());

/// Uniform weights are used when the diagnoses carry no probability.
double entropyScore(const Partition& partition, const std::vector<Diagnosis>& leading);
double splitScore(const Partition& partition);

/// Index of the chosen candidate. Throws EmptyCandidates.
std::size_t selectQuery(const std::vector<Query>& candidates, const std::vector<Diagnosis>& leading,
                        const StrategySpec& strategy);

/// Candidate indices from best to worst. Entropy and split order by score,
/// then fewer axioms, then lower index; random is a seeded shuffle whose
/// first element is what selectQuery returns.
std::vector<std::size_t> rankCandidates(const std::vector<Query>& candidates, const std::vector<Diagnosis>& leading,
                                        const StrategySpec& strategy);

/// Subset-minimal axiom set with the same (dPlus, dMinus).
Query minimizeQuery(const Query& query, const Dpi& dpi, const std::vector<Diagnosis>& leading,
                    const Reasoner& reasoner = defaultReasoner());

}  // namespace kbdx
