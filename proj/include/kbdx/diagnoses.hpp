#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kbdx/model.hpp"
#include "kbdx/reasoner.hpp"

namespace kbdx {

inline constexpr double kDefaultPrior = 0.01;
inline constexpr std::size_t kBruteForceLimit = 20;

struct DiagnosisSearch {
    std::optional<std::size_t> limit;          // unlimited when empty
    const FaultProbabilities* priors = nullptr;  // attaches probabilities when set
};

struct DiagnosisResult {
    std::vector<Diagnosis> diagnoses;
    std::vector<Conflict> conflicts;  // every conflict computed along the way
    std::size_t nodes = 0;
};

/// Breadth-first hitting-set tree. Finishes the level in which `limit` is
/// reached, sorts by (size, probability desc, ids) and truncates.
DiagnosisResult searchDiagnoses(const Dpi& dpi, const DiagnosisSearch& search = {},
                                const Reasoner& reasoner = defaultReasoner());

std::vector<Diagnosis> computeMinimalDiagnoses(const Dpi& dpi, std::optional<std::size_t> limit = std::nullopt,
                                               const Reasoner& reasoner = defaultReasoner());

/// Exhaustive subset enumeration; SizeLimitExceeded above 20 ontology axioms.
std::vector<Diagnosis> bruteForceDiagnoses(const Dpi& dpi, const Reasoner& reasoner = defaultReasoner());

/// Normalized probabilities of the given diagnoses. Axioms outside every
/// diagnosis contribute the same factor to each weight and cancel, so only
/// members need priors.
std::vector<Diagnosis> diagnosisProbabilities(const std::vector<Diagnosis>& diagnoses,
                                              const FaultProbabilities& priors);

FaultProbabilities uniformPriors(const std::vector<Axiom>& ontology, double p = kDefaultPrior);

/// p(ax) = clamp(beta * (1 - M_ax(ax)) + epsilon, epsilon, 1 - epsilon).
FaultProbabilities priorsFromComplexity(const std::vector<Axiom>& ontology, double beta = 0.5,
                                        double epsilon = 0.01);

/// Axioms of O minus the diagnosis, in ontology order.
std::vector<Axiom> complementOf(const std::vector<Axiom>& ontology, const std::vector<std::string>& removed);

/// (O \ D) ∪ B ∪ P does not violate.
bool isDiagnosis(const Dpi& dpi, const std::vector<std::string>& removed,
                 const Reasoner& reasoner = defaultReasoner());

}  // namespace kbdx
