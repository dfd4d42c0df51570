#include "kbdx/diagnoses.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "kbdx/complexity.hpp"
#include "kbdx/conflicts.hpp"
#include "kbdx/errors.hpp"

namespace kbdx {

namespace {

using IdSet = std::vector<std::string>;  // always sorted

bool isSubset(const IdSet& small, const IdSet& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

bool disjoint(const IdSet& a, const IdSet& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            return false;
        }
    }
    return true;
}

void rank(std::vector<Diagnosis>& ds) {
    std::stable_sort(ds.begin(), ds.end(), [](const Diagnosis& a, const Diagnosis& b) {
        if (a.axioms.size() != b.axioms.size()) return a.axioms.size() < b.axioms.size();
        const double pa = a.probability.value_or(0.0);
        const double pb = b.probability.value_or(0.0);
        if (pa != pb) return pa > pb;
        return a.axioms < b.axioms;
    });
}

}  // namespace

std::vector<Axiom> complementOf(const std::vector<Axiom>& ontology, const std::vector<std::string>& removed) {
    std::vector<Axiom> out;
    out.reserve(ontology.size());
    for (const auto& a : ontology) {
        if (std::find(removed.begin(), removed.end(), a.id) == removed.end()) out.push_back(a);
    }
    return out;
}

bool isDiagnosis(const Dpi& dpi, const std::vector<std::string>& removed, const Reasoner& reasoner) {
    return !violates(complementOf(dpi.ontology, removed), dpi, reasoner);
}

DiagnosisResult searchDiagnoses(const Dpi& dpi, const DiagnosisSearch& search, const Reasoner& reasoner) {
    DiagnosisResult result;
    if (search.limit && *search.limit == 0) return result;
    if (violates({}, dpi, reasoner)) return result;  // no diagnosis can exist

    std::vector<IdSet> found;
    std::set<IdSet> seen{IdSet{}};
    std::vector<IdSet> level{IdSet{}};

    while (!level.empty()) {
        std::vector<IdSet> next;
        for (const IdSet& path : level) {
            ++result.nodes;
            if (std::any_of(found.begin(), found.end(), [&](const IdSet& d) { return isSubset(d, path); })) {
                continue;
            }
            const Conflict* label = nullptr;
            for (const auto& c : result.conflicts) {
                if (disjoint(c.axioms, path)) {
                    label = &c;
                    break;
                }
            }
            std::optional<Conflict> fresh;
            if (!label) {
                fresh = findMinimalConflict(complementOf(dpi.ontology, path), dpi, reasoner);
                if (!fresh) {
                    found.push_back(path);
                    continue;
                }
                result.conflicts.push_back(std::move(*fresh));
                label = &result.conflicts.back();
            }
            for (const auto& id : label->axioms) {
                IdSet child = path;
                child.insert(std::upper_bound(child.begin(), child.end(), id), id);
                if (seen.insert(child).second) next.push_back(std::move(child));
            }
        }
        if (search.limit && found.size() >= *search.limit) break;
        level = std::move(next);
    }

    for (auto& d : found) result.diagnoses.push_back({std::move(d), std::nullopt});
    if (search.priors && !result.diagnoses.empty()) {
        result.diagnoses = diagnosisProbabilities(result.diagnoses, *search.priors);
    }
    rank(result.diagnoses);
    if (search.limit && result.diagnoses.size() > *search.limit) {
        result.diagnoses.resize(*search.limit);
        // Renormalize over the retained leading set.
        if (search.priors) result.diagnoses = diagnosisProbabilities(result.diagnoses, *search.priors);
    }
    return result;
}

std::vector<Diagnosis> computeMinimalDiagnoses(const Dpi& dpi, std::optional<std::size_t> limit,
                                               const Reasoner& reasoner) {
    return searchDiagnoses(dpi, {limit, nullptr}, reasoner).diagnoses;
}

std::vector<Diagnosis> bruteForceDiagnoses(const Dpi& dpi, const Reasoner& reasoner) {
    const std::size_t n = dpi.ontology.size();
    if (n > kBruteForceLimit) {
        throw Error(ErrorCode::SizeLimitExceeded,
                    "brute-force diagnosis needs |O| <= " + std::to_string(kBruteForceLimit));
    }
    std::vector<std::uint32_t> masks(std::size_t{1} << n);
    for (std::uint32_t m = 0; m < masks.size(); ++m) masks[m] = m;
    std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
        return __builtin_popcount(a) < __builtin_popcount(b);
    });
    std::vector<std::uint32_t> minimal;
    for (std::uint32_t m : masks) {
        if (std::any_of(minimal.begin(), minimal.end(), [m](std::uint32_t d) { return (d & m) == d; })) continue;
        std::vector<Axiom> kept;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(m >> i & 1U)) kept.push_back(dpi.ontology[i]);
        }
        if (!violates(kept, dpi, reasoner)) minimal.push_back(m);
    }
    std::vector<Diagnosis> out;
    for (std::uint32_t m : minimal) {
        Diagnosis d;
        for (std::size_t i = 0; i < n; ++i) {
            if (m >> i & 1U) d.axioms.push_back(dpi.ontology[i].id);
        }
        std::sort(d.axioms.begin(), d.axioms.end());
        out.push_back(std::move(d));
    }
    rank(out);
    return out;
}

std::vector<Diagnosis> diagnosisProbabilities(const std::vector<Diagnosis>& diagnoses,
                                              const FaultProbabilities& priors) {
    if (diagnoses.empty()) throw Error(ErrorCode::EmptyDiagnosisList, "no diagnoses to rank");
    // log w(D) up to a shared constant: sum over members of log(p / (1 - p)).
    std::vector<double> logw;
    logw.reserve(diagnoses.size());
    for (const auto& d : diagnoses) {
        double s = 0.0;
        for (const auto& id : d.axioms) {
            auto it = priors.perAxiom.find(id);
            if (it == priors.perAxiom.end()) throw Error(ErrorCode::MissingPrior, "no prior for axiom " + id);
            s += std::log(it->second) - std::log1p(-it->second);
        }
        logw.push_back(s);
    }
    const double peak = *std::max_element(logw.begin(), logw.end());
    double total = 0.0;
    for (double& l : logw) {
        l = std::exp(l - peak);
        total += l;
    }
    std::vector<Diagnosis> out = diagnoses;
    for (std::size_t i = 0; i < out.size(); ++i) out[i].probability = logw[i] / total;
    return out;
}

FaultProbabilities uniformPriors(const std::vector<Axiom>& ontology, double p) {
    FaultProbabilities f;
    for (const auto& a : ontology) f.perAxiom[a.id] = p;
    return f;
}

FaultProbabilities priorsFromComplexity(const std::vector<Axiom>& ontology, double beta, double epsilon) {
    FaultProbabilities f;
    for (const auto& a : ontology) {
        const double p = beta * (1.0 - scoreAxiom(a)) + epsilon;
        f.perAxiom[a.id] = std::clamp(p, epsilon, 1.0 - epsilon);
    }
    return f;
}

}  // namespace kbdx
