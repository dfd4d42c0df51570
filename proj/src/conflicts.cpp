#include "kbdx/conflicts.hpp"

#include <algorithm>

#include "kbdx/errors.hpp"

namespace kbdx {

bool violates(const std::vector<Axiom>& candidate, const Dpi& dpi, const Reasoner& reasoner) {
    std::vector<Axiom> theory;
    theory.reserve(candidate.size() + dpi.background.size() + dpi.positives.size());
    theory.insert(theory.end(), candidate.begin(), candidate.end());
    theory.insert(theory.end(), dpi.background.begin(), dpi.background.end());
    theory.insert(theory.end(), dpi.positives.begin(), dpi.positives.end());
    const Verdict v = reasoner.check(theory, dpi.negatives, dpi.requireCoherence);
    if (!v.consistent || !v.coherent) return true;
    return std::find(v.entailed.begin(), v.entailed.end(), true) != v.entailed.end();
}

std::optional<Conflict> findMinimalConflict(const std::vector<Axiom>& scope, const Dpi& dpi,
                                            const Reasoner& reasoner) {
    std::vector<Axiom> ordered = scope;
    std::sort(ordered.begin(), ordered.end(), [](const Axiom& a, const Axiom& b) { return a.id < b.id; });
    if (!violates(ordered, dpi, reasoner)) return std::nullopt;
    if (violates({}, dpi, reasoner)) {
        throw Error(ErrorCode::InvalidDpi, "background and positive test cases already violate");
    }
    auto pred = [&](const std::vector<Axiom>& s) { return violates(s, dpi, reasoner); };
    Conflict c;
    for (const auto& a : quickXplain(ordered, pred)) c.axioms.push_back(a.id);
    std::sort(c.axioms.begin(), c.axioms.end());
    return c;
}

}  // namespace kbdx
