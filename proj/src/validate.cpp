#include "kbdx/validate.hpp"

#include <algorithm>
#include <set>

#include "kbdx/parser.hpp"

namespace kbdx {

std::string_view toString(ViolationKind kind) noexcept {
    switch (kind) {
        case ViolationKind::DuplicateId: return "duplicate axiom id";
        case ViolationKind::OntologyBackgroundOverlap: return "O ∩ B ≠ ∅";
        case ViolationKind::PositiveNegativeOverlap: return "P ∩ N ≠ ∅";
        case ViolationKind::BackgroundInconsistent: return "B ∪ P inconsistent";
        case ViolationKind::BackgroundIncoherent: return "B ∪ P incoherent";
        case ViolationKind::NegativeEntailed: return "B ∪ P entails a negative test case";
    }
    return "violation";
}

bool ValidationReport::has(ViolationKind kind) const noexcept {
    return std::any_of(violations.begin(), violations.end(), [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::summary() const {
    if (violations.empty()) return "valid";
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "; ";
        out += toString(v.kind);
        if (!v.detail.empty()) out += " (" + v.detail + ")";
    }
    return out;
}

namespace {

void overlap(const std::vector<Axiom>& a, const std::vector<Axiom>& b, ViolationKind kind,
             ValidationReport& report) {
    for (const auto& x : a) {
        for (const auto& y : b) {
            if (structuralEquals(x, y)) {
                report.violations.push_back(
                    {kind, x.id + " = " + y.id + ": " + serializeAxiom(x), {x.id, y.id}});
            }
        }
    }
}

}  // namespace

ValidationReport validateDpi(const Dpi& dpi, const Reasoner& reasoner) {
    for (const auto* part : {&dpi.ontology, &dpi.background, &dpi.positives, &dpi.negatives}) {
        reasoner.requireSupported(*part);
    }

    ValidationReport report;
    std::set<std::string> seen;
    for (const auto* part : {&dpi.ontology, &dpi.background, &dpi.positives, &dpi.negatives}) {
        for (const auto& a : *part) {
            if (!seen.insert(a.id).second) {
                report.violations.push_back({ViolationKind::DuplicateId, a.id, {a.id}});
            }
        }
    }
    overlap(dpi.ontology, dpi.background, ViolationKind::OntologyBackgroundOverlap, report);
    overlap(dpi.positives, dpi.negatives, ViolationKind::PositiveNegativeOverlap, report);

    std::vector<Axiom> base = dpi.background;
    base.insert(base.end(), dpi.positives.begin(), dpi.positives.end());
    const Verdict v = reasoner.check(base, dpi.negatives, dpi.requireCoherence);
    if (!v.consistent) {
        report.violations.push_back({ViolationKind::BackgroundInconsistent, {}, {}});
    } else {
        if (!v.coherent) report.violations.push_back({ViolationKind::BackgroundIncoherent, {}, {}});
        for (std::size_t i = 0; i < dpi.negatives.size(); ++i) {
            if (v.entailed[i]) {
                const Axiom& n = dpi.negatives[i];
                report.violations.push_back(
                    {ViolationKind::NegativeEntailed, n.id + ": " + serializeAxiom(n), {n.id}});
            }
        }
    }
    return report;
}

}  // namespace kbdx
