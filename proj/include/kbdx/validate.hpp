#pragma once

#include <string>
#include <vector>

#include "kbdx/errors.hpp"
#include "kbdx/model.hpp"
#include "kbdx/reasoner.hpp"

namespace kbdx {

enum class ViolationKind {
    DuplicateId,
    OntologyBackgroundOverlap,  // O and B share a structurally equal axiom
    PositiveNegativeOverlap,    // P and N share a structurally equal axiom
    BackgroundInconsistent,     // B with P is inconsistent
    BackgroundIncoherent,       // B with P has an unsatisfiable class (coherence required)
    NegativeEntailed,           // B with P already entails some n in N
};

std::string_view toString(ViolationKind kind) noexcept;

struct Violation {
    ViolationKind kind;
    std::string detail;
    std::vector<std::string> axiomIds;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool valid() const noexcept { return violations.empty(); }
    bool has(ViolationKind kind) const noexcept;
    std::string summary() const;
};

/// Necessary conditions for a diagnosis to exist. Throws UnsupportedAxiom if
/// any axiom of the DPI (ontology included) lies outside the fragment.
ValidationReport validateDpi(const Dpi& dpi, const Reasoner& reasoner = defaultReasoner());

class InvalidDpiError : public Error {
public:
    explicit InvalidDpiError(ValidationReport report)
        : Error(ErrorCode::InvalidDpi, "invalid DPI: " + report.summary()), report_(std::move(report)) {}

    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

}  // namespace kbdx
