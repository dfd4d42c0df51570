// Reasoning contract plus a forward-chaining engine for the small fragment
// SubClassOf(atomic, atomic), DisjointClasses(atomic...), C(x) with C atomic.
// "Atomic" here means a named class, Thing or Nothing.

#pragma once

#include <string>
#include <vector>

#include "kbdx/errors.hpp"
#include "kbdx/model.hpp"

namespace kbdx {

/// One closure, several answers. Used on hot paths to avoid rebuilding the
/// closure per goal.
struct Verdict {
    bool consistent = true;
    bool coherent = true;           // only computed when requested
    std::vector<bool> entailed;     // parallel to the goal list
};

class Reasoner {
public:
    virtual ~Reasoner() = default;

    virtual bool supports(const Axiom& axiom) const = 0;
    virtual bool supportsGoal(const Axiom& goal) const = 0;

    virtual bool isConsistent(const std::vector<Axiom>& axioms) const = 0;
    virtual bool isCoherent(const std::vector<Axiom>& axioms) const = 0;
    virtual bool entails(const std::vector<Axiom>& axioms, const Axiom& goal) const = 0;

    /// Entailed atomic class assertions about the input's individuals and
    /// named classes that are not written in the input. Ids are left empty.
    virtual std::vector<Axiom> realize(const std::vector<Axiom>& axioms) const = 0;

    /// Entailed A SubClassOf B (A satisfiable, A != B) and pairwise
    /// DisjointClasses(A, B) over the input's named classes, including ones
    /// that are written in the input. Ids are left empty.
    virtual std::vector<Axiom> classify(const std::vector<Axiom>& axioms) const = 0;

    virtual Verdict check(const std::vector<Axiom>& axioms, const std::vector<Axiom>& goals,
                          bool needCoherence) const;

    /// Throws UnsupportedAxiom naming the first axiom outside the fragment.
    void requireSupported(const std::vector<Axiom>& axioms) const;
};

class FragmentReasoner final : public Reasoner {
public:
    bool supports(const Axiom& axiom) const override;
    bool supportsGoal(const Axiom& goal) const override;
    bool isConsistent(const std::vector<Axiom>& axioms) const override;
    bool isCoherent(const std::vector<Axiom>& axioms) const override;
    bool entails(const std::vector<Axiom>& axioms, const Axiom& goal) const override;
    std::vector<Axiom> realize(const std::vector<Axiom>& axioms) const override;
    std::vector<Axiom> classify(const std::vector<Axiom>& axioms) const override;
    Verdict check(const std::vector<Axiom>& axioms, const std::vector<Axiom>& goals,
                  bool needCoherence) const override;
};

/// Process-wide FragmentReasoner instance (stateless, safe to share).
const Reasoner& defaultReasoner();

}  // namespace kbdx
