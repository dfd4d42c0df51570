#include "oracle.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace kbdx::support::oracle {

namespace {

// Atom reference: -1 Thing, -2 Nothing, otherwise index into the names.
constexpr int kThing = -1;
constexpr int kNothing = -2;

struct Universe {
    std::map<std::string, int> index;
    std::map<std::string, std::vector<int>> asserted;  // individual -> atoms
    std::vector<std::vector<int>> sub;                 // pairs (a, b)
    std::vector<std::vector<int>> disjoint;

    int atom(const ClassExpressionPtr& c) {
        if (c->is<ce::Top>()) return kThing;
        if (c->is<ce::Bottom>()) return kNothing;
        const auto* n = c->as<ce::NamedClass>();
        if (!n) throw std::invalid_argument("oracle: non-atomic class");
        auto [it, fresh] = index.try_emplace(n->name, static_cast<int>(index.size()));
        return it->second;
    }

    void add(const Axiom& a) {
        if (const auto* s = a.as<ax::SubClassOf>()) {
            sub.push_back({atom(s->sub), atom(s->sup)});
        } else if (const auto* d = a.as<ax::DisjointClasses>()) {
            std::vector<int> ops;
            for (const auto& o : d->operands) ops.push_back(atom(o));
            disjoint.push_back(ops);
        } else if (const auto* c = a.as<ax::ClassAssertion>()) {
            asserted[c->individual].push_back(atom(c->cls));
        } else {
            throw std::invalid_argument("oracle: unsupported axiom");
        }
    }

    static bool holds(unsigned set, int atom) {
        if (atom == kThing) return true;
        if (atom == kNothing) return false;
        return (set >> atom) & 1U;
    }

    bool valid(unsigned set) const {
        for (const auto& p : sub) {
            if (holds(set, p[0]) && !holds(set, p[1])) return false;
        }
        for (const auto& d : disjoint) {
            int hits = 0;
            for (int o : d) hits += holds(set, o) ? 1 : 0;
            if (hits > 1) return false;
        }
        return true;
    }

    std::vector<unsigned> validSets() const {
        if (index.size() > 16) throw std::invalid_argument("oracle: too many classes");
        std::vector<unsigned> out;
        for (unsigned s = 0; s < (1U << index.size()); ++s) {
            if (valid(s)) out.push_back(s);
        }
        return out;
    }

    static bool containsAll(unsigned set, const std::vector<int>& atoms) {
        return std::all_of(atoms.begin(), atoms.end(), [&](int a) { return holds(set, a); });
    }

    bool consistentWith(const std::vector<unsigned>& sets) const {
        if (sets.empty()) return false;
        for (const auto& [ind, atoms] : asserted) {
            if (std::none_of(sets.begin(), sets.end(), [&](unsigned s) { return containsAll(s, atoms); })) return false;
        }
        return true;
    }
};

Universe build(const std::vector<Axiom>& theory) {
    Universe u;
    for (const auto& a : theory) u.add(a);
    return u;
}

std::vector<Axiom> unionOf(std::vector<Axiom> a, const std::vector<Axiom>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

bool consistent(const std::vector<Axiom>& theory) {
    const Universe u = build(theory);
    return u.consistentWith(u.validSets());
}

bool coherent(const std::vector<Axiom>& theory) {
    const Universe u = build(theory);
    const auto sets = u.validSets();
    for (const auto& [name, i] : u.index) {
        if (std::none_of(sets.begin(), sets.end(), [&](unsigned s) { return Universe::holds(s, i); })) return false;
    }
    return true;
}

bool entails(const std::vector<Axiom>& theory, const Axiom& goal) {
    Universe u = build(theory);
    // Goal names join the universe as unconstrained classes.
    std::vector<int> atoms;
    std::string individual;
    if (const auto* s = goal.as<ax::SubClassOf>()) {
        atoms = {u.atom(s->sub), u.atom(s->sup)};
    } else if (const auto* d = goal.as<ax::DisjointClasses>()) {
        for (const auto& o : d->operands) atoms.push_back(u.atom(o));
    } else if (const auto* c = goal.as<ax::ClassAssertion>()) {
        atoms = {u.atom(c->cls)};
        individual = c->individual;
    } else {
        throw std::invalid_argument("oracle: unsupported goal");
    }
    const auto sets = u.validSets();
    if (!u.consistentWith(sets)) return true;
    if (goal.as<ax::SubClassOf>()) {
        return std::all_of(sets.begin(), sets.end(), [&](unsigned s) {
            return !Universe::holds(s, atoms[0]) || Universe::holds(s, atoms[1]);
        });
    }
    if (goal.as<ax::DisjointClasses>()) {
        return std::all_of(sets.begin(), sets.end(), [&](unsigned s) {
            int hits = 0;
            for (int a : atoms) hits += Universe::holds(s, a) ? 1 : 0;
            return hits <= 1;
        });
    }
    const auto it = u.asserted.find(individual);
    const std::vector<int> known = it == u.asserted.end() ? std::vector<int>{} : it->second;
    return std::all_of(sets.begin(), sets.end(), [&](unsigned s) {
        return !Universe::containsAll(s, known) || Universe::holds(s, atoms[0]);
    });
}

bool violates(const std::vector<Axiom>& candidate, const Dpi& dpi) {
    const auto theory = unionOf(unionOf(candidate, dpi.background), dpi.positives);
    if (!consistent(theory)) return true;
    if (dpi.requireCoherence && !coherent(theory)) return true;
    return std::any_of(dpi.negatives.begin(), dpi.negatives.end(), [&](const Axiom& n) { return entails(theory, n); });
}

std::vector<std::vector<std::string>> minimalDiagnoses(const Dpi& dpi) {
    const std::size_t n = dpi.ontology.size();
    if (n > 16) throw std::invalid_argument("oracle: ontology too large");
    std::vector<unsigned> diagnoses;
    for (unsigned m = 0; m < (1U << n); ++m) {
        std::vector<Axiom> kept;
        for (std::size_t i = 0; i < n; ++i) {
            if (!((m >> i) & 1U)) kept.push_back(dpi.ontology[i]);
        }
        if (!violates(kept, dpi)) diagnoses.push_back(m);
    }
    std::vector<std::vector<std::string>> out;
    for (unsigned d : diagnoses) {
        const bool minimal = std::none_of(diagnoses.begin(), diagnoses.end(),
                                          [&](unsigned e) { return e != d && (e & d) == e; });
        if (!minimal) continue;
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < n; ++i) {
            if ((d >> i) & 1U) ids.push_back(dpi.ontology[i].id);
        }
        std::sort(ids.begin(), ids.end());
        out.push_back(std::move(ids));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace kbdx::support::oracle
