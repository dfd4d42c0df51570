#include "kbdx/reasoner.hpp"

#include <algorithm>
#include <unordered_map>

#include "kbdx/parser.hpp"

namespace kbdx {

namespace {

constexpr int kThing = 0;
constexpr int kNothing = 1;

bool isFragmentAtom(const ClassExpressionPtr& c) {
    return c && (c->is<ce::NamedClass>() || c->is<ce::Top>() || c->is<ce::Bottom>());
}

bool allAtoms(const std::vector<ClassExpressionPtr>& ops) {
    return std::all_of(ops.begin(), ops.end(), isFragmentAtom);
}

[[noreturn]] void unsupported(const Axiom& a, const char* role) {
    throw Error(ErrorCode::UnsupportedAxiom,
                std::string(role) + " outside the reasoning fragment: " + serializeAxiom(a));
}

// Subclass graph over interned class names with individual type sets.
// Vertex 0 is Thing and vertex 1 is Nothing.
class Closure {
public:
    explicit Closure(const std::vector<Axiom>& axioms) {
        names_ = {"Thing", "Nothing"};
        edges_.resize(2);
        for (const auto& a : axioms) {
            if (const auto* s = a.as<ax::SubClassOf>()) {
                const int sub = intern(s->sub);
                const int sup = intern(s->sup);
                edges_[sub].push_back(sup);
            } else if (const auto* d = a.as<ax::DisjointClasses>()) {
                std::vector<int> ops;
                for (const auto& op : d->operands) ops.push_back(intern(op));
                disjoint_.push_back(std::move(ops));
            } else if (const auto* c = a.as<ax::ClassAssertion>()) {
                const int cls = intern(c->cls);
                auto [it, fresh] = individualIndex_.try_emplace(c->individual, individuals_.size());
                if (fresh) {
                    individuals_.push_back(c->individual);
                    asserted_.emplace_back();
                }
                asserted_[it->second].push_back(cls);
            }
        }
        reach_.resize(names_.size());
        for (int v = 0; v < static_cast<int>(names_.size()); ++v) reach_[v] = reachable(v);

        thingClash_ = clashes(superOf(kThing));
        types_.reserve(individuals_.size());
        consistent_ = !thingClash_;
        for (const auto& asserted : asserted_) {
            std::vector<char> t = superOf(kThing);
            for (int c : asserted) merge(t, reach_[c]);
            if (clashes(t)) consistent_ = false;
            types_.push_back(std::move(t));
        }
    }

    bool consistent() const { return consistent_; }

    bool coherent() const {
        for (int v = 2; v < static_cast<int>(names_.size()); ++v) {
            if (!satisfiable(v)) return false;
        }
        return true;
    }

    bool satisfiable(int v) const { return v != kNothing && !clashes(superOf(v)); }

    bool entails(const Axiom& goal) const {
        if (!consistent_) return true;
        if (const auto* c = goal.as<ax::ClassAssertion>()) {
            const int cls = lookup(c->cls);
            if (cls == kThing) return true;
            auto it = individualIndex_.find(c->individual);
            if (it == individualIndex_.end()) {
                // Unknown individual: only what holds for every element.
                return cls >= 0 && superOf(kThing)[cls];
            }
            return cls >= 0 && types_[it->second][cls];
        }
        if (const auto* s = goal.as<ax::SubClassOf>()) {
            const int sub = lookup(s->sub);
            const int sup = lookup(s->sup);
            if (sup == kThing || sub == kNothing || structurallyEqual(s->sub, s->sup)) return true;
            if (sub < 0) {
                // Unseen subclass behaves like a fresh class under Thing.
                if (clashes(superOf(kThing))) return true;
                return sup >= 0 && superOf(kThing)[sup];
            }
            if (!satisfiable(sub)) return true;
            return sup >= 0 && superOf(sub)[sup];
        }
        const auto& ops = goal.as<ax::DisjointClasses>()->operands;
        for (std::size_t i = 0; i < ops.size(); ++i) {
            for (std::size_t j = i + 1; j < ops.size(); ++j) {
                if (!jointlyUnsatisfiable(lookup(ops[i]), lookup(ops[j]))) return false;
            }
        }
        return true;
    }

    std::vector<Axiom> realize(const std::vector<Axiom>& input) const {
        std::vector<std::pair<std::string, std::string>> out;  // (individual, class)
        for (std::size_t i = 0; i < individuals_.size(); ++i) {
            for (int v = 2; v < static_cast<int>(names_.size()); ++v) {
                if (types_[i][v]) out.emplace_back(individuals_[i], names_[v]);
            }
        }
        std::sort(out.begin(), out.end());
        std::vector<Axiom> result;
        for (auto& [ind, cls] : out) {
            Axiom a = classAssertion({}, named(cls), ind);
            if (!containsStructurally(input, a)) result.push_back(std::move(a));
        }
        return result;
    }

    std::vector<Axiom> classify() const {
        std::vector<int> order;
        for (int v = 2; v < static_cast<int>(names_.size()); ++v) order.push_back(v);
        std::sort(order.begin(), order.end(), [this](int a, int b) { return names_[a] < names_[b]; });
        std::vector<Axiom> result;
        for (int a : order) {
            if (!satisfiable(a)) continue;
            const auto sup = superOf(a);
            for (int b : order) {
                if (b != a && sup[b]) result.push_back(subClassOf({}, named(names_[a]), named(names_[b])));
            }
        }
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (!satisfiable(order[i])) continue;
            for (std::size_t j = i + 1; j < order.size(); ++j) {
                if (!satisfiable(order[j])) continue;
                if (jointlyUnsatisfiable(order[i], order[j])) {
                    result.push_back(disjointClasses({}, {named(names_[order[i]]), named(names_[order[j]])}));
                }
            }
        }
        return result;
    }

private:
    int intern(const ClassExpressionPtr& c) {
        if (c->is<ce::Top>()) return kThing;
        if (c->is<ce::Bottom>()) return kNothing;
        const std::string& name = c->as<ce::NamedClass>()->name;
        auto [it, fresh] = classIndex_.try_emplace(name, static_cast<int>(names_.size()));
        if (fresh) {
            names_.push_back(name);
            edges_.emplace_back();
        }
        return it->second;
    }

    // -1 for a named class the theory never mentions.
    int lookup(const ClassExpressionPtr& c) const {
        if (c->is<ce::Top>()) return kThing;
        if (c->is<ce::Bottom>()) return kNothing;
        auto it = classIndex_.find(c->as<ce::NamedClass>()->name);
        return it == classIndex_.end() ? -1 : it->second;
    }

    std::vector<char> reachable(int from) const {
        std::vector<char> seen(names_.size(), 0);
        std::vector<int> stack{from};
        seen[from] = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int w : edges_[v]) {
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        return seen;
    }

    static void merge(std::vector<char>& into, const std::vector<char>& from) {
        for (std::size_t i = 0; i < into.size(); ++i) into[i] |= from[i];
    }

    std::vector<char> superOf(int v) const {
        std::vector<char> s = reach_[kThing];
        if (v >= 0) merge(s, reach_[v]);
        return s;
    }

    bool clashes(const std::vector<char>& types) const {
        if (types[kNothing]) return true;
        for (const auto& ops : disjoint_) {
            int hits = 0;
            for (int c : ops) {
                if (types[c] && ++hits >= 2) return true;
            }
        }
        return false;
    }

    bool jointlyUnsatisfiable(int a, int b) const {
        if (a == kNothing || b == kNothing) return true;
        std::vector<char> t = superOf(kThing);
        if (a >= 0) merge(t, reach_[a]);
        if (b >= 0) merge(t, reach_[b]);
        return clashes(t);
    }

    std::vector<std::string> names_;
    std::unordered_map<std::string, int> classIndex_;
    std::vector<std::vector<int>> edges_;
    std::vector<std::vector<int>> disjoint_;
    std::vector<std::string> individuals_;
    std::unordered_map<std::string, std::size_t> individualIndex_;
    std::vector<std::vector<int>> asserted_;
    std::vector<std::vector<char>> reach_;
    std::vector<std::vector<char>> types_;
    bool thingClash_ = false;
    bool consistent_ = true;
};

}  // namespace

Verdict Reasoner::check(const std::vector<Axiom>& axioms, const std::vector<Axiom>& goals,
                        bool needCoherence) const {
    Verdict v;
    v.consistent = isConsistent(axioms);
    v.coherent = !needCoherence || isCoherent(axioms);
    for (const auto& g : goals) v.entailed.push_back(entails(axioms, g));
    return v;
}

void Reasoner::requireSupported(const std::vector<Axiom>& axioms) const {
    for (const auto& a : axioms) {
        if (!supports(a)) unsupported(a, "axiom");
    }
}

bool FragmentReasoner::supports(const Axiom& a) const {
    if (const auto* s = a.as<ax::SubClassOf>()) return isFragmentAtom(s->sub) && isFragmentAtom(s->sup);
    if (const auto* d = a.as<ax::DisjointClasses>()) return allAtoms(d->operands);
    if (const auto* c = a.as<ax::ClassAssertion>()) return isFragmentAtom(c->cls);
    return false;
}

bool FragmentReasoner::supportsGoal(const Axiom& goal) const { return supports(goal); }

bool FragmentReasoner::isConsistent(const std::vector<Axiom>& axioms) const {
    requireSupported(axioms);
    return Closure(axioms).consistent();
}

bool FragmentReasoner::isCoherent(const std::vector<Axiom>& axioms) const {
    requireSupported(axioms);
    return Closure(axioms).coherent();
}

bool FragmentReasoner::entails(const std::vector<Axiom>& axioms, const Axiom& goal) const {
    requireSupported(axioms);
    if (!supportsGoal(goal)) unsupported(goal, "goal");
    return Closure(axioms).entails(goal);
}

std::vector<Axiom> FragmentReasoner::realize(const std::vector<Axiom>& axioms) const {
    requireSupported(axioms);
    Closure c(axioms);
    if (!c.consistent()) throw Error(ErrorCode::InconsistentInput, "cannot realize an inconsistent theory");
    return c.realize(axioms);
}

std::vector<Axiom> FragmentReasoner::classify(const std::vector<Axiom>& axioms) const {
    requireSupported(axioms);
    Closure c(axioms);
    if (!c.consistent()) throw Error(ErrorCode::InconsistentInput, "cannot classify an inconsistent theory");
    return c.classify();
}

Verdict FragmentReasoner::check(const std::vector<Axiom>& axioms, const std::vector<Axiom>& goals,
                                bool needCoherence) const {
    requireSupported(axioms);
    for (const auto& g : goals) {
        if (!supportsGoal(g)) unsupported(g, "goal");
    }
    Closure c(axioms);
    Verdict v;
    v.consistent = c.consistent();
    v.coherent = !needCoherence || c.coherent();
    v.entailed.reserve(goals.size());
    for (const auto& g : goals) v.entailed.push_back(c.entails(g));
    return v;
}

const Reasoner& defaultReasoner() {
    static const FragmentReasoner instance;
    return instance;
}

}  // namespace kbdx
