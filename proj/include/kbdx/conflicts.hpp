#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kbdx/model.hpp"
#include "kbdx/reasoner.hpp"

namespace kbdx {

/// candidate ∪ B ∪ P is inconsistent, incoherent (when required) or entails
/// some negative test case.
bool violates(const std::vector<Axiom>& candidate, const Dpi& dpi, const Reasoner& reasoner = defaultReasoner());

/// Divide-and-conquer reduction of `items` to a subset-minimal set on which
/// the monotone predicate holds. Requires pred(items) and !pred({}).
/// Splits at the midpoint; the first half keeps the earlier items.
template <class T, class Pred>
std::vector<T> quickXplain(const std::vector<T>& items, Pred&& pred) {
    struct Rec {
        Pred& pred;

        std::vector<T> run(const std::vector<T>& background, bool hasDelta, const std::vector<T>& scope) {
            if (hasDelta && pred(background)) return {};
            if (scope.size() == 1) return scope;
            const std::size_t mid = scope.size() / 2;
            std::vector<T> first(scope.begin(), scope.begin() + static_cast<std::ptrdiff_t>(mid));
            std::vector<T> second(scope.begin() + static_cast<std::ptrdiff_t>(mid), scope.end());

            std::vector<T> withFirst = background;
            withFirst.insert(withFirst.end(), first.begin(), first.end());
            std::vector<T> delta2 = run(withFirst, !first.empty(), second);

            std::vector<T> withDelta2 = background;
            withDelta2.insert(withDelta2.end(), delta2.begin(), delta2.end());
            std::vector<T> delta1 = run(withDelta2, !delta2.empty(), first);

            delta1.insert(delta1.end(), delta2.begin(), delta2.end());
            return delta1;
        }
    };
    if (items.empty()) return {};
    Rec rec{pred};
    return rec.run({}, false, items);
}

/// Minimal conflict within `scope` (searched in ascending id order), or none
/// when the scope does not violate. Throws InvalidDpi if B ∪ P alone violates.
std::optional<Conflict> findMinimalConflict(const std::vector<Axiom>& scope, const Dpi& dpi,
                                            const Reasoner& reasoner = defaultReasoner());

}  // namespace kbdx
