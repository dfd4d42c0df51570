// Syntactic difficulty scores: M_ce in [1, inf) for class expressions,
// M_ax in (0, 1] for axioms and M = product of M_ax for a query.
//
// Rules are tried top to bottom; the first that applies wins.
//   1  A and C, C and A (C a union)         M(A) * (1 + M(C))
//   2  C1 and C2 (both unions)              (1 + M(C1)) * (1 + M(C2))
//   3  X1 and X2                            M(X1) * M(X2)
//   4  A or C, C or A (C an intersection)   M(A) * (1 + M(C))
//   5  C1 or C2 (both intersections)        (1 + M(C1)) * (1 + M(C2))
//   6  X1 or X2                             M(X1) * M(X2)
//   7  object restriction, atomic filler    1 + M(A)
//   8  object restriction, complex filler   2 + M(C)
//   9  data restriction, unqualified card.  2
//   10 value / Self / data value            2
//   11 atomic                               1
//   12 not A                                1.25
//   13 not C                                2 * M(C)

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kbdx/model.hpp"

namespace kbdx {

/// Exact rational with int64 parts, reduced. Arithmetic that would overflow
/// yields nullopt through the checked helpers.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;

    static std::optional<Fraction> make(std::int64_t num, std::int64_t den);
    static std::optional<Fraction> add(const Fraction& a, const Fraction& b);
    static std::optional<Fraction> mul(const Fraction& a, const Fraction& b);
    static std::optional<Fraction> reciprocal(const Fraction& a);
};

struct RuleStep {
    int rule = 0;          // 1..13
    int depth = 0;         // nesting depth of the scored node
    std::string expression;
    double value = 0.0;    // M_ce of that node
};

struct ExpressionScore {
    double value = 1.0;
    std::optional<Fraction> exact;
    std::vector<RuleStep> trace;  // pre-order: a node precedes its children
};

struct AxiomScore {
    double value = 1.0;
    std::optional<Fraction> exact;
    std::vector<ExpressionScore> operands;  // top-level class expressions, in order
};

double scoreClassExpression(const ClassExpressionPtr& expression);
ExpressionScore explainClassExpression(const ClassExpressionPtr& expression);

/// Class assertions are scored as 1 / M_ce(C) unless `strict` is set, in
/// which case they raise UnsupportedAxiomKind.
double scoreAxiom(const Axiom& axiom, bool strict = false);
AxiomScore explainAxiom(const Axiom& axiom, bool strict = false);

/// Throws EmptyQuery for an empty set.
double scoreQuery(const std::vector<Axiom>& query, bool strict = false);

}  // namespace kbdx
