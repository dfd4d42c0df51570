#include "kbdx/complexity.hpp"

#include <limits>
#include <numeric>

#include "kbdx/errors.hpp"
#include "kbdx/parser.hpp"

namespace kbdx {

namespace {

using Wide = __int128;

std::optional<Fraction> reduce(Wide num, Wide den) {
    if (den == 0) return std::nullopt;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    Wide a = num < 0 ? -num : num;
    Wide b = den;
    while (b != 0) {
        Wide t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        num /= a;
        den /= a;
    }
    constexpr Wide lo = std::numeric_limits<std::int64_t>::min();
    constexpr Wide hi = std::numeric_limits<std::int64_t>::max();
    if (num < lo || num > hi || den > hi) return std::nullopt;
    return Fraction{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

// Double value and, while it stays representable, the exact rational.
struct Score {
    double value;
    std::optional<Fraction> exact;
};

Score constant(std::int64_t num, std::int64_t den) {
    return {static_cast<double>(num) / static_cast<double>(den), Fraction::make(num, den)};
}

Score times(const Score& a, const Score& b) {
    Score s{a.value * b.value, std::nullopt};
    if (a.exact && b.exact) s.exact = Fraction::mul(*a.exact, *b.exact);
    return s;
}

Score plus(const Score& a, const Score& b) {
    Score s{a.value + b.value, std::nullopt};
    if (a.exact && b.exact) s.exact = Fraction::add(*a.exact, *b.exact);
    return s;
}

Score onePlus(const Score& a) { return plus(constant(1, 1), a); }

class Scorer {
public:
    explicit Scorer(bool trace) : tracing_(trace) {}

    Score score(const ClassExpressionPtr& e, int depth) {
        const std::size_t slot = open(e, depth);
        int rule = 0;
        Score s = evaluate(*e, depth, rule);
        close(slot, rule, s.value);
        return s;
    }

    std::vector<RuleStep> takeTrace() { return std::move(trace_); }

private:
    Score evaluate(const ClassExpression& e, int depth, int& rule) {
        if (const auto* n = e.as<ce::Intersection>()) {
            return binary(*n->left, *n->right, n->left, n->right, depth, rule, /*mixedWith=*/Kind::Union, 1);
        }
        if (const auto* n = e.as<ce::Union>()) {
            return binary(*n->left, *n->right, n->left, n->right, depth, rule, Kind::Intersection, 4);
        }
        if (const auto* n = e.as<ce::ObjectSome>()) return restriction(n->filler, depth, rule);
        if (const auto* n = e.as<ce::ObjectOnly>()) return restriction(n->filler, depth, rule);
        if (const auto* n = e.as<ce::ObjectCardinality>()) {
            if (n->filler) return restriction(n->filler, depth, rule);
            rule = 9;
            return constant(2, 1);
        }
        if (e.is<ce::DataSome>() || e.is<ce::DataOnly>() || e.is<ce::DataCardinality>()) {
            rule = 9;
            return constant(2, 1);
        }
        if (e.is<ce::ObjectHasValue>() || e.is<ce::ObjectHasSelf>() || e.is<ce::DataHasValue>()) {
            rule = 10;
            return constant(2, 1);
        }
        if (e.isAtomic()) {
            rule = 11;
            return constant(1, 1);
        }
        const auto& operand = e.as<ce::Complement>()->operand;
        if (operand->isAtomic()) {
            rule = 12;
            // The atomic operand is recorded for a complete trace.
            score(operand, depth + 1);
            return constant(5, 4);
        }
        rule = 13;
        return times(constant(2, 1), score(operand, depth + 1));
    }

    enum class Kind { Union, Intersection };

    static bool isKind(const ClassExpression& e, Kind k) {
        return k == Kind::Union ? e.is<ce::Union>() : e.is<ce::Intersection>();
    }

    // Rules 1-3 (conjunction) or 4-6 (disjunction); `base` is 1 or 4.
    Score binary(const ClassExpression& l, const ClassExpression& r, const ClassExpressionPtr& lp,
                 const ClassExpressionPtr& rp, int depth, int& rule, Kind mixed, int base) {
        if (l.isAtomic() && isKind(r, mixed)) {
            rule = base;
            Score a = score(lp, depth + 1);
            return times(a, onePlus(score(rp, depth + 1)));
        }
        if (r.isAtomic() && isKind(l, mixed)) {
            rule = base;
            Score c = score(lp, depth + 1);
            return times(score(rp, depth + 1), onePlus(c));
        }
        if (isKind(l, mixed) && isKind(r, mixed)) {
            rule = base + 1;
            Score a = onePlus(score(lp, depth + 1));
            return times(a, onePlus(score(rp, depth + 1)));
        }
        rule = base + 2;
        Score a = score(lp, depth + 1);
        return times(a, score(rp, depth + 1));
    }

    Score restriction(const ClassExpressionPtr& filler, int depth, int& rule) {
        if (filler->isAtomic()) {
            rule = 7;
            return onePlus(score(filler, depth + 1));
        }
        rule = 8;
        return plus(constant(2, 1), score(filler, depth + 1));
    }

    std::size_t open(const ClassExpressionPtr& e, int depth) {
        if (!tracing_) return 0;
        trace_.push_back({0, depth, serializeClassExpression(e), 0.0});
        return trace_.size() - 1;
    }

    void close(std::size_t slot, int rule, double value) {
        if (!tracing_) return;
        trace_[slot].rule = rule;
        trace_[slot].value = value;
    }

    bool tracing_;
    std::vector<RuleStep> trace_;
};

std::vector<ClassExpressionPtr> topLevelOperands(const Axiom& axiom, bool strict) {
    if (const auto* s = axiom.as<ax::SubClassOf>()) return {s->sub, s->sup};
    if (const auto* e = axiom.as<ax::EquivalentClasses>()) return e->operands;
    if (const auto* d = axiom.as<ax::DisjointClasses>()) return d->operands;
    if (const auto* u = axiom.as<ax::DisjointUnion>()) return u->operands;
    if (strict) {
        throw Error(ErrorCode::UnsupportedAxiomKind,
                    "class assertions are not scored in strict mode: " + serializeAxiom(axiom));
    }
    return {axiom.as<ax::ClassAssertion>()->cls};
}

}  // namespace

std::optional<Fraction> Fraction::make(std::int64_t num, std::int64_t den) { return reduce(num, den); }

std::optional<Fraction> Fraction::add(const Fraction& a, const Fraction& b) {
    return reduce(static_cast<Wide>(a.num) * b.den + static_cast<Wide>(b.num) * a.den,
                  static_cast<Wide>(a.den) * b.den);
}

std::optional<Fraction> Fraction::mul(const Fraction& a, const Fraction& b) {
    return reduce(static_cast<Wide>(a.num) * b.num, static_cast<Wide>(a.den) * b.den);
}

std::optional<Fraction> Fraction::reciprocal(const Fraction& a) { return reduce(a.den, a.num); }

std::string Fraction::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

double scoreClassExpression(const ClassExpressionPtr& expression) {
    return Scorer(false).score(expression, 0).value;
}

ExpressionScore explainClassExpression(const ClassExpressionPtr& expression) {
    Scorer scorer(true);
    Score s = scorer.score(expression, 0);
    return {s.value, s.exact, scorer.takeTrace()};
}

double scoreAxiom(const Axiom& axiom, bool strict) {
    double value = 1.0;
    for (const auto& op : topLevelOperands(axiom, strict)) value /= scoreClassExpression(op);
    return value;
}

AxiomScore explainAxiom(const Axiom& axiom, bool strict) {
    AxiomScore result;
    result.exact = Fraction{1, 1};
    for (const auto& op : topLevelOperands(axiom, strict)) {
        ExpressionScore s = explainClassExpression(op);
        result.value /= s.value;
        if (result.exact && s.exact) {
            auto inv = Fraction::reciprocal(*s.exact);
            result.exact = inv ? Fraction::mul(*result.exact, *inv) : std::nullopt;
        } else {
            result.exact.reset();
        }
        result.operands.push_back(std::move(s));
    }
    return result;
}

double scoreQuery(const std::vector<Axiom>& query, bool strict) {
    if (query.empty()) throw Error(ErrorCode::EmptyQuery, "cannot score an empty query");
    double value = 1.0;
    for (const auto& a : query) value *= scoreAxiom(a, strict);
    return value;
}

}  // namespace kbdx
