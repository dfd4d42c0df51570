#include "kbdx/model.hpp"

#include <algorithm>
#include <type_traits>

#include "kbdx/errors.hpp"

namespace kbdx {

namespace {

template <class T>
int cmp(const T& a, const T& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

int compareCe(const ClassExpression* a, const ClassExpression* b);

int compareCe(const ClassExpressionPtr& a, const ClassExpressionPtr& b) {
    if (!a || !b) return cmp(static_cast<bool>(a), static_cast<bool>(b));
    return compareCe(a.get(), b.get());
}

int compareOptional(const std::optional<std::string>& a, const std::optional<std::string>& b) {
    if (a.has_value() != b.has_value()) return a.has_value() ? 1 : -1;
    return a ? cmp(*a, *b) : 0;
}

int compareCe(const ClassExpression* a, const ClassExpression* b) {
    if (a == b) return 0;
    if (a->node.index() != b->node.index()) return cmp(a->node.index(), b->node.index());
    return std::visit(
        [b](const auto& lhs) -> int {
            using T = std::decay_t<decltype(lhs)>;
            const T& rhs = std::get<T>(b->node);
            if constexpr (std::is_same_v<T, ce::NamedClass>) {
                return cmp(lhs.name, rhs.name);
            } else if constexpr (std::is_same_v<T, ce::Top> || std::is_same_v<T, ce::Bottom>) {
                return 0;
            } else if constexpr (std::is_same_v<T, ce::Enumeration>) {
                return cmp(lhs.individuals, rhs.individuals);
            } else if constexpr (std::is_same_v<T, ce::Intersection> || std::is_same_v<T, ce::Union>) {
                if (int c = compareCe(lhs.left, rhs.left)) return c;
                return compareCe(lhs.right, rhs.right);
            } else if constexpr (std::is_same_v<T, ce::Complement>) {
                return compareCe(lhs.operand, rhs.operand);
            } else if constexpr (std::is_same_v<T, ce::ObjectSome> || std::is_same_v<T, ce::ObjectOnly>) {
                if (int c = cmp(lhs.property, rhs.property)) return c;
                return compareCe(lhs.filler, rhs.filler);
            } else if constexpr (std::is_same_v<T, ce::ObjectCardinality>) {
                if (int c = cmp(lhs.kind, rhs.kind)) return c;
                if (int c = cmp(lhs.bound, rhs.bound)) return c;
                if (int c = cmp(lhs.property, rhs.property)) return c;
                return compareCe(lhs.filler, rhs.filler);
            } else if constexpr (std::is_same_v<T, ce::DataSome> || std::is_same_v<T, ce::DataOnly>) {
                if (int c = cmp(lhs.property, rhs.property)) return c;
                return cmp(lhs.range, rhs.range);
            } else if constexpr (std::is_same_v<T, ce::DataCardinality>) {
                if (int c = cmp(lhs.kind, rhs.kind)) return c;
                if (int c = cmp(lhs.bound, rhs.bound)) return c;
                if (int c = cmp(lhs.property, rhs.property)) return c;
                return compareOptional(lhs.range, rhs.range);
            } else if constexpr (std::is_same_v<T, ce::ObjectHasValue>) {
                if (int c = cmp(lhs.property, rhs.property)) return c;
                return cmp(lhs.individual, rhs.individual);
            } else if constexpr (std::is_same_v<T, ce::ObjectHasSelf>) {
                return cmp(lhs.property, rhs.property);
            } else {
                static_assert(std::is_same_v<T, ce::DataHasValue>);
                if (int c = cmp(lhs.property, rhs.property)) return c;
                return cmp(lhs.literal, rhs.literal);
            }
        },
        a->node);
}

int compareOperands(const std::vector<ClassExpressionPtr>& a, const std::vector<ClassExpressionPtr>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = compareCe(a[i], b[i])) return c;
    }
    return cmp(a.size(), b.size());
}

int compareBody(const AxiomBody& a, const AxiomBody& b) {
    if (a.index() != b.index()) return cmp(a.index(), b.index());
    return std::visit(
        [&b](const auto& lhs) -> int {
            using T = std::decay_t<decltype(lhs)>;
            const T& rhs = std::get<T>(b);
            if constexpr (std::is_same_v<T, ax::SubClassOf>) {
                if (int c = compareCe(lhs.sub, rhs.sub)) return c;
                return compareCe(lhs.sup, rhs.sup);
            } else if constexpr (std::is_same_v<T, ax::ClassAssertion>) {
                if (int c = compareCe(lhs.cls, rhs.cls)) return c;
                return cmp(lhs.individual, rhs.individual);
            } else {
                return compareOperands(lhs.operands, rhs.operands);
            }
        },
        a);
}

template <class T>
ClassExpressionPtr make(T node) {
    return std::make_shared<const ClassExpression>(ClassExpression{std::move(node)});
}

}  // namespace

std::string_view toString(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Parse: return "ParseError";
        case ErrorCode::DuplicateAxiomId: return "DuplicateAxiomId";
        case ErrorCode::SectionUnknown: return "SectionUnknown";
        case ErrorCode::UnsupportedAxiom: return "UnsupportedAxiom";
        case ErrorCode::UnsupportedAxiomKind: return "UnsupportedAxiomKind";
        case ErrorCode::InconsistentInput: return "InconsistentInput";
        case ErrorCode::SizeLimitExceeded: return "SizeLimitExceeded";
        case ErrorCode::EmptyDiagnosisList: return "EmptyDiagnosisList";
        case ErrorCode::MissingPrior: return "MissingPrior";
        case ErrorCode::EmptyQuery: return "EmptyQuery";
        case ErrorCode::TooFewDiagnoses: return "TooFewDiagnoses";
        case ErrorCode::EmptyCandidates: return "EmptyCandidates";
        case ErrorCode::InvalidDpi: return "InvalidDPI";
        case ErrorCode::AnswerMismatch: return "AnswerMismatch";
        case ErrorCode::SessionNotActive: return "SessionNotActive";
        case ErrorCode::ModeMismatch: return "ModeMismatch";
        case ErrorCode::DuplicateTestCase: return "DuplicateTestCase";
        case ErrorCode::ContradictsAcquired: return "ContradictsAcquired";
        case ErrorCode::UnknownDiagnosis: return "UnknownDiagnosis";
        case ErrorCode::ScriptExhausted: return "ScriptExhausted";
        case ErrorCode::GenerationFailure: return "GenerationFailure";
    }
    return "Error";
}

ParseError::ParseError(std::size_t line, std::size_t column, std::string detail,
                       std::vector<std::string> expected)
    : Error(ErrorCode::Parse,
            std::to_string(line) + ":" + std::to_string(column) + ": " + detail),
      line_(line),
      column_(column),
      detail_(std::move(detail)),
      expected_(std::move(expected)) {}

bool ClassExpression::isAtomic() const noexcept {
    return is<ce::NamedClass>() || is<ce::Top>() || is<ce::Bottom>() || is<ce::Enumeration>();
}

bool operator==(const ClassExpression& a, const ClassExpression& b) { return compareCe(&a, &b) == 0; }

bool structurallyEqual(const ClassExpressionPtr& a, const ClassExpressionPtr& b) {
    return compareCe(a, b) == 0;
}

ClassExpressionPtr named(std::string name) { return make(ce::NamedClass{std::move(name)}); }

ClassExpressionPtr top() {
    static const ClassExpressionPtr thing = make(ce::Top{});
    return thing;
}

ClassExpressionPtr bottom() {
    static const ClassExpressionPtr nothing = make(ce::Bottom{});
    return nothing;
}

ClassExpressionPtr oneOf(std::vector<std::string> individuals) {
    return make(ce::Enumeration{std::move(individuals)});
}
ClassExpressionPtr intersection(ClassExpressionPtr left, ClassExpressionPtr right) {
    return make(ce::Intersection{std::move(left), std::move(right)});
}
ClassExpressionPtr unionOf(ClassExpressionPtr left, ClassExpressionPtr right) {
    return make(ce::Union{std::move(left), std::move(right)});
}
ClassExpressionPtr complement(ClassExpressionPtr operand) { return make(ce::Complement{std::move(operand)}); }
ClassExpressionPtr objectSome(std::string property, ClassExpressionPtr filler) {
    return make(ce::ObjectSome{std::move(property), std::move(filler)});
}
ClassExpressionPtr objectOnly(std::string property, ClassExpressionPtr filler) {
    return make(ce::ObjectOnly{std::move(property), std::move(filler)});
}
ClassExpressionPtr objectCardinality(CardinalityKind kind, std::uint32_t bound, std::string property,
                                     ClassExpressionPtr filler) {
    return make(ce::ObjectCardinality{kind, bound, std::move(property), std::move(filler)});
}
ClassExpressionPtr dataSome(std::string property, std::string range) {
    return make(ce::DataSome{std::move(property), std::move(range)});
}
ClassExpressionPtr dataOnly(std::string property, std::string range) {
    return make(ce::DataOnly{std::move(property), std::move(range)});
}
ClassExpressionPtr dataCardinality(CardinalityKind kind, std::uint32_t bound, std::string property,
                                   std::optional<std::string> range) {
    return make(ce::DataCardinality{kind, bound, std::move(property), std::move(range)});
}
ClassExpressionPtr hasValue(std::string property, std::string individual) {
    return make(ce::ObjectHasValue{std::move(property), std::move(individual)});
}
ClassExpressionPtr hasSelf(std::string property) { return make(ce::ObjectHasSelf{std::move(property)}); }
ClassExpressionPtr dataHasValue(std::string property, std::string literal) {
    return make(ce::DataHasValue{std::move(property), std::move(literal)});
}

Axiom subClassOf(std::string id, ClassExpressionPtr sub, ClassExpressionPtr sup) {
    return Axiom{std::move(id), ax::SubClassOf{std::move(sub), std::move(sup)}};
}
Axiom classAssertion(std::string id, ClassExpressionPtr cls, std::string individual) {
    return Axiom{std::move(id), ax::ClassAssertion{std::move(cls), std::move(individual)}};
}
Axiom disjointClasses(std::string id, std::vector<ClassExpressionPtr> operands) {
    return Axiom{std::move(id), ax::DisjointClasses{std::move(operands)}};
}
Axiom equivalentClasses(std::string id, std::vector<ClassExpressionPtr> operands) {
    return Axiom{std::move(id), ax::EquivalentClasses{std::move(operands)}};
}
Axiom disjointUnion(std::string id, std::vector<ClassExpressionPtr> operands) {
    return Axiom{std::move(id), ax::DisjointUnion{std::move(operands)}};
}

bool structuralEquals(const Axiom& a, const Axiom& b) { return compareBody(a.body, b.body) == 0; }

bool bodyLess(const Axiom& a, const Axiom& b) { return compareBody(a.body, b.body) < 0; }

bool containsStructurally(const std::vector<Axiom>& set, const Axiom& axiom) {
    return std::any_of(set.begin(), set.end(), [&](const Axiom& a) { return structuralEquals(a, axiom); });
}

const Axiom* Dpi::find(const std::string& id) const {
    for (const auto* part : {&ontology, &background, &positives, &negatives}) {
        for (const auto& a : *part) {
            if (a.id == id) return &a;
        }
    }
    return nullptr;
}

std::set<std::string> Dpi::allIds() const {
    std::set<std::string> ids;
    for (const auto* part : {&ontology, &background, &positives, &negatives}) {
        for (const auto& a : *part) ids.insert(a.id);
    }
    return ids;
}

std::string freshId(const std::string& prefix, const std::set<std::string>& taken, std::size_t start) {
    for (std::size_t n = std::max<std::size_t>(start, 1);; ++n) {
        std::string candidate = prefix + std::to_string(n);
        if (!taken.count(candidate)) return candidate;
    }
}

}  // namespace kbdx
