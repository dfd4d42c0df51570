// Shared domain types: class-expression and axiom trees, the diagnosis
// problem instance, conflicts, diagnoses, queries and answers.
//
// Expression trees are immutable and shared through shared_ptr<const ...>,
// so copying an Axiom or a DPI is cheap and values may be handed across
// threads freely. Equality is structural; axiom ids are labels only.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace kbdx {

struct ClassExpression;
using ClassExpressionPtr = std::shared_ptr<const ClassExpression>;

enum class CardinalityKind : std::uint8_t { Min, Max, Exact };

namespace ce {

struct NamedClass {
    std::string name;
};
struct Top {};
struct Bottom {};
struct Enumeration {
    std::vector<std::string> individuals;  // non-empty
};
struct Intersection {
    ClassExpressionPtr left, right;
};
struct Union {
    ClassExpressionPtr left, right;
};
struct Complement {
    ClassExpressionPtr operand;
};
struct ObjectSome {
    std::string property;
    ClassExpressionPtr filler;
};
struct ObjectOnly {
    std::string property;
    ClassExpressionPtr filler;
};
struct ObjectCardinality {
    CardinalityKind kind;
    std::uint32_t bound;
    std::string property;
    ClassExpressionPtr filler;  // null when unqualified
};
struct DataSome {
    std::string property;
    std::string range;
};
struct DataOnly {
    std::string property;
    std::string range;
};
struct DataCardinality {
    CardinalityKind kind;
    std::uint32_t bound;
    std::string property;
    std::optional<std::string> range;
};
struct ObjectHasValue {
    std::string property;
    std::string individual;
};
struct ObjectHasSelf {
    std::string property;
};
struct DataHasValue {
    std::string property;
    std::string literal;
};

}  // namespace ce

struct ClassExpression {
    using Node = std::variant<ce::NamedClass, ce::Top, ce::Bottom, ce::Enumeration, ce::Intersection,
                              ce::Union, ce::Complement, ce::ObjectSome, ce::ObjectOnly,
                              ce::ObjectCardinality, ce::DataSome, ce::DataOnly,
                              ce::DataCardinality, ce::ObjectHasValue, ce::ObjectHasSelf,
                              ce::DataHasValue>;
    Node node;

    template <class T>
    bool is() const noexcept {
        return std::holds_alternative<T>(node);
    }
    template <class T>
    const T* as() const noexcept {
        return std::get_if<T>(&node);
    }

    /// Named class, Thing, Nothing or an enumeration of individuals.
    bool isAtomic() const noexcept;
};

bool operator==(const ClassExpression& a, const ClassExpression& b);

// Factories. All return shared immutable nodes.
ClassExpressionPtr named(std::string name);
ClassExpressionPtr top();
ClassExpressionPtr bottom();
ClassExpressionPtr oneOf(std::vector<std::string> individuals);
ClassExpressionPtr intersection(ClassExpressionPtr left, ClassExpressionPtr right);
ClassExpressionPtr unionOf(ClassExpressionPtr left, ClassExpressionPtr right);
ClassExpressionPtr complement(ClassExpressionPtr operand);
ClassExpressionPtr objectSome(std::string property, ClassExpressionPtr filler);
ClassExpressionPtr objectOnly(std::string property, ClassExpressionPtr filler);
ClassExpressionPtr objectCardinality(CardinalityKind kind, std::uint32_t bound, std::string property,
                                     ClassExpressionPtr filler = nullptr);
ClassExpressionPtr dataSome(std::string property, std::string range);
ClassExpressionPtr dataOnly(std::string property, std::string range);
ClassExpressionPtr dataCardinality(CardinalityKind kind, std::uint32_t bound, std::string property,
                                   std::optional<std::string> range = std::nullopt);
ClassExpressionPtr hasValue(std::string property, std::string individual);
ClassExpressionPtr hasSelf(std::string property);
ClassExpressionPtr dataHasValue(std::string property, std::string literal);

bool structurallyEqual(const ClassExpressionPtr& a, const ClassExpressionPtr& b);

namespace ax {

struct SubClassOf {
    ClassExpressionPtr sub, sup;
};
struct EquivalentClasses {
    std::vector<ClassExpressionPtr> operands;  // >= 2, order as written
};
struct DisjointClasses {
    std::vector<ClassExpressionPtr> operands;
};
struct DisjointUnion {
    std::vector<ClassExpressionPtr> operands;
};
struct ClassAssertion {
    ClassExpressionPtr cls;
    std::string individual;
};

}  // namespace ax

using AxiomBody = std::variant<ax::SubClassOf, ax::EquivalentClasses, ax::DisjointClasses,
                               ax::DisjointUnion, ax::ClassAssertion>;

struct Axiom {
    std::string id;
    AxiomBody body;

    template <class T>
    const T* as() const noexcept {
        return std::get_if<T>(&body);
    }
};

Axiom subClassOf(std::string id, ClassExpressionPtr sub, ClassExpressionPtr sup);
Axiom classAssertion(std::string id, ClassExpressionPtr cls, std::string individual);
Axiom disjointClasses(std::string id, std::vector<ClassExpressionPtr> operands);
Axiom equivalentClasses(std::string id, std::vector<ClassExpressionPtr> operands);
Axiom disjointUnion(std::string id, std::vector<ClassExpressionPtr> operands);

/// Structural equality of bodies; ids are ignored.
bool structuralEquals(const Axiom& a, const Axiom& b);

/// Total order on axiom bodies consistent with structuralEquals, for use in
/// ordered containers and deterministic sorting.
bool bodyLess(const Axiom& a, const Axiom& b);

bool containsStructurally(const std::vector<Axiom>& set, const Axiom& axiom);

/// Diagnosis problem instance <O, B, P, N>.
struct Dpi {
    std::vector<Axiom> ontology;
    std::vector<Axiom> background;
    std::vector<Axiom> positives;
    std::vector<Axiom> negatives;
    bool requireCoherence = false;

    const Axiom* find(const std::string& id) const;
    std::set<std::string> allIds() const;
};

/// Set of ontology axiom ids, kept sorted lexicographically.
struct Conflict {
    std::vector<std::string> axioms;
};

struct Diagnosis {
    std::vector<std::string> axioms;  // sorted lexicographically
    std::optional<double> probability;

    bool sameAxioms(const Diagnosis& other) const { return axioms == other.axioms; }
};

/// Index-based reference into a list of leading diagnoses.
using DiagnosisRef = std::size_t;

struct Partition {
    std::vector<DiagnosisRef> dPlus, dMinus, dZero;

    bool operator==(const Partition&) const = default;
};

struct Query {
    std::vector<Axiom> axioms;
    Partition partition;
    double score = 0.0;
};

enum class Classification : std::uint8_t { Positive, Negative, Unknown };

struct Answer {
    std::map<std::string, Classification> classifications;
};

/// Per-axiom fault probabilities over the ontology, each strictly in (0,1).
struct FaultProbabilities {
    std::map<std::string, double> perAxiom;
};

/// Returns `prefixN` for the smallest N >= 1 not contained in `taken`.
std::string freshId(const std::string& prefix, const std::set<std::string>& taken,
                    std::size_t start = 1);

}  // namespace kbdx
