#include <gtest/gtest.h>

#include "generators.hpp"
#include "kbdx/errors.hpp"
#include "kbdx/parser.hpp"

using namespace kbdx;

namespace {

ParseError parseFailure(std::string_view text) {
    try {
        parseAxiom(text);
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "no error for: " << text;
    return ParseError(0, 0, "");
}

}  // namespace

TEST(Parser, SubClassOfAtoms) {
    const Axiom a = parseAxiom("A SubClassOf B", "a1");
    EXPECT_EQ(a.id, "a1");
    EXPECT_TRUE(structuralEquals(a, subClassOf("", named("A"), named("B"))));
}

TEST(Parser, ClassAssertion) {
    EXPECT_TRUE(structuralEquals(parseAxiom("B(w)"), classAssertion("", named("B"), "w")));
    EXPECT_TRUE(structuralEquals(parseAxiom("(p some A)(w)"), classAssertion("", objectSome("p", named("A")), "w")));
}

TEST(Parser, PrecedenceAndBindsTighterThanOr) {
    const auto e = parseClassExpression("A or B and C");
    EXPECT_TRUE(structurallyEqual(e, unionOf(named("A"), intersection(named("B"), named("C")))));
}

TEST(Parser, LeftAssociative) {
    EXPECT_TRUE(structurallyEqual(parseClassExpression("A and B and C"),
                                  intersection(intersection(named("A"), named("B")), named("C"))));
}

TEST(Parser, NotBindsToPrimary) {
    EXPECT_TRUE(structurallyEqual(parseClassExpression("not A and B"),
                                  intersection(complement(named("A")), named("B"))));
    EXPECT_TRUE(structurallyEqual(parseClassExpression("not (p some Z)"), complement(objectSome("p", named("Z")))));
}

TEST(Parser, Restrictions) {
    EXPECT_TRUE(structurallyEqual(parseClassExpression("p only (not Z)"), objectOnly("p", complement(named("Z")))));
    EXPECT_TRUE(structurallyEqual(parseClassExpression("p min 2 A"),
                                  objectCardinality(CardinalityKind::Min, 2, "p", named("A"))));
    EXPECT_TRUE(structurallyEqual(parseClassExpression("p exactly 3"),
                                  objectCardinality(CardinalityKind::Exact, 3, "p")));
    EXPECT_TRUE(structurallyEqual(parseClassExpression("age some integer"), dataSome("age", "integer")));
    EXPECT_TRUE(structurallyEqual(parseClassExpression("age max 1 integer"),
                                  dataCardinality(CardinalityKind::Max, 1, "age", "integer")));
    EXPECT_TRUE(structurallyEqual(parseClassExpression("p value w"), hasValue("p", "w")));
    EXPECT_TRUE(structurallyEqual(parseClassExpression("name value \"Bob\""), dataHasValue("name", "Bob")));
    EXPECT_TRUE(structurallyEqual(parseClassExpression("loves Self"), hasSelf("loves")));
    EXPECT_TRUE(structurallyEqual(parseClassExpression("{a, b}"), oneOf({"a", "b"})));
    EXPECT_TRUE(structurallyEqual(parseClassExpression("Thing and Nothing"), intersection(top(), bottom())));
}

TEST(Parser, NaryAxioms) {
    EXPECT_TRUE(structuralEquals(parseAxiom("DisjointClasses: A, B"), disjointClasses("", {named("A"), named("B")})));
    EXPECT_TRUE(structuralEquals(parseAxiom("EquivalentClasses: A, B and C, D"),
                                 equivalentClasses("", {named("A"), intersection(named("B"), named("C")), named("D")})));
    EXPECT_TRUE(structuralEquals(parseAxiom("DisjointUnion: A, B, C"),
                                 disjointUnion("", {named("A"), named("B"), named("C")})));
}

TEST(Parser, SerializeCanonical) {
    EXPECT_EQ(serializeAxiom(parseAxiom("DisjointClasses: A,B")), "DisjointClasses: A, B");
    EXPECT_EQ(serializeAxiom(parseAxiom("X SubClassOf not (p some Z)")), "X SubClassOf not (p some Z)");
    EXPECT_EQ(serializeAxiom(parseAxiom("C(w)")), "C(w)");
}

TEST(ParserErrors, PositionPointsAtOffendingToken) {
    const ParseError e = parseFailure("A SubClassOf and");
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 14u);
    EXPECT_FALSE(e.expected().empty());
}

TEST(ParserErrors, EndOfInputPointsAtLastCharacter) {
    const ParseError e = parseFailure("A SubClassOf");
    EXPECT_EQ(e.column(), 12u);
}

TEST(ParserErrors, Rejections) {
    parseFailure("");
    parseFailure("A SubClassOf (B");
    parseFailure("DisjointClasses: A");
    parseFailure("p min B");
    parseFailure("p min 99999999999 B");
    parseFailure("and SubClassOf B");
    parseFailure("A SubClassOf B extra");
    parseFailure("name value \"open");
    parseFailure("A SubClassOf B $");
}

TEST(DpiFile, RunningExample) {
    const Dpi d = parseDpiFile(
        "@coherence on\n[ONTOLOGY]\na1: A SubClassOf B\nB SubClassOf C # comment\n"
        "[BACKGROUND]\nA(v)\n[POSITIVE]\nB(v)\n[NEGATIVE]\nR(w)\n");
    EXPECT_TRUE(d.requireCoherence);
    ASSERT_EQ(d.ontology.size(), 2u);
    EXPECT_EQ(d.ontology[0].id, "a1");
    EXPECT_EQ(d.ontology[1].id, "a2");
    EXPECT_EQ(d.background[0].id, "a3");
    EXPECT_EQ(d.positives[0].id, "a4");
    EXPECT_EQ(d.negatives[0].id, "a5");
}

TEST(DpiFile, AutoIdsSkipExplicitOnes) {
    const Dpi d = parseDpiFile("[ONTOLOGY]\nA SubClassOf B\na1: B SubClassOf C\n");
    EXPECT_EQ(d.ontology[0].id, "a2");
    EXPECT_EQ(d.ontology[1].id, "a1");
}

TEST(DpiFile, Errors) {
    EXPECT_THROW(parseDpiFile("A SubClassOf B\n"), ParseError);
    try {
        parseDpiFile("[ONTOLOGY]\nx: A SubClassOf B\nx: B SubClassOf C\n");
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DuplicateAxiomId);
    }
    try {
        parseDpiFile("[AXIOMS]\n");
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SectionUnknown);
    }
    try {
        parseDpiFile("[ONTOLOGY]\n\na1: A SubClassOf or\n");
        ADD_FAILURE();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.column(), 18u);
    }
}

TEST(DpiFile, SerializeRoundTrip) {
    const Dpi d = parseDpiFile("[ONTOLOGY]\na1: A SubClassOf B\n[BACKGROUND]\nb1: A(w)\n[NEGATIVE]\nn1: B(w)\n");
    const Dpi again = parseDpiFile(serializeDpi(d));
    ASSERT_EQ(again.ontology.size(), 1u);
    EXPECT_EQ(again.ontology[0].id, "a1");
    EXPECT_EQ(again.negatives[0].id, "n1");
    EXPECT_TRUE(structuralEquals(again.background[0], d.background[0]));
}

TEST(ParserProperty, RoundTripRandomAxioms) {
    support::Rng rng(2024);
    for (int i = 0; i < 2000; ++i) {
        const Axiom a = support::randomAxiom(rng, 6);
        const std::string text = serializeAxiom(a);
        Axiom back;
        ASSERT_NO_THROW(back = parseAxiom(text)) << text;
        ASSERT_TRUE(structuralEquals(a, back)) << text;
        EXPECT_EQ(serializeAxiom(back), text);
    }
}

TEST(ParserProperty, NoCrashOnMutatedText) {
    support::Rng rng(99);
    const std::string alphabet = "AB()p {},:\"not and or some min 3";
    for (int i = 0; i < 2000; ++i) {
        std::string text = serializeAxiom(support::randomAxiom(rng, 3));
        const std::size_t edits = support::pick(rng, 1, 3);
        for (std::size_t e = 0; e < edits && !text.empty(); ++e) {
            text[support::pick(rng, 0, text.size() - 1)] = alphabet[support::pick(rng, 0, alphabet.size() - 1)];
        }
        try {
            parseAxiom(text);
        } catch (const ParseError& err) {
            EXPECT_GE(err.column(), 1u);
            EXPECT_LE(err.column(), std::max<std::size_t>(text.size(), 1));
        }
    }
}
