// Manchester-style axiom syntax and the line-oriented DPI file format.
//
// Grammar (keywords are reserved and may not be used as identifiers):
//
//   axiom   := ce "SubClassOf" ce
//            | ("EquivalentClasses" | "DisjointClasses" | "DisjointUnion") ":" ce ("," ce)+
//            | ce "(" ident ")"                          -- class assertion
//   ce      := conj ("or" conj)*                         -- left-associative
//   conj    := unary ("and" unary)*                      -- left-associative
//   unary   := "not" unary | primary
//   primary := ident | "Thing" | "Nothing" | "{" ident ("," ident)* "}" | "(" ce ")"
//            | ident ("some" | "only") primary
//            | ident ("min" | "max" | "exactly") INT primary?
//            | ident "value" (ident | LITERAL)
//            | ident "Self"
//
// A restriction whose filler is a bare datatype name (integer, string, ...)
// is read as a data-property restriction.

#pragma once

#include <string>
#include <string_view>

#include "kbdx/errors.hpp"
#include "kbdx/model.hpp"

namespace kbdx {

Axiom parseAxiom(std::string_view input, std::string id = {});
ClassExpressionPtr parseClassExpression(std::string_view input);

/// Canonical text; every complex sub-expression is parenthesized so that
/// parseAxiom(serializeAxiom(a)) is structurally equal to a.
std::string serializeAxiom(const Axiom& axiom);
std::string serializeClassExpression(const ClassExpressionPtr& expression);

/// Parses the sectioned DPI format:
///
///   @coherence on
///   [ONTOLOGY]
///   a1: A SubClassOf B
///   [BACKGROUND] / [POSITIVE] / [NEGATIVE] ...
///
/// Unlabeled axioms get ids a<N>, N being the axiom's position in the file,
/// bumped past any id that is already taken.
Dpi parseDpiFile(std::string_view input);
std::string serializeDpi(const Dpi& dpi);

bool isReservedWord(std::string_view word) noexcept;
bool isDatatypeName(std::string_view word) noexcept;

}  // namespace kbdx
