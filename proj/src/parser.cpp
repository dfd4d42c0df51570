#include "kbdx/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>
#include <optional>
#include <set>
#include <vector>

namespace kbdx {

namespace {

constexpr std::array kReserved = {
    std::string_view{"and"},          std::string_view{"or"},
    std::string_view{"not"},          std::string_view{"some"},
    std::string_view{"only"},         std::string_view{"min"},
    std::string_view{"max"},          std::string_view{"exactly"},
    std::string_view{"value"},        std::string_view{"Self"},
    std::string_view{"Thing"},        std::string_view{"Nothing"},
    std::string_view{"SubClassOf"},   std::string_view{"EquivalentClasses"},
    std::string_view{"DisjointClasses"}, std::string_view{"DisjointUnion"},
};

constexpr std::array kDatatypes = {
    std::string_view{"integer"},  std::string_view{"int"},         std::string_view{"long"},
    std::string_view{"short"},    std::string_view{"byte"},        std::string_view{"decimal"},
    std::string_view{"double"},   std::string_view{"float"},       std::string_view{"string"},
    std::string_view{"boolean"},  std::string_view{"dateTime"},    std::string_view{"date"},
    std::string_view{"anyURI"},   std::string_view{"Literal"},     std::string_view{"nonNegativeInteger"},
    std::string_view{"positiveInteger"}, std::string_view{"negativeInteger"},
    std::string_view{"nonPositiveInteger"},
};

enum class Tok { Ident, Int, Literal, LParen, RParen, LBrace, RBrace, Comma, Colon, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t offset;
};

std::string describe(const Token& t) {
    switch (t.kind) {
        case Tok::Ident: return "'" + t.text + "'";
        case Tok::Int: return "integer " + t.text;
        case Tok::Literal: return "literal";
        case Tok::End: return "end of input";
        default: return "'" + t.text + "'";
    }
}

/// Maps an offset into (line, column), both 1-based, relative to `base`.
struct Position {
    std::size_t line = 1;
    std::size_t columnBase = 0;  // added to the in-text column
};

class Lexer {
public:
    Lexer(std::string_view text, Position pos) : text_(text), pos_(pos) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        std::size_t i = 0;
        while (true) {
            while (i < text_.size() && std::isspace(static_cast<unsigned char>(text_[i]))) ++i;
            if (i >= text_.size()) break;
            const char c = text_[i];
            const std::size_t start = i;
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                while (i < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[i])) || text_[i] == '_')) {
                    ++i;
                }
                out.push_back({Tok::Ident, std::string(text_.substr(start, i - start)), start});
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
                out.push_back({Tok::Int, std::string(text_.substr(start, i - start)), start});
            } else if (c == '"') {
                std::string value;
                ++i;
                bool closed = false;
                while (i < text_.size()) {
                    char d = text_[i++];
                    if (d == '"') {
                        closed = true;
                        break;
                    }
                    if (d == '\\') {
                        if (i >= text_.size()) break;
                        char e = text_[i++];
                        value.push_back(e == 'n' ? '\n' : e);
                    } else {
                        value.push_back(d);
                    }
                }
                if (!closed) fail(start, "unterminated literal", {"'\"'"});
                out.push_back({Tok::Literal, std::move(value), start});
            } else {
                Tok kind;
                switch (c) {
                    case '(': kind = Tok::LParen; break;
                    case ')': kind = Tok::RParen; break;
                    case '{': kind = Tok::LBrace; break;
                    case '}': kind = Tok::RBrace; break;
                    case ',': kind = Tok::Comma; break;
                    case ':': kind = Tok::Colon; break;
                    default: fail(start, std::string("unexpected character '") + c + "'");
                }
                ++i;
                out.push_back({kind, std::string(1, c), start});
            }
        }
        out.push_back({Tok::End, "", text_.size()});
        return out;
    }

    [[noreturn]] void fail(std::size_t offset, std::string message, std::vector<std::string> expected = {}) const {
        throwAt(text_, pos_, offset, std::move(message), std::move(expected));
    }

    [[noreturn]] static void throwAt(std::string_view text, Position pos, std::size_t offset,
                                     std::string message, std::vector<std::string> expected) {
        // Keep the reported position on a real character of the input.
        if (!text.empty() && offset >= text.size()) offset = text.size() - 1;
        std::size_t line = pos.line;
        std::size_t column = 1;
        for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        if (line == pos.line) column += pos.columnBase;
        throw ParseError(line, column, std::move(message), std::move(expected));
    }

private:
    std::string_view text_;
    Position pos_;
};

class Parser {
public:
    Parser(std::string_view text, Position pos) : text_(text), pos_(pos), tokens_(Lexer(text, pos).run()) {}

    Axiom axiom(std::string id) {
        Axiom result{std::move(id), ax::SubClassOf{}};
        if (peek().kind == Tok::Ident && peek(1).kind == Tok::Colon &&
            (peek().text == "EquivalentClasses" || peek().text == "DisjointClasses" ||
             peek().text == "DisjointUnion")) {
            const std::string keyword = next().text;
            next();  // ':'
            std::vector<ClassExpressionPtr> operands{expression()};
            while (peek().kind == Tok::Comma) {
                next();
                operands.push_back(expression());
            }
            if (operands.size() < 2) fail(peek(), keyword + " needs at least two operands", {"','"});
            if (keyword == "EquivalentClasses") {
                result.body = ax::EquivalentClasses{std::move(operands)};
            } else if (keyword == "DisjointClasses") {
                result.body = ax::DisjointClasses{std::move(operands)};
            } else {
                result.body = ax::DisjointUnion{std::move(operands)};
            }
        } else {
            ClassExpressionPtr lhs = expression();
            if (isWord(peek(), "SubClassOf")) {
                next();
                result.body = ax::SubClassOf{std::move(lhs), expression()};
            } else if (peek().kind == Tok::LParen) {
                next();
                std::string individual = identifier("individual name");
                expect(Tok::RParen, "')'");
                result.body = ax::ClassAssertion{std::move(lhs), std::move(individual)};
            } else {
                fail(peek(), "expected an axiom", {"'SubClassOf'", "'('", "'and'", "'or'"});
            }
        }
        if (peek().kind != Tok::End) fail(peek(), "unexpected " + describe(peek()), {"end of input"});
        return result;
    }

    ClassExpressionPtr standaloneExpression() {
        ClassExpressionPtr e = expression();
        if (peek().kind != Tok::End) fail(peek(), "unexpected " + describe(peek()), {"end of input"});
        return e;
    }

private:
    ClassExpressionPtr expression() {
        ClassExpressionPtr left = conjunction();
        while (isWord(peek(), "or")) {
            next();
            left = unionOf(std::move(left), conjunction());
        }
        return left;
    }

    ClassExpressionPtr conjunction() {
        ClassExpressionPtr left = unary();
        while (isWord(peek(), "and")) {
            next();
            left = intersection(std::move(left), unary());
        }
        return left;
    }

    ClassExpressionPtr unary() {
        if (isWord(peek(), "not")) {
            next();
            return complement(unary());
        }
        return primary();
    }

    bool startsPrimary(const Token& t) const {
        if (t.kind == Tok::LParen || t.kind == Tok::LBrace) return true;
        if (t.kind != Tok::Ident) return false;
        return t.text == "Thing" || t.text == "Nothing" || !isReservedWord(t.text);
    }

    ClassExpressionPtr primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::LParen: {
                next();
                ClassExpressionPtr inner = expression();
                expect(Tok::RParen, "')'");
                return inner;
            }
            case Tok::LBrace: {
                next();
                std::vector<std::string> individuals{identifier("individual name")};
                while (peek().kind == Tok::Comma) {
                    next();
                    individuals.push_back(identifier("individual name"));
                }
                expect(Tok::RBrace, "'}'");
                return oneOf(std::move(individuals));
            }
            case Tok::Ident:
                break;
            default:
                fail(t, "unexpected " + describe(t), {"class name", "'('", "'{'", "'not'"});
        }
        if (t.text == "Thing") {
            next();
            return top();
        }
        if (t.text == "Nothing") {
            next();
            return bottom();
        }
        if (isReservedWord(t.text)) {
            fail(t, "unexpected keyword '" + t.text + "'", {"class name", "'('", "'{'"});
        }
        std::string name = next().text;
        const Token& op = peek();
        if (isWord(op, "some") || isWord(op, "only")) {
            const bool some = op.text == "some";
            next();
            ClassExpressionPtr filler = primary();
            if (auto range = datatypeOf(filler)) {
                return some ? dataSome(std::move(name), *range) : dataOnly(std::move(name), *range);
            }
            return some ? objectSome(std::move(name), std::move(filler))
                        : objectOnly(std::move(name), std::move(filler));
        }
        if (isWord(op, "min") || isWord(op, "max") || isWord(op, "exactly")) {
            const CardinalityKind kind = op.text == "min"   ? CardinalityKind::Min
                                         : op.text == "max" ? CardinalityKind::Max
                                                            : CardinalityKind::Exact;
            next();
            const Token& n = peek();
            if (n.kind != Tok::Int) fail(n, "expected a cardinality bound", {"integer"});
            std::uint64_t bound = 0;
            for (char c : n.text) {
                bound = bound * 10 + static_cast<std::uint64_t>(c - '0');
                if (bound > std::numeric_limits<std::uint32_t>::max()) fail(n, "cardinality bound too large");
            }
            next();
            ClassExpressionPtr filler;
            if (startsPrimary(peek())) filler = primary();
            if (filler) {
                if (auto range = datatypeOf(filler)) {
                    return dataCardinality(kind, static_cast<std::uint32_t>(bound), std::move(name), *range);
                }
            }
            return objectCardinality(kind, static_cast<std::uint32_t>(bound), std::move(name), std::move(filler));
        }
        if (isWord(op, "value")) {
            next();
            const Token& v = peek();
            if (v.kind == Tok::Literal) {
                std::string literal = next().text;
                return dataHasValue(std::move(name), std::move(literal));
            }
            return hasValue(std::move(name), identifier("individual or literal"));
        }
        if (isWord(op, "Self")) {
            next();
            return hasSelf(std::move(name));
        }
        return named(std::move(name));
    }

    static std::optional<std::string> datatypeOf(const ClassExpressionPtr& e) {
        if (const auto* n = e->as<ce::NamedClass>(); n && isDatatypeName(n->name)) return n->name;
        return std::nullopt;
    }

    std::string identifier(const char* what) {
        const Token& t = peek();
        if (t.kind != Tok::Ident || isReservedWord(t.text)) {
            fail(t, std::string("expected ") + what, {what});
        }
        return next().text;
    }

    void expect(Tok kind, const char* what) {
        if (peek().kind != kind) fail(peek(), "expected " + std::string(what) + ", found " + describe(peek()), {what});
        next();
    }

    static bool isWord(const Token& t, std::string_view word) { return t.kind == Tok::Ident && t.text == word; }

    const Token& peek(std::size_t ahead = 0) const {
        return tokens_[std::min(cursor_ + ahead, tokens_.size() - 1)];
    }
    const Token& next() { return tokens_[std::min(cursor_++, tokens_.size() - 1)]; }

    [[noreturn]] void fail(const Token& at, std::string message, std::vector<std::string> expected = {}) const {
        Lexer::throwAt(text_, pos_, at.offset, std::move(message), std::move(expected));
    }

    std::string_view text_;
    Position pos_;
    std::vector<Token> tokens_;
    std::size_t cursor_ = 0;
};

std::string quoteLiteral(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out.push_back('\\');
            out.push_back(c);
        } else if (c == '\n') {
            out += "\\n";
        } else {
            out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

std::string_view cardinalityWord(CardinalityKind k) {
    switch (k) {
        case CardinalityKind::Min: return "min";
        case CardinalityKind::Max: return "max";
        case CardinalityKind::Exact: return "exactly";
    }
    return "min";
}

std::string render(const ClassExpression& e);

std::string operand(const ClassExpressionPtr& e) {
    if (e->isAtomic()) return render(*e);
    return "(" + render(*e) + ")";
}

std::string render(const ClassExpression& e) {
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ce::NamedClass>) {
                return n.name;
            } else if constexpr (std::is_same_v<T, ce::Top>) {
                return "Thing";
            } else if constexpr (std::is_same_v<T, ce::Bottom>) {
                return "Nothing";
            } else if constexpr (std::is_same_v<T, ce::Enumeration>) {
                std::string out = "{";
                for (std::size_t i = 0; i < n.individuals.size(); ++i) {
                    if (i) out += ", ";
                    out += n.individuals[i];
                }
                return out + "}";
            } else if constexpr (std::is_same_v<T, ce::Intersection>) {
                return operand(n.left) + " and " + operand(n.right);
            } else if constexpr (std::is_same_v<T, ce::Union>) {
                return operand(n.left) + " or " + operand(n.right);
            } else if constexpr (std::is_same_v<T, ce::Complement>) {
                return "not " + operand(n.operand);
            } else if constexpr (std::is_same_v<T, ce::ObjectSome>) {
                return n.property + " some " + operand(n.filler);
            } else if constexpr (std::is_same_v<T, ce::ObjectOnly>) {
                return n.property + " only " + operand(n.filler);
            } else if constexpr (std::is_same_v<T, ce::ObjectCardinality>) {
                std::string out = n.property + " " + std::string(cardinalityWord(n.kind)) + " " +
                                  std::to_string(n.bound);
                if (n.filler) out += " " + operand(n.filler);
                return out;
            } else if constexpr (std::is_same_v<T, ce::DataSome>) {
                return n.property + " some " + n.range;
            } else if constexpr (std::is_same_v<T, ce::DataOnly>) {
                return n.property + " only " + n.range;
            } else if constexpr (std::is_same_v<T, ce::DataCardinality>) {
                std::string out = n.property + " " + std::string(cardinalityWord(n.kind)) + " " +
                                  std::to_string(n.bound);
                if (n.range) out += " " + *n.range;
                return out;
            } else if constexpr (std::is_same_v<T, ce::ObjectHasValue>) {
                return n.property + " value " + n.individual;
            } else if constexpr (std::is_same_v<T, ce::ObjectHasSelf>) {
                return n.property + " Self";
            } else {
                return n.property + " value " + quoteLiteral(n.literal);
            }
        },
        e.node);
}

std::string joinOperands(std::string_view keyword, const std::vector<ClassExpressionPtr>& operands) {
    std::string out(keyword);
    out += ": ";
    for (std::size_t i = 0; i < operands.size(); ++i) {
        if (i) out += ", ";
        out += render(*operands[i]);
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

/// Drops a trailing `#` comment that is not inside a quoted literal.
std::string_view stripComment(std::string_view line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted && c == '\\') {
            ++i;
        } else if (c == '"') {
            quoted = !quoted;
        } else if (c == '#' && !quoted) {
            return line.substr(0, i);
        }
    }
    return line;
}

bool isIdentifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

enum class Section { None, Ontology, Background, Positive, Negative };

struct PendingAxiom {
    Section section;
    std::size_t line;
    std::size_t column;  // 1-based column of the axiom text
    std::string id;      // empty when unlabeled
    std::string text;
    std::size_t ordinal;  // 1-based position among all axioms of the file
};

}  // namespace

bool isReservedWord(std::string_view word) noexcept {
    return std::find(kReserved.begin(), kReserved.end(), word) != kReserved.end();
}

bool isDatatypeName(std::string_view word) noexcept {
    return std::find(kDatatypes.begin(), kDatatypes.end(), word) != kDatatypes.end();
}

Axiom parseAxiom(std::string_view input, std::string id) {
    return Parser(input, Position{}).axiom(std::move(id));
}

ClassExpressionPtr parseClassExpression(std::string_view input) {
    return Parser(input, Position{}).standaloneExpression();
}

std::string serializeClassExpression(const ClassExpressionPtr& expression) { return render(*expression); }

std::string serializeAxiom(const Axiom& axiom) {
    return std::visit(
        [](const auto& body) -> std::string {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, ax::SubClassOf>) {
                return render(*body.sub) + " SubClassOf " + render(*body.sup);
            } else if constexpr (std::is_same_v<T, ax::EquivalentClasses>) {
                return joinOperands("EquivalentClasses", body.operands);
            } else if constexpr (std::is_same_v<T, ax::DisjointClasses>) {
                return joinOperands("DisjointClasses", body.operands);
            } else if constexpr (std::is_same_v<T, ax::DisjointUnion>) {
                return joinOperands("DisjointUnion", body.operands);
            } else {
                return operand(body.cls) + "(" + body.individual + ")";
            }
        },
        axiom.body);
}

Dpi parseDpiFile(std::string_view input) {
    Dpi dpi;
    std::vector<PendingAxiom> pending;
    Section section = Section::None;
    std::size_t lineNo = 0;
    std::size_t ordinal = 0;
    std::size_t start = 0;
    while (start <= input.size()) {
        std::size_t end = input.find('\n', start);
        if (end == std::string_view::npos) end = input.size();
        std::string_view raw = input.substr(start, end - start);
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        ++lineNo;
        const std::string_view content = stripComment(raw);
        const std::string_view line = trim(content);
        const std::size_t indent = static_cast<std::size_t>(line.data() - raw.data());
        auto fail = [&](std::size_t col, std::string msg, std::vector<std::string> expected = {}) {
            throw ParseError(lineNo, std::max<std::size_t>(1, std::min(col, raw.size())), std::move(msg),
                             std::move(expected));
        };

        if (!line.empty()) {
            if (line.front() == '@') {
                const std::string_view directive = trim(line.substr(1));
                if (directive == "coherence on") {
                    dpi.requireCoherence = true;
                } else if (directive == "coherence off") {
                    dpi.requireCoherence = false;
                } else {
                    fail(indent + 1, "unknown directive", {"'@coherence on'", "'@coherence off'"});
                }
            } else if (line.front() == '[') {
                if (line.back() != ']') fail(indent + line.size(), "expected ']'", {"']'"});
                const std::string_view name = trim(line.substr(1, line.size() - 2));
                if (name == "ONTOLOGY") {
                    section = Section::Ontology;
                } else if (name == "BACKGROUND") {
                    section = Section::Background;
                } else if (name == "POSITIVE") {
                    section = Section::Positive;
                } else if (name == "NEGATIVE") {
                    section = Section::Negative;
                } else {
                    throw Error(ErrorCode::SectionUnknown,
                                "line " + std::to_string(lineNo) + ": unknown section [" + std::string(name) + "]");
                }
            } else {
                if (section == Section::None) {
                    fail(indent + 1, "axiom outside of a section", {"'[ONTOLOGY]'", "'[BACKGROUND]'",
                                                                    "'[POSITIVE]'", "'[NEGATIVE]'"});
                }
                PendingAxiom p{section, lineNo, indent + 1, {}, std::string(line), ++ordinal};
                const std::size_t colon = line.find(':');
                if (colon != std::string_view::npos) {
                    const std::string_view label = trim(line.substr(0, colon));
                    if (isIdentifier(label) && !isReservedWord(label)) {
                        const std::string_view rest = line.substr(colon + 1);
                        const std::string_view body = trim(rest);
                        const auto lead = static_cast<std::size_t>(body.data() - rest.data());
                        p.id = std::string(label);
                        p.text = std::string(body);
                        p.column = indent + colon + 2 + lead;
                    }
                }
                pending.push_back(std::move(p));
            }
        }
        if (end == input.size()) break;
        start = end + 1;
    }

    std::set<std::string> taken;
    for (const auto& p : pending) {
        if (p.id.empty()) continue;
        if (!taken.insert(p.id).second) {
            throw Error(ErrorCode::DuplicateAxiomId,
                        "line " + std::to_string(p.line) + ": duplicate axiom id '" + p.id + "'");
        }
    }
    for (auto& p : pending) {
        if (p.text.empty()) {
            throw ParseError(p.line, std::max<std::size_t>(1, p.column - 1), "missing axiom after label",
                             {"axiom"});
        }
        std::string id = p.id;
        if (id.empty()) {
            id = freshId("a", taken, p.ordinal);
            taken.insert(id);
        }
        Axiom axiom = Parser(p.text, Position{p.line, p.column - 1}).axiom(std::move(id));
        switch (p.section) {
            case Section::Ontology: dpi.ontology.push_back(std::move(axiom)); break;
            case Section::Background: dpi.background.push_back(std::move(axiom)); break;
            case Section::Positive: dpi.positives.push_back(std::move(axiom)); break;
            case Section::Negative: dpi.negatives.push_back(std::move(axiom)); break;
            case Section::None: break;
        }
    }
    return dpi;
}

std::string serializeDpi(const Dpi& dpi) {
    std::string out;
    if (dpi.requireCoherence) out += "@coherence on\n";
    auto section = [&out](std::string_view header, const std::vector<Axiom>& axioms) {
        out += header;
        out += '\n';
        for (const auto& a : axioms) {
            out += a.id + ": " + serializeAxiom(a) + "\n";
        }
    };
    section("[ONTOLOGY]", dpi.ontology);
    section("[BACKGROUND]", dpi.background);
    section("[POSITIVE]", dpi.positives);
    section("[NEGATIVE]", dpi.negatives);
    return out;
}

}  // namespace kbdx
