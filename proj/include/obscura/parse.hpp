#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "obscura/constraint.hpp"
#include "obscura/error.hpp"
#include "obscura/question.hpp"

namespace obscura {

namespace detail {

struct Token {
    enum class Kind { Ident, Int, Sym, End };
    Kind kind = Kind::End;
    std::string text;
    long value = 0;
    int line = 1;
    int col = 1;
};

/// Splits rule text into identifiers, integers, and the small symbol set the
/// rule language uses. '%' starts a comment running to end of line.
inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i + k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += n;
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '%') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            t.kind = Token::Kind::Ident;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            t.kind = Token::Kind::Int;
            t.text = std::string(src.substr(i, j - i));
            t.value = std::stol(t.text);
            advance(j - i);
        } else {
            t.kind = Token::Kind::Sym;
            auto two = src.substr(i, 2);
            if (two == ":-" || two == ".." || two == "!=" || two == ">=" || two == "<=") {
                t.text = std::string(two);
                advance(2);
            } else if (std::string_view(".,(){}:<>=!#").find(c) != std::string_view::npos) {
                t.text = std::string(1, c);
                advance(1);
            } else {
                throw ParseError("unexpected character '" + std::string(1, c) + "'", line, col);
            }
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Token::Kind::End;
    end.line = line;
    end.col = col;
    out.push_back(std::move(end));
    return out;
}

class TokenStream {
public:
    explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    const Token& peek(int ahead = 0) const {
        std::size_t k = pos_ + static_cast<std::size_t>(ahead);
        return k < tokens_.size() ? tokens_[k] : tokens_.back();
    }
    const Token& take() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }
    bool at_end() const { return peek().kind == Token::Kind::End; }

    [[noreturn]] void fail(const std::string& message) const {
        const Token& t = peek();
        throw ParseError(message, t.line, t.col);
    }
    bool is_sym(std::string_view s, int ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == Token::Kind::Sym && t.text == s;
    }
    bool is_ident(std::string_view s, int ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == Token::Kind::Ident && t.text == s;
    }
    void expect_sym(std::string_view s) {
        if (!is_sym(s)) fail("expected '" + std::string(s) + "'");
        take();
    }
    std::string expect_ident() {
        if (peek().kind != Token::Kind::Ident) fail("expected an identifier");
        return take().text;
    }
    void expect_ident(std::string_view s) {
        if (!is_ident(s)) fail("expected '" + std::string(s) + "'");
        take();
    }
    long expect_int() {
        if (peek().kind != Token::Kind::Int) fail("expected an integer");
        return take().value;
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

// --- body literals ----------------------------------------------------------

struct CountAggregate;

struct BodyLit {
    enum class Kind {
        Object,       // object(Var)
        At,           // at(Var, region)
        HasProp,      // hasProperty(Var, attr, value)
        NotHasProp,   // not hasProperty(Var, attr, value)
        SameProp,     // sameProperty(V1, V2, attr)
        RegionVar,    // region(Var)
        Neq,          // V1 != V2
        Count,        // #count{...} op N
        ExceedAny,    // exceed_region_capacity(_)
    };
    Kind kind{};
    std::string v1, v2;
    Attribute attr{};
    std::uint8_t value = 0;
    int region = -1;
    // Count payload.
    int tuple_arity = 0;
    std::vector<BodyLit> conditions;
    std::string op;
    int rhs = 0;
};

inline Attribute parse_attr_name(TokenStream& ts) {
    if (ts.peek().kind != Token::Kind::Ident) ts.fail("expected an attribute name");
    auto a = AttributeCatalog::find_attribute(ts.peek().text);
    if (!a) ts.fail("unknown attribute '" + ts.peek().text + "'");
    ts.take();
    return *a;
}

inline std::uint8_t parse_value_name(TokenStream& ts, Attribute attr) {
    if (ts.peek().kind != Token::Kind::Ident) ts.fail("expected a value name");
    auto v = AttributeCatalog::find_value(attr, ts.peek().text);
    if (!v)
        ts.fail("'" + ts.peek().text + "' is not a " +
                std::string(AttributeCatalog::attribute_name(attr)) + " value");
    ts.take();
    return *v;
}

inline bool looks_like_variable(const std::string& name) {
    return !name.empty() && (std::isupper(static_cast<unsigned char>(name[0])) || name[0] == '_');
}

inline std::string parse_variable(TokenStream& ts) {
    if (ts.peek().kind != Token::Kind::Ident || !looks_like_variable(ts.peek().text))
        ts.fail("expected a variable");
    return ts.take().text;
}

/// Parses one literal of a constraint body. `allowCount` lets aggregate
/// literals appear (they never nest).
inline BodyLit parse_body_literal(TokenStream& ts, bool allowCount) {
    BodyLit lit;
    if (ts.is_sym("#")) {
        if (!allowCount) ts.fail("aggregate not allowed here");
        ts.take();
        ts.expect_ident("count");
        ts.expect_sym("{");
        lit.kind = BodyLit::Kind::Count;
        lit.v1 = parse_variable(ts);
        lit.tuple_arity = 1;
        if (ts.is_sym(",")) {
            ts.take();
            lit.v2 = parse_variable(ts);
            lit.tuple_arity = 2;
        }
        ts.expect_sym(":");
        while (true) {
            lit.conditions.push_back(parse_body_literal(ts, false));
            if (ts.is_sym(",")) {
                ts.take();
                continue;
            }
            break;
        }
        ts.expect_sym("}");
        if (ts.is_sym("!=") || ts.is_sym(">=") || ts.is_sym("<=") || ts.is_sym("<") ||
            ts.is_sym(">") || ts.is_sym("="))
            lit.op = ts.take().text;
        else
            ts.fail("expected a comparison after #count");
        lit.rhs = static_cast<int>(ts.expect_int());
        return lit;
    }

    if (ts.is_ident("not")) {
        ts.take();
        ts.expect_ident("hasProperty");
        ts.expect_sym("(");
        lit.kind = BodyLit::Kind::NotHasProp;
        lit.v1 = parse_variable(ts);
        ts.expect_sym(",");
        lit.attr = parse_attr_name(ts);
        ts.expect_sym(",");
        lit.value = parse_value_name(ts, lit.attr);
        ts.expect_sym(")");
        return lit;
    }

    if (ts.peek().kind != Token::Kind::Ident) ts.fail("expected a literal");
    std::string head = ts.peek().text;

    if (looks_like_variable(head)) {
        // inequality: V1 != V2
        lit.kind = BodyLit::Kind::Neq;
        lit.v1 = parse_variable(ts);
        ts.expect_sym("!=");
        lit.v2 = parse_variable(ts);
        return lit;
    }

    ts.take();
    if (head == "object") {
        ts.expect_sym("(");
        lit.kind = BodyLit::Kind::Object;
        lit.v1 = parse_variable(ts);
        ts.expect_sym(")");
    } else if (head == "at") {
        ts.expect_sym("(");
        lit.kind = BodyLit::Kind::At;
        lit.v1 = parse_variable(ts);
        ts.expect_sym(",");
        if (ts.peek().kind == Token::Kind::Int) {
            lit.region = static_cast<int>(ts.expect_int());
            if (lit.region < 0 || lit.region >= kRegionCount) ts.fail("region out of range");
        } else {
            lit.v2 = parse_variable(ts);  // region variable (capacity rule)
        }
        ts.expect_sym(")");
    } else if (head == "hasProperty") {
        ts.expect_sym("(");
        lit.kind = BodyLit::Kind::HasProp;
        lit.v1 = parse_variable(ts);
        ts.expect_sym(",");
        lit.attr = parse_attr_name(ts);
        ts.expect_sym(",");
        lit.value = parse_value_name(ts, lit.attr);
        ts.expect_sym(")");
    } else if (head == "sameProperty") {
        ts.expect_sym("(");
        lit.kind = BodyLit::Kind::SameProp;
        lit.v1 = parse_variable(ts);
        ts.expect_sym(",");
        lit.v2 = parse_variable(ts);
        ts.expect_sym(",");
        lit.attr = parse_attr_name(ts);
        ts.expect_sym(")");
    } else if (head == "region") {
        ts.expect_sym("(");
        lit.kind = BodyLit::Kind::RegionVar;
        lit.v1 = parse_variable(ts);
        ts.expect_sym(")");
    } else if (head == "exceed_region_capacity") {
        ts.expect_sym("(");
        lit.kind = BodyLit::Kind::ExceedAny;
        if (ts.peek().kind == Token::Kind::Ident)
            lit.v1 = ts.take().text;
        else
            ts.fail("expected a variable");
        ts.expect_sym(")");
    } else {
        ts.fail("unknown predicate '" + head + "' in rule body");
    }
    return lit;
}

inline std::vector<BodyLit> parse_body(TokenStream& ts) {
    std::vector<BodyLit> body;
    while (true) {
        body.push_back(parse_body_literal(ts, true));
        if (ts.is_sym(",")) {
            ts.take();
            continue;
        }
        break;
    }
    ts.expect_sym(".");
    return body;
}

/// Turns a headless rule body into a constraint instance. Rejects shapes
/// outside the template set.
inline ConstraintInstance classify_denial(TokenStream& ts, const std::vector<BodyLit>& body) {
    auto fail = [&](const std::string& what) -> ConstraintInstance { ts.fail(what); };

    // Aggregate rules first.
    const BodyLit* count = nullptr;
    for (const BodyLit& lit : body)
        if (lit.kind == BodyLit::Kind::Count) count = &lit;
    if (count) {
        if (count->tuple_arity == 1) {
            const BodyLit* has = nullptr;
            const BodyLit* at = nullptr;
            bool object_seen = false;
            for (const BodyLit& c : count->conditions) {
                if (c.kind == BodyLit::Kind::HasProp && !has)
                    has = &c;
                else if (c.kind == BodyLit::Kind::At && !at)
                    at = &c;
                else if (c.kind == BodyLit::Kind::Object)
                    object_seen = true;
                else
                    return fail("unrecognized aggregate condition");
            }
            if (!at || !object_seen) return fail("aggregate needs object(X) and at(X, R)");
            if (has) {
                // exactly-N: the count over matching objects differs from N.
                if (count->op != "!=") return fail("expected '!=' in a counting rule");
                if (body.size() != 1) return fail("unexpected extra literals");
                if (at->region < 0) return fail("expected a concrete region");
                return make_exactly_n(static_cast<std::uint8_t>(at->region),
                                      {has->attr, has->value}, count->rhs);
            }
            // capacity: count of objects at a region variable is bounded.
            if (count->op != ">=") return fail("expected '>=' in a capacity rule");
            if (at->region >= 0) return fail("expected a region variable");
            bool region_guard = false;
            for (const BodyLit& lit : body) {
                if (lit.kind == BodyLit::Kind::Count) continue;
                if (lit.kind == BodyLit::Kind::RegionVar && lit.v1 == at->v2)
                    region_guard = true;
                else
                    return fail("unexpected literal beside the capacity aggregate");
            }
            if (!region_guard) return fail("capacity rule needs region(R)");
            if (count->rhs < 1) return fail("capacity bound must be positive");
            return make_region_capacity(count->rhs - 1);
        }

        // Pair-counting rule.
        if (body.size() != 1) return fail("unexpected extra literals");
        const BodyLit* same = nullptr;
        std::vector<const BodyLit*> ats;
        std::vector<const BodyLit*> quals;
        int objects_seen = 0;
        for (const BodyLit& c : count->conditions) {
            switch (c.kind) {
                case BodyLit::Kind::SameProp: same = &c; break;
                case BodyLit::Kind::At: ats.push_back(&c); break;
                case BodyLit::Kind::Object: ++objects_seen; break;
                case BodyLit::Kind::HasProp: quals.push_back(&c); break;
                default: return fail("unrecognized aggregate condition");
            }
        }
        if (!same || ats.size() != 2 || objects_seen != 2)
            return fail("pair rule needs sameProperty, two object and two at literals");
        if (ats[0]->v1 != count->v1 || ats[1]->v1 != count->v2) {
            // accept either order of the at literals
            if (ats[0]->v1 == count->v2 && ats[1]->v1 == count->v1)
                std::swap(ats[0], ats[1]);
            else
                return fail("at literals must cover both counted variables");
        }
        if (ats[0]->region < 0 || ats[1]->region < 0) return fail("expected concrete regions");
        std::optional<AttrValue> qualifier;
        if (!quals.empty()) {
            if (quals.size() != 2 || quals[0]->attr != quals[1]->attr ||
                quals[0]->value != quals[1]->value)
                return fail("qualifier must repeat the same value for both variables");
            if (quals[0]->attr == same->attr)
                return fail("qualifier must differ from the shared attribute");
            qualifier = AttrValue{quals[0]->attr, quals[0]->value};
        }
        std::uint8_t r1 = static_cast<std::uint8_t>(ats[0]->region);
        std::uint8_t r2 = static_cast<std::uint8_t>(ats[1]->region);
        if (count->op == "<") {
            if (count->rhs < 1) return fail("pair lower bound must be positive");
            return make_at_least_pairs(r1, r2, same->attr, count->rhs, qualifier);
        }
        if (count->op == ">=") {
            if (count->rhs < 1) return fail("pair upper bound must be positive");
            return make_at_most_pairs(r1, r2, same->attr, count->rhs - 1, qualifier);
        }
        return fail("expected '<' or '>=' on a pair rule");
    }

    // Distinctness: sameProperty on all four attributes.
    std::size_t same_count = 0;
    for (const BodyLit& lit : body)
        if (lit.kind == BodyLit::Kind::SameProp) ++same_count;
    if (same_count > 0) {
        bool seen[kAttributeCount] = {};
        int objects_seen = 0;
        bool neq = false;
        for (const BodyLit& lit : body) {
            if (lit.kind == BodyLit::Kind::SameProp)
                seen[static_cast<int>(lit.attr)] = true;
            else if (lit.kind == BodyLit::Kind::Object)
                ++objects_seen;
            else if (lit.kind == BodyLit::Kind::Neq)
                neq = true;
            else
                return fail("unrecognized rule shape");
        }
        if (same_count == kAttributeCount && seen[0] && seen[1] && seen[2] && seen[3] &&
            objects_seen == 2 && neq)
            return make_distinctness();
        return fail("unrecognized rule shape");
    }

    // Single-object rules: object(X), at(X, R), then property literals.
    std::string var;
    int region = -1;
    std::vector<const BodyLit*> positives;
    std::vector<const BodyLit*> negatives;
    for (const BodyLit& lit : body) {
        switch (lit.kind) {
            case BodyLit::Kind::Object:
                if (!var.empty() && var != lit.v1) return fail("expected a single object variable");
                var = lit.v1;
                break;
            case BodyLit::Kind::At:
                if (lit.region < 0) return fail("expected a concrete region");
                region = lit.region;
                if (!var.empty() && var != lit.v1) return fail("expected a single object variable");
                var = lit.v1;
                break;
            case BodyLit::Kind::HasProp: positives.push_back(&lit); break;
            case BodyLit::Kind::NotHasProp: negatives.push_back(&lit); break;
            default: return fail("unrecognized rule shape");
        }
    }
    if (var.empty() || region < 0) return fail("rule needs object(X) and at(X, R)");
    std::uint8_t r = static_cast<std::uint8_t>(region);
    if (positives.size() == 1 && negatives.empty())
        return make_negation(r, {positives[0]->attr, positives[0]->value});
    if (negatives.size() == 1 && positives.empty())
        return make_value_restriction(r, {negatives[0]->attr, negatives[0]->value});
    if (negatives.size() == 2 && positives.empty()) {
        AttrValue a{negatives[0]->attr, negatives[0]->value};
        AttrValue b{negatives[1]->attr, negatives[1]->value};
        if (a == b) return fail("disjuncts must differ");
        return make_or(r, a, b);
    }
    return fail("unrecognized rule shape");
}

/// Result of parsing one statement: a constraint instance, or a recognized
/// piece of the fixed domain theory carrying no environment content.
struct GenericMark {};
using Statement = std::variant<ConstraintInstance, GenericMark>;

/// Skips a parenthesized argument list without interpreting it.
inline void skip_parenthesized(TokenStream& ts) {
    ts.expect_sym("(");
    int depth = 1;
    while (depth > 0) {
        if (ts.at_end()) ts.fail("unbalanced parentheses");
        if (ts.is_sym("(")) ++depth;
        if (ts.is_sym(")")) --depth;
        ts.take();
    }
}

/// Recognizes the fixed ontology facts and helper-rule shapes, validating the
/// facts against the built-in tables. Returns false if the statement is not
/// one of them (the caller then tries the constraint shapes).
inline bool parse_generic_statement(TokenStream& ts) {
    if (ts.peek().kind == Token::Kind::Int) {
        // Choice rule: 1{...}1 :- object(X).
        ts.take();
        ts.expect_sym("{");
        int depth = 1;
        while (depth > 0) {
            if (ts.at_end()) ts.fail("unbalanced braces");
            if (ts.is_sym("{")) ++depth;
            if (ts.is_sym("}")) --depth;
            ts.take();
        }
        ts.expect_int();
        ts.expect_sym(":-");
        while (!ts.is_sym(".")) {
            if (ts.at_end()) ts.fail("unterminated rule");
            ts.take();
        }
        ts.take();
        return true;
    }

    if (ts.peek().kind != Token::Kind::Ident) return false;
    const std::string& head = ts.peek().text;

    if (head == "property") {
        ts.take();
        ts.expect_sym("(");
        Attribute attr = parse_attr_name(ts);
        ts.expect_sym(",");
        parse_value_name(ts, attr);
        ts.expect_sym(")");
        ts.expect_sym(".");
        return true;
    }
    if (head == "region") {
        ts.take();
        ts.expect_sym("(");
        long r = ts.expect_int();
        if (r < 0 || r >= kRegionCount) ts.fail("region out of range");
        ts.expect_sym(")");
        ts.expect_sym(".");
        return true;
    }
    if (head == "right_R" || head == "front_R" || head == "left_R" || head == "behind_R") {
        std::string name = ts.take().text;
        Relation rel = name == "right_R"   ? Relation::Right
                       : name == "front_R" ? Relation::Front
                       : name == "left_R"  ? Relation::Left
                                           : Relation::Behind;
        ts.expect_sym("(");
        if (ts.peek().kind == Token::Kind::Int) {
            // Ground fact: must agree with the built-in topology.
            long a = ts.expect_int();
            ts.expect_sym(",");
            long b = ts.expect_int();
            ts.expect_sym(")");
            ts.expect_sym(".");
            if (a < 0 || a >= kRegionCount || b < 0 || b >= kRegionCount)
                ts.fail("region out of range");
            // rel_R(A, B): an object in A can stand in rel to an object in B.
            if (!region_set_contains(region_relation(rel, static_cast<int>(b)),
                                     static_cast<int>(a)))
                ts.fail("topology fact contradicts the region tables");
            return true;
        }
        // Inverse rule: left_R(R1, R2) :- right_R(R2, R1).
        std::string a = parse_variable(ts);
        ts.expect_sym(",");
        std::string b = parse_variable(ts);
        ts.expect_sym(")");
        ts.expect_sym(":-");
        std::string body_name = ts.expect_ident();
        auto base = [](Relation r) {
            return r == Relation::Left ? "right_R" : r == Relation::Behind ? "front_R" : "";
        };
        if (body_name != base(rel)) ts.fail("expected the inverse relation in the body");
        ts.expect_sym("(");
        std::string c = parse_variable(ts);
        ts.expect_sym(",");
        std::string d = parse_variable(ts);
        ts.expect_sym(")");
        ts.expect_sym(".");
        if (c != b || d != a) ts.fail("inverse rule must swap its arguments");
        return true;
    }
    if (head == "sameProperty") {
        // sameProperty(X1, X2, P) :- hasProperty(X1, P, V), hasProperty(X2, P, V), X1 != X2.
        ts.take();
        skip_parenthesized(ts);
        ts.expect_sym(":-");
        while (!ts.is_sym(".")) {
            if (ts.at_end()) ts.fail("unterminated rule");
            ts.take();
        }
        ts.take();
        return true;
    }
    if (head == "same_color" || head == "same_size" || head == "same_shape" ||
        head == "same_material") {
        ts.take();
        skip_parenthesized(ts);
        ts.expect_sym(":-");
        ts.expect_ident("sameProperty");
        skip_parenthesized(ts);
        ts.expect_sym(".");
        return true;
    }
    return false;
}

/// Parses one statement. ObjectCount and RegionCapacity surface as ordinary
/// instances here; parse_environment decides what to absorb.
inline Statement parse_statement(TokenStream& ts) {
    if (ts.is_ident("object") && !ts.is_sym(":-", 1)) {
        // object(0..n-1). or object(k).
        ts.take();
        ts.expect_sym("(");
        long lo = ts.expect_int();
        if (ts.is_sym("..")) {
            ts.take();
            long hi = ts.expect_int();
            ts.expect_sym(")");
            ts.expect_sym(".");
            if (lo != 0) ts.fail("object ids must start at 0");
            if (hi < lo) ts.fail("empty object range");
            return make_object_count(static_cast<int>(hi) + 1);
        }
        ts.expect_sym(")");
        ts.expect_sym(".");
        // a single object(k) fact: meaningful only in scene programs
        if (lo < 0) ts.fail("negative object id");
        ConstraintInstance c = make_object_count(static_cast<int>(lo) + 1);
        return c;
    }

    if (ts.is_ident("exceed_region_capacity")) {
        // exceed_region_capacity(R) :- #count{X: object(X), at(X, R)} >= N, region(R).
        ts.take();
        ts.expect_sym("(");
        std::string head_var = parse_variable(ts);
        ts.expect_sym(")");
        ts.expect_sym(":-");
        std::vector<BodyLit> body = parse_body(ts);
        const BodyLit* count = nullptr;
        bool guard = false;
        for (const BodyLit& lit : body) {
            if (lit.kind == BodyLit::Kind::Count)
                count = &lit;
            else if (lit.kind == BodyLit::Kind::RegionVar && lit.v1 == head_var)
                guard = true;
            else
                ts.fail("unexpected literal in a capacity rule");
        }
        if (!count || !guard || count->tuple_arity != 1 || count->op != ">=" || count->rhs < 1)
            ts.fail("unrecognized capacity rule");
        for (const BodyLit& c : count->conditions)
            if (c.kind != BodyLit::Kind::Object &&
                !(c.kind == BodyLit::Kind::At && c.region < 0 && c.v2 == head_var))
                ts.fail("unrecognized capacity rule");
        return make_region_capacity(count->rhs - 1);
    }

    if (ts.is_sym(":-")) {
        ts.take();
        std::vector<BodyLit> body = parse_body(ts);
        if (body.size() == 1 && body[0].kind == BodyLit::Kind::ExceedAny) return GenericMark{};
        return classify_denial(ts, body);
    }

    if (parse_generic_statement(ts)) return GenericMark{};
    ts.fail("unrecognized statement");
}

}  // namespace detail

/// Parses a constraint program into an Environment. Generic ontology and
/// helper rules are verified and absorbed; object(0..n-1) lifts into the
/// object_count field; an explicit capacity of the default 3 is treated as
/// generic. Unrecognized rule shapes are rejected with position info.
inline Environment parse_environment(std::string_view text) {
    detail::TokenStream ts(detail::tokenize(text));
    Environment env;
    std::vector<int> single_object_ids;
    while (!ts.at_end()) {
        // Track single object(k) facts so enumerated scene-style listings work.
        bool single_object = ts.is_ident("object") && ts.is_sym("(", 1) &&
                             ts.peek(2).kind == detail::Token::Kind::Int && ts.is_sym(")", 3);
        detail::Statement st = detail::parse_statement(ts);
        if (std::holds_alternative<detail::GenericMark>(st)) continue;
        ConstraintInstance c = std::get<ConstraintInstance>(st);
        if (c.form == ConstraintTemplate::ObjectCount) {
            if (single_object) {
                single_object_ids.push_back(*c.count - 1);
                continue;
            }
            if (env.object_count) ts.fail("duplicate object count");
            env.object_count = *c.count;
            continue;
        }
        if (c.form == ConstraintTemplate::Distinctness) continue;  // ambient rule
        if (c.form == ConstraintTemplate::RegionCapacity && *c.count == kDefaultRegionCapacity)
            continue;  // ambient default
        validate_constraint(c);
        env.constraints.push_back(std::move(c));
    }
    if (!single_object_ids.empty()) {
        if (env.object_count) ts.fail("duplicate object count");
        std::sort(single_object_ids.begin(), single_object_ids.end());
        for (std::size_t i = 0; i < single_object_ids.size(); ++i)
            if (single_object_ids[i] != static_cast<int>(i))
                ts.fail("object ids must be contiguous from 0");
        env.object_count = static_cast<int>(single_object_ids.size());
    }
    return env;
}

/// Parses exactly one constraint statement. Generic statements are not
/// constraints and are rejected.
inline ConstraintInstance parse_constraint(std::string_view text) {
    detail::TokenStream ts(detail::tokenize(text));
    std::optional<ConstraintInstance> result;
    while (!ts.at_end()) {
        detail::Statement st = detail::parse_statement(ts);
        if (std::holds_alternative<detail::GenericMark>(st))
            ts.fail("statement carries no constraint");
        if (result) ts.fail("expected a single constraint");
        result = std::get<ConstraintInstance>(st);
    }
    if (!result) throw ParseError("empty constraint text", 1, 1);
    validate_constraint(*result);
    return *result;
}

/// Parses a question rule. Accepts missing/query/unknown heads and the
/// same_* sugar; canonicalizes variable numbering by first appearance in the
/// body and auto-adds the inequality that accompanies sameProperty.
inline QuestionForm parse_question(std::string_view text) {
    detail::TokenStream ts(detail::tokenize(text));

    QuestionForm q;
    std::string head_name = ts.expect_ident();
    bool head_ok = false;
    for (std::size_t i = 0; i < kQuestionHeadNames.size(); ++i)
        if (kQuestionHeadNames[i] == head_name) {
            q.head = static_cast<QuestionHead>(i);
            head_ok = true;
        }
    if (!head_ok) ts.fail("expected a missing/query/unknown head");
    ts.expect_sym("(");
    std::string answer_var = detail::parse_variable(ts);
    ts.expect_sym(")");
    ts.expect_sym(":-");

    std::map<std::string, int> var_ids;
    auto var_id = [&](const std::string& name) {
        if (name == answer_var) ts.fail("answer variable used as an object variable");
        auto [it, inserted] = var_ids.emplace(name, static_cast<int>(var_ids.size()));
        return it->second;
    };

    std::optional<int> query_var;
    bool done = false;
    while (!done) {
        if (ts.peek().kind != detail::Token::Kind::Ident) ts.fail("expected a literal");
        std::string name = ts.peek().text;
        if (detail::looks_like_variable(name)) {
            // inequality
            int a = var_id(detail::parse_variable(ts));
            ts.expect_sym("!=");
            int b = var_id(detail::parse_variable(ts));
            if (a == b) ts.fail("inequality needs two distinct variables");
            q.inequalities.push_back({std::min(a, b), std::max(a, b)});
        } else if (name == "hasProperty") {
            ts.take();
            ts.expect_sym("(");
            int v = var_id(detail::parse_variable(ts));
            ts.expect_sym(",");
            Attribute attr = detail::parse_attr_name(ts);
            ts.expect_sym(",");
            if (ts.peek().kind != detail::Token::Kind::Ident) ts.fail("expected a value");
            std::string value_name = ts.take().text;
            ts.expect_sym(")");
            if (value_name == answer_var) {
                if (query_var) ts.fail("answer variable bound more than once");
                query_var = v;
                q.query_attribute = attr;
            } else if (detail::looks_like_variable(value_name)) {
                ts.fail("unbound value variable '" + value_name + "'");
            } else {
                auto val = AttributeCatalog::find_value(attr, value_name);
                if (!val)
                    ts.fail("'" + value_name + "' is not a " +
                            std::string(AttributeCatalog::attribute_name(attr)) + " value");
                q.properties.push_back({v, {attr, *val}});
            }
        } else if (name == "sameProperty") {
            ts.take();
            ts.expect_sym("(");
            int a = var_id(detail::parse_variable(ts));
            ts.expect_sym(",");
            int b = var_id(detail::parse_variable(ts));
            ts.expect_sym(",");
            Attribute attr = detail::parse_attr_name(ts);
            ts.expect_sym(")");
            if (a == b) ts.fail("sameProperty needs two distinct variables");
            q.same_properties.push_back({a, b, attr});
        } else if (name == "same_color" || name == "same_size" || name == "same_shape" ||
                   name == "same_material") {
            ts.take();
            Attribute attr = *AttributeCatalog::find_attribute(name.substr(5));
            ts.expect_sym("(");
            int a = var_id(detail::parse_variable(ts));
            ts.expect_sym(",");
            int b = var_id(detail::parse_variable(ts));
            ts.expect_sym(")");
            if (a == b) ts.fail("sameProperty needs two distinct variables");
            q.same_properties.push_back({a, b, attr});
        } else if (auto rel = find_relation(name)) {
            ts.take();
            ts.expect_sym("(");
            int a = var_id(detail::parse_variable(ts));
            ts.expect_sym(",");
            int b = var_id(detail::parse_variable(ts));
            ts.expect_sym(")");
            if (a == b) ts.fail("relation needs two distinct variables");
            q.relations.push_back({*rel, a, b});
        } else {
            ts.fail("unknown predicate '" + name + "' in a question");
        }
        if (ts.is_sym(",")) {
            ts.take();
            continue;
        }
        ts.expect_sym(".");
        done = true;
    }
    if (!ts.at_end()) ts.fail("trailing input after the question rule");

    if (!query_var) ts.fail("answer variable is never bound to a property");
    q.query_var = *query_var;
    q.var_count = static_cast<int>(var_ids.size());

    for (const PropertyAtom& p : q.properties)
        if (p.var == q.query_var && p.value.attr == q.query_attribute)
            ts.fail("query attribute is ground-bound on the query variable");

    std::vector<bool> described(static_cast<std::size_t>(q.var_count), false);
    described[static_cast<std::size_t>(q.query_var)] = true;
    for (const PropertyAtom& p : q.properties) described[static_cast<std::size_t>(p.var)] = true;
    for (const auto& [name, id] : var_ids)
        if (!described[static_cast<std::size_t>(id)])
            ts.fail("variable " + name + " has no property atom");

    normalize_question(q);
    validate_question_form(q);
    return q;
}

}  // namespace obscura
