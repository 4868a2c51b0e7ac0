#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "obscura/catalog.hpp"

namespace obscura {

/// Head predicate of a question rule. Missing is the canonical output form;
/// the others are accepted synonyms on input.
enum class QuestionHead : std::uint8_t { Missing, Query, Unknown };

inline constexpr std::array<std::string_view, 3> kQuestionHeadNames{
    "missing", "query", "unknown"};

/// hasProperty(var, value.attr, value) with a ground value.
struct PropertyAtom {
    int var{};
    AttrValue value{};
    bool operator==(const PropertyAtom&) const = default;
};

/// sameProperty(a, b, attr); also reachable through the same_color /
/// same_shape / same_size / same_material sugar.
struct SamePropertyAtom {
    int a{};
    int b{};
    Attribute attr{};
    bool operator==(const SamePropertyAtom&) const = default;
};

/// rel(a, b): b stands in `rel` to a. So right(Y, X) reads "X is to the
/// right of Y".
struct RelationAtom {
    Relation rel{};
    int a{};
    int b{};
    bool operator==(const RelationAtom&) const = default;
};

struct InequalityAtom {
    int a{};
    int b{};
    bool operator==(const InequalityAtom&) const = default;
};

/// A parsed question: one rule whose head exposes the answer variable Q and
/// whose body constrains the hidden object (the query variable) through
/// ground properties, shared properties, and spatial relations.
///
/// Variables are small indices; the query variable binds the hidden object,
/// every other variable binds a distinct visible object.
struct QuestionForm {
    QuestionHead head = QuestionHead::Missing;
    int query_var = 0;
    Attribute query_attribute{};
    int var_count = 1;
    std::vector<PropertyAtom> properties;
    std::vector<SamePropertyAtom> same_properties;
    std::vector<RelationAtom> relations;
    std::vector<InequalityAtom> inequalities;

    bool operator==(const QuestionForm&) const = default;
};

/// Display name for a variable index: X, Y, Z, W, then V4, V5, ...
inline std::string question_var_name(int v) {
    static constexpr std::string_view names[] = {"X", "Y", "Z", "W"};
    if (v >= 0 && v < 4) return std::string(names[v]);
    return "V" + std::to_string(v);
}

/// Canonical form: every sameProperty pair carries the matching inequality
/// (the way the rules are always written), symmetric atoms point low-to-high,
/// and each atom list is sorted and deduplicated. Idempotent; parse and the
/// generators both funnel through here, so equal forms compare equal with
/// plain ==.
inline void normalize_question(QuestionForm& q) {
    for (const SamePropertyAtom& sp : q.same_properties) {
        int lo = std::min(sp.a, sp.b), hi = std::max(sp.a, sp.b);
        bool found = false;
        for (const InequalityAtom& ineq : q.inequalities)
            if (std::min(ineq.a, ineq.b) == lo && std::max(ineq.a, ineq.b) == hi) {
                found = true;
                break;
            }
        if (!found) q.inequalities.push_back({lo, hi});
    }

    std::sort(q.properties.begin(), q.properties.end(),
              [](const PropertyAtom& a, const PropertyAtom& b) {
                  return std::tie(a.var, a.value.attr, a.value.value) <
                         std::tie(b.var, b.value.attr, b.value.value);
              });
    q.properties.erase(std::unique(q.properties.begin(), q.properties.end()),
                       q.properties.end());

    for (SamePropertyAtom& sp : q.same_properties)
        if (sp.a > sp.b) std::swap(sp.a, sp.b);
    std::sort(q.same_properties.begin(), q.same_properties.end(),
              [](const SamePropertyAtom& a, const SamePropertyAtom& b) {
                  return std::tie(a.attr, a.a, a.b) < std::tie(b.attr, b.a, b.b);
              });
    q.same_properties.erase(std::unique(q.same_properties.begin(), q.same_properties.end()),
                            q.same_properties.end());

    for (InequalityAtom& ineq : q.inequalities)
        if (ineq.a > ineq.b) std::swap(ineq.a, ineq.b);
    std::sort(q.inequalities.begin(), q.inequalities.end(),
              [](const InequalityAtom& a, const InequalityAtom& b) {
                  return std::tie(a.a, a.b) < std::tie(b.a, b.b);
              });
    q.inequalities.erase(std::unique(q.inequalities.begin(), q.inequalities.end()),
                         q.inequalities.end());

    std::sort(q.relations.begin(), q.relations.end(),
              [](const RelationAtom& a, const RelationAtom& b) {
                  return std::tie(a.rel, a.a, a.b) < std::tie(b.rel, b.a, b.b);
              });
    q.relations.erase(std::unique(q.relations.begin(), q.relations.end()), q.relations.end());
}

/// Structural sanity of a question form; throws std::invalid_argument.
/// The parser raises richer ParseErrors before this ever fires; this guards
/// programmatically built forms.
inline void validate_question_form(const QuestionForm& q) {
    auto fail = [](const std::string& what) { throw std::invalid_argument("question: " + what); };
    auto check_var = [&](int v) {
        if (v < 0 || v >= q.var_count) fail("variable out of range");
    };
    if (q.var_count < 1) fail("no variables");
    check_var(q.query_var);
    std::vector<bool> described(static_cast<std::size_t>(q.var_count), false);
    described[static_cast<std::size_t>(q.query_var)] = true;
    for (const PropertyAtom& p : q.properties) {
        check_var(p.var);
        described[static_cast<std::size_t>(p.var)] = true;
        if (p.var == q.query_var && p.value.attr == q.query_attribute)
            fail("query attribute is ground-bound on the query variable");
    }
    for (const SamePropertyAtom& sp : q.same_properties) {
        check_var(sp.a);
        check_var(sp.b);
        if (sp.a == sp.b) fail("sameProperty needs two distinct variables");
    }
    for (const RelationAtom& r : q.relations) {
        check_var(r.a);
        check_var(r.b);
        if (r.a == r.b) fail("relation needs two distinct variables");
    }
    for (const InequalityAtom& ineq : q.inequalities) {
        check_var(ineq.a);
        check_var(ineq.b);
        if (ineq.a == ineq.b) fail("inequality needs two distinct variables");
    }
    for (int v = 0; v < q.var_count; ++v)
        if (!described[static_cast<std::size_t>(v)])
            fail("variable " + question_var_name(v) + " has no property atom");
}

namespace detail {

inline void append_atom_strings(const QuestionForm& q, const std::vector<int>& rename,
                                std::vector<std::string>& out) {
    auto v = [&](int var) { return std::to_string(rename[static_cast<std::size_t>(var)]); };
    for (const PropertyAtom& p : q.properties)
        out.push_back("p(" + v(p.var) + "," + attr_value_name(p.value) + ")");
    for (const SamePropertyAtom& sp : q.same_properties) {
        std::string a = v(sp.a), b = v(sp.b);
        if (b < a) std::swap(a, b);  // sameProperty is symmetric
        out.push_back("s(" + a + "," + b + "," +
                      std::string(AttributeCatalog::attribute_name(sp.attr)) + ")");
    }
    for (const RelationAtom& r : q.relations)
        out.push_back(std::string(relation_name(r.rel)) + "(" + v(r.a) + "," + v(r.b) + ")");
    for (const InequalityAtom& ineq : q.inequalities) {
        std::string a = v(ineq.a), b = v(ineq.b);
        if (b < a) std::swap(a, b);
        out.push_back("ne(" + a + "," + b + ")");
    }
}

}  // namespace detail

/// Canonical serialization, invariant under variable renaming, atom
/// reordering, and head synonyms. Two questions mean the same thing exactly
/// when their keys match. Non-query variables are few, so minimizing over
/// their permutations is cheap.
inline std::string canonical_key(const QuestionForm& q) {
    std::vector<int> others;
    for (int v = 0; v < q.var_count; ++v)
        if (v != q.query_var) others.push_back(v);
    std::sort(others.begin(), others.end());

    std::optional<std::string> best;
    do {
        std::vector<int> rename(static_cast<std::size_t>(q.var_count), 0);
        for (std::size_t i = 0; i < others.size(); ++i)
            rename[static_cast<std::size_t>(others[i])] = static_cast<int>(i) + 1;
        std::vector<std::string> atoms;
        detail::append_atom_strings(q, rename, atoms);
        std::sort(atoms.begin(), atoms.end());
        std::string key = std::string(AttributeCatalog::attribute_name(q.query_attribute)) + "|";
        for (const std::string& a : atoms) key += a + ";";
        if (!best || key < *best) best = std::move(key);
    } while (std::next_permutation(others.begin(), others.end()));
    return best ? *best : std::string();
}

inline bool equivalent_questions(const QuestionForm& a, const QuestionForm& b) {
    return canonical_key(a) == canonical_key(b);
}

}  // namespace obscura
