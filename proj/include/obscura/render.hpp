#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "obscura/constraint.hpp"
#include "obscura/question.hpp"

namespace obscura {

namespace detail {

inline std::string attr_str(Attribute a) {
    return std::string(AttributeCatalog::attribute_name(a));
}

inline std::string value_str(const AttrValue& av) {
    return attr_value_name(av);
}

inline std::string has_prop(const std::string& var, const AttrValue& av) {
    return "hasProperty(" + var + ", " + attr_str(av.attr) + ", " + value_str(av) + ")";
}

}  // namespace detail

/// Canonical rule text for one constraint. parse_constraint inverts this
/// exactly.
inline std::string render_constraint_asp(const ConstraintInstance& c) {
    validate_constraint(c);
    auto region = [&](std::size_t i) { return std::to_string(c.regions[i]); };
    switch (c.form) {
        case ConstraintTemplate::ValueRestriction:
            return ":- object(X), at(X, " + region(0) + "), not " +
                   detail::has_prop("X", c.values[0]) + ".";
        case ConstraintTemplate::Negation:
            return ":- object(X), at(X, " + region(0) + "), " +
                   detail::has_prop("X", c.values[0]) + ".";
        case ConstraintTemplate::Or:
            return ":- object(X), at(X, " + region(0) + "), not " +
                   detail::has_prop("X", c.values[0]) + ", not " +
                   detail::has_prop("X", c.values[1]) + ".";
        case ConstraintTemplate::ExactlyN:
            return ":- #count{X: " + detail::has_prop("X", c.values[0]) +
                   ", object(X), at(X, " + region(0) + ")} != " + std::to_string(*c.count) + ".";
        case ConstraintTemplate::AtLeastNPairs:
        case ConstraintTemplate::AtMostNPairs: {
            std::string body = "#count{X1, X2: sameProperty(X1, X2, " +
                               detail::attr_str(*c.attribute) +
                               "), object(X1), object(X2), at(X1, " + region(0) + "), at(X2, " +
                               region(1) + ")";
            if (!c.values.empty())
                body += ", " + detail::has_prop("X1", c.values[0]) + ", " +
                        detail::has_prop("X2", c.values[0]);
            body += "}";
            if (c.form == ConstraintTemplate::AtLeastNPairs)
                return ":- " + body + " < " + std::to_string(*c.count) + ".";
            return ":- " + body + " >= " + std::to_string(*c.count + 1) + ".";
        }
        case ConstraintTemplate::RegionCapacity:
            return ":- #count{X: object(X), at(X, R)} >= " + std::to_string(*c.count + 1) +
                   ", region(R).";
        case ConstraintTemplate::ObjectCount:
            return "object(0.." + std::to_string(*c.count - 1) + ").";
        case ConstraintTemplate::Distinctness:
            return ":- sameProperty(X1, X2, color), sameProperty(X1, X2, material), "
                   "sameProperty(X1, X2, size), sameProperty(X1, X2, shape), "
                   "object(X1), object(X2), X1 != X2.";
    }
    return {};
}

/// One English sentence per constraint. "{value} {attribute}" reads as in
/// "medium size" or "metal material"; pair constraints name their qualifier
/// the other way around ("color yellow objects").
inline std::string render_constraint_nl(const ConstraintInstance& c) {
    validate_constraint(c);
    auto region = [&](std::size_t i) { return std::to_string(c.regions[i]); };
    auto value_attr = [](const AttrValue& av) {
        return detail::value_str(av) + " " + detail::attr_str(av.attr);
    };
    switch (c.form) {
        case ConstraintTemplate::ValueRestriction:
            return "All objects in region " + region(0) + " have " + value_attr(c.values[0]) +
                   ".";
        case ConstraintTemplate::Negation:
            return "There are no " + value_attr(c.values[0]) + " objects in region " +
                   region(0) + ".";
        case ConstraintTemplate::Or:
            return "All objects in region " + region(0) + " have either " +
                   value_attr(c.values[0]) + " or " + value_attr(c.values[1]) + ".";
        case ConstraintTemplate::ExactlyN:
            return "There are exactly " + std::to_string(*c.count) + " objects at region " +
                   region(0) + " with value " + detail::value_str(c.values[0]) +
                   " for the property " + detail::attr_str(*c.attribute) + ".";
        case ConstraintTemplate::AtLeastNPairs:
        case ConstraintTemplate::AtMostNPairs: {
            bool at_least = c.form == ConstraintTemplate::AtLeastNPairs;
            int n = *c.count;
            std::string pair_word = at_least && n == 1 ? "pair" : "pairs";
            std::string qualified =
                c.values.empty()
                    ? ""
                    : detail::attr_str(c.values[0].attr) + " " + detail::value_str(c.values[0]) +
                          " ";
            return std::string("There are ") + (at_least ? "at least " : "at most ") +
                   std::to_string(n) + " " + pair_word + " of " + qualified +
                   "objects with the same " + detail::attr_str(*c.attribute) + " in regions " +
                   region(0) + " and " + region(1) + " together.";
        }
        case ConstraintTemplate::RegionCapacity:
            return "Every region can have at most " + std::to_string(*c.count) + " objects.";
        case ConstraintTemplate::ObjectCount:
            return "There are " + std::to_string(*c.count) + " objects in the scene.";
        case ConstraintTemplate::Distinctness:
            return "Two different objects cannot have the same values for all the 4 properties.";
    }
    return {};
}

/// The environment program: the scene size (when fixed) followed by the
/// constraints, one per line, order preserved.
inline std::string render_environment_asp(const Environment& env) {
    std::string out;
    if (env.object_count)
        out += render_constraint_asp(make_object_count(*env.object_count)) + "\n";
    for (const ConstraintInstance& c : env.constraints) out += render_constraint_asp(c) + "\n";
    return out;
}

/// English sidecar: one sentence per line, same order as the rules.
inline std::string render_environment_nl(const Environment& env) {
    std::string out;
    if (env.object_count)
        out += render_constraint_nl(make_object_count(*env.object_count)) + "\n";
    for (const ConstraintInstance& c : env.constraints) out += render_constraint_nl(c) + "\n";
    return out;
}

/// Canonical question rule. Atoms render in stored order: the query atom,
/// ground properties, inequalities, shared-property atoms in same_* sugar,
/// relations. normalize_question makes that order canonical.
inline std::string render_question_asp(const QuestionForm& q) {
    validate_question_form(q);
    auto var = [&](int v) { return question_var_name(v); };
    std::string out = std::string(kQuestionHeadNames[static_cast<std::size_t>(q.head)]) +
                      "(Q) :- hasProperty(" + var(q.query_var) + ", " +
                      detail::attr_str(q.query_attribute) + ", Q)";
    for (const PropertyAtom& p : q.properties) out += ", " + detail::has_prop(var(p.var), p.value);
    for (const InequalityAtom& ineq : q.inequalities)
        out += ", " + var(ineq.a) + " != " + var(ineq.b);
    for (const SamePropertyAtom& sp : q.same_properties)
        out += ", same_" + detail::attr_str(sp.attr) + "(" + var(sp.a) + ", " + var(sp.b) + ")";
    for (const RelationAtom& r : q.relations)
        out += ", " + std::string(relation_name(r.rel)) + "(" + var(r.a) + ", " + var(r.b) + ")";
    return out + ".";
}

/// The fixed domain theory: ontology facts, region topology, one-value-per-
/// attribute and one-region choice rules, sameProperty and its sugar, the
/// distinctness rule, and the region capacity bound.
inline std::string generic_rules_asp(int capacity = kDefaultRegionCapacity) {
    std::string out;
    for (Attribute a : kAttributes)
        for (int v = 0; v < AttributeCatalog::value_count(a); ++v)
            out += "property(" + detail::attr_str(a) + ", " +
                   std::string(AttributeCatalog::value_name(a, static_cast<std::uint8_t>(v))) +
                   ").\n";
    for (int r = 0; r < kRegionCount; ++r) out += "region(" + std::to_string(r) + ").\n";
    // rel_R(A, B): an object in region A can stand in rel to an object in B.
    for (Relation rel : {Relation::Right, Relation::Front}) {
        for (int src = 0; src < kRegionCount; ++src)
            for (std::uint8_t host : region_set_values(region_relation(rel, src)))
                out += std::string(relation_name(rel)) + "_R(" + std::to_string(host) + ", " +
                       std::to_string(src) + ").\n";
    }
    out += "left_R(R1, R2) :- right_R(R2, R1).\n";
    out += "behind_R(R1, R2) :- front_R(R2, R1).\n";
    for (Attribute a : kAttributes) {
        std::string p = detail::attr_str(a);
        out += "1{hasProperty(X, " + p + ", V): property(" + p + ", V)}1 :- object(X).\n";
    }
    out += "1{at(X, R): region(R)}1 :- object(X).\n";
    out +=
        "sameProperty(X1, X2, P) :- hasProperty(X1, P, V), hasProperty(X2, P, V), X1 != X2.\n";
    for (Attribute a : kAttributes) {
        std::string p = detail::attr_str(a);
        out += "same_" + p + "(X, Y) :- sameProperty(X, Y, " + p + ").\n";
    }
    out += render_constraint_asp(make_distinctness()) + "\n";
    out += "exceed_region_capacity(R) :- #count{X: object(X), at(X, R)} >= " +
           std::to_string(capacity + 1) + ", region(R).\n";
    out += ":- exceed_region_capacity(_).\n";
    return out;
}

}  // namespace obscura
