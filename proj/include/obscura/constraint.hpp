#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "obscura/catalog.hpp"

namespace obscura {

/// The nine rule shapes an environment may contain. The first six carry
/// parameters; the last three are the structural rules (capacity, scene size,
/// no two identical objects).
enum class ConstraintTemplate : std::uint8_t {
    ValueRestriction,  // every object in region R has value V for attribute P
    Negation,          // no object in region R has value V for attribute P
    ExactlyN,          // exactly N objects in region R have value V
    AtLeastNPairs,     // >= N same-P pairs across regions R1, R2
    AtMostNPairs,      // <= N same-P pairs across regions R1, R2
    Or,                // every object in region R has V1 for P1 or V2 for P2
    RegionCapacity,    // every region holds at most N objects
    ObjectCount,       // the scene has exactly N objects
    Distinctness,      // no two objects agree on all four attributes
};

inline constexpr std::array<std::string_view, 9> kConstraintTemplateNames{
    "value_restriction", "negation",        "exactly_n",
    "at_least_n_pairs",  "at_most_n_pairs", "or",
    "region_capacity",   "object_count",    "distinctness"};

constexpr std::string_view template_name(ConstraintTemplate t) {
    return kConstraintTemplateNames[static_cast<std::size_t>(t)];
}

/// One instantiated rule. Which fields are meaningful depends on `form`;
/// validate() spells the arity contract out.
struct ConstraintInstance {
    ConstraintTemplate form{};
    /// Scope: one region for the per-region templates, two for the pair
    /// templates (order as written), empty for the structural rules.
    std::vector<std::uint8_t> regions;
    /// Main attribute: the restricted / counted / shared property.
    std::optional<Attribute> attribute;
    /// Values: the restricted value, both disjuncts for Or, or the optional
    /// qualifier both pair members must satisfy.
    std::vector<AttrValue> values;
    /// N for the counting templates and the scene size.
    std::optional<int> count;

    bool operator==(const ConstraintInstance&) const = default;
};

inline ConstraintInstance make_value_restriction(std::uint8_t region, AttrValue v) {
    return {ConstraintTemplate::ValueRestriction, {region}, v.attr, {v}, std::nullopt};
}

inline ConstraintInstance make_negation(std::uint8_t region, AttrValue v) {
    return {ConstraintTemplate::Negation, {region}, v.attr, {v}, std::nullopt};
}

inline ConstraintInstance make_exactly_n(std::uint8_t region, AttrValue v, int n) {
    return {ConstraintTemplate::ExactlyN, {region}, v.attr, {v}, n};
}

inline ConstraintInstance make_at_least_pairs(std::uint8_t r1, std::uint8_t r2, Attribute shared,
                                              int n, std::optional<AttrValue> qualifier = {}) {
    ConstraintInstance c{ConstraintTemplate::AtLeastNPairs, {r1, r2}, shared, {}, n};
    if (qualifier) c.values.push_back(*qualifier);
    return c;
}

inline ConstraintInstance make_at_most_pairs(std::uint8_t r1, std::uint8_t r2, Attribute shared,
                                             int n, std::optional<AttrValue> qualifier = {}) {
    ConstraintInstance c{ConstraintTemplate::AtMostNPairs, {r1, r2}, shared, {}, n};
    if (qualifier) c.values.push_back(*qualifier);
    return c;
}

inline ConstraintInstance make_or(std::uint8_t region, AttrValue a, AttrValue b) {
    return {ConstraintTemplate::Or, {region}, a.attr, {a, b}, std::nullopt};
}

inline ConstraintInstance make_region_capacity(int n) {
    return {ConstraintTemplate::RegionCapacity, {}, std::nullopt, {}, n};
}

inline ConstraintInstance make_object_count(int n) {
    return {ConstraintTemplate::ObjectCount, {}, std::nullopt, {}, n};
}

inline ConstraintInstance make_distinctness() {
    return {ConstraintTemplate::Distinctness, {}, std::nullopt, {}, std::nullopt};
}

/// Checks the arity contract of a constraint; throws std::invalid_argument
/// with the offending field on violation.
inline void validate_constraint(const ConstraintInstance& c) {
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument(std::string(template_name(c.form)) + ": " + what);
    };
    auto need_regions = [&](std::size_t n) {
        if (c.regions.size() != n) fail("expected " + std::to_string(n) + " region(s)");
        for (std::uint8_t r : c.regions)
            if (r >= kRegionCount) fail("region out of range");
    };
    switch (c.form) {
        case ConstraintTemplate::ValueRestriction:
        case ConstraintTemplate::Negation:
            need_regions(1);
            if (!c.attribute || c.values.size() != 1 || c.values[0].attr != *c.attribute)
                fail("expected a single value of the restricted attribute");
            if (c.count) fail("unexpected count");
            break;
        case ConstraintTemplate::ExactlyN:
            need_regions(1);
            if (!c.attribute || c.values.size() != 1 || c.values[0].attr != *c.attribute)
                fail("expected a single counted value");
            if (!c.count || *c.count < 0) fail("expected a count >= 0");
            break;
        case ConstraintTemplate::AtLeastNPairs:
        case ConstraintTemplate::AtMostNPairs:
            need_regions(2);
            if (!c.attribute) fail("expected a shared attribute");
            if (c.values.size() > 1) fail("at most one qualifier");
            if (c.values.size() == 1 && c.values[0].attr == *c.attribute)
                fail("qualifier must differ from the shared attribute");
            if (!c.count || *c.count < 0) fail("expected a count >= 0");
            if (c.form == ConstraintTemplate::AtLeastNPairs && *c.count < 1)
                fail("expected a count >= 1");
            break;
        case ConstraintTemplate::Or:
            need_regions(1);
            if (!c.attribute || c.values.size() != 2 || c.values[0].attr != *c.attribute)
                fail("expected two disjunct values");
            if (c.values[0] == c.values[1]) fail("disjuncts must differ");
            if (c.count) fail("unexpected count");
            break;
        case ConstraintTemplate::RegionCapacity:
            need_regions(0);
            if (c.attribute || !c.values.empty()) fail("unexpected attribute or values");
            if (!c.count || *c.count < 0) fail("expected a capacity >= 0");
            break;
        case ConstraintTemplate::ObjectCount:
            need_regions(0);
            if (c.attribute || !c.values.empty()) fail("unexpected attribute or values");
            if (!c.count || *c.count < 1) fail("expected a size >= 1");
            break;
        case ConstraintTemplate::Distinctness:
            need_regions(0);
            if (c.attribute || !c.values.empty() || c.count) fail("expected no parameters");
            break;
    }
}

/// One environment: an id, its rule list, and the scene size if the rules fix
/// one. Constraint order is preserved from parse to render.
struct Environment {
    int id{};
    std::vector<ConstraintInstance> constraints;
    std::optional<int> object_count;

    bool operator==(const Environment&) const = default;
};

/// Default per-region capacity used when an environment states none.
inline constexpr int kDefaultRegionCapacity = 3;

inline int region_capacity(const Environment& env) {
    for (const ConstraintInstance& c : env.constraints)
        if (c.form == ConstraintTemplate::RegionCapacity) return *c.count;
    return kDefaultRegionCapacity;
}

}  // namespace obscura
