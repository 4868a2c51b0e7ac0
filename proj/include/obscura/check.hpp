#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "obscura/constraint.hpp"
#include "obscura/scene.hpp"

namespace obscura {

/// Always-on rules that are not part of an environment's constraint list.
enum class GenericRule : std::uint8_t { Distinctness, RegionCapacity, ObjectCount };

/// Where a violation comes from: an index into Environment::constraints, or
/// one of the ambient rules.
using ViolationSource = std::variant<std::size_t, GenericRule>;

struct Violation {
    ViolationSource source;
    /// Ids of the objects witnessing the violation; empty when the failure is
    /// a count shortfall with nothing to point at.
    std::vector<int> witnesses;
};

struct ConstraintReport {
    std::vector<Violation> violations;
    bool satisfied() const { return violations.empty(); }
};

namespace detail {

inline bool matches(const ObjectSpec& o, const AttrValue& av) {
    return o.value(av.attr) == av.value;
}

/// Ordered pairs (i, j), i != j, at (regions[0], regions[1]) sharing
/// `attribute`, both matching the qualifier if one is given. This is the
/// count the pair templates bound.
inline std::vector<int> pair_witnesses(const std::vector<ObjectSpec>& objects,
                                       const ConstraintInstance& c, int* count_out) {
    std::vector<int> witnesses;
    int count = 0;
    for (const ObjectSpec& a : objects) {
        if (a.region != c.regions[0]) continue;
        if (!c.values.empty() && !matches(a, c.values[0])) continue;
        for (const ObjectSpec& b : objects) {
            if (b.id == a.id || b.region != c.regions[1]) continue;
            if (!c.values.empty() && !matches(b, c.values[0])) continue;
            if (a.value(*c.attribute) != b.value(*c.attribute)) continue;
            ++count;
            witnesses.push_back(a.id);
            witnesses.push_back(b.id);
        }
    }
    if (count_out) *count_out = count;
    std::sort(witnesses.begin(), witnesses.end());
    witnesses.erase(std::unique(witnesses.begin(), witnesses.end()), witnesses.end());
    return witnesses;
}

}  // namespace detail

/// Evaluates one constraint against a complete scene. Returns the violation
/// if the scene breaks it, nullopt otherwise.
inline std::optional<Violation> evaluate_constraint(const SceneGraph& scene,
                                                    const ConstraintInstance& c,
                                                    ViolationSource source) {
    std::vector<int> witnesses;
    switch (c.form) {
        case ConstraintTemplate::ValueRestriction:
            for (const ObjectSpec& o : scene.objects)
                if (o.region == c.regions[0] && !detail::matches(o, c.values[0]))
                    witnesses.push_back(o.id);
            break;
        case ConstraintTemplate::Negation:
            for (const ObjectSpec& o : scene.objects)
                if (o.region == c.regions[0] && detail::matches(o, c.values[0]))
                    witnesses.push_back(o.id);
            break;
        case ConstraintTemplate::Or:
            for (const ObjectSpec& o : scene.objects)
                if (o.region == c.regions[0] && !detail::matches(o, c.values[0]) &&
                    !detail::matches(o, c.values[1]))
                    witnesses.push_back(o.id);
            break;
        case ConstraintTemplate::ExactlyN: {
            std::vector<int> matching;
            for (const ObjectSpec& o : scene.objects)
                if (o.region == c.regions[0] && detail::matches(o, c.values[0]))
                    matching.push_back(o.id);
            if (static_cast<int>(matching.size()) != *c.count)
                return Violation{source, std::move(matching)};
            return std::nullopt;
        }
        case ConstraintTemplate::AtLeastNPairs: {
            int count = 0;
            std::vector<int> w = detail::pair_witnesses(scene.objects, c, &count);
            if (count < *c.count) return Violation{source, std::move(w)};
            return std::nullopt;
        }
        case ConstraintTemplate::AtMostNPairs: {
            int count = 0;
            std::vector<int> w = detail::pair_witnesses(scene.objects, c, &count);
            if (count > *c.count) return Violation{source, std::move(w)};
            return std::nullopt;
        }
        case ConstraintTemplate::RegionCapacity: {
            for (int r = 0; r < kRegionCount; ++r) {
                std::vector<int> here;
                for (const ObjectSpec& o : scene.objects)
                    if (o.region == r) here.push_back(o.id);
                if (static_cast<int>(here.size()) > *c.count)
                    for (int id : here) witnesses.push_back(id);
            }
            break;
        }
        case ConstraintTemplate::ObjectCount:
            if (scene.object_count() != *c.count) return Violation{source, {}};
            return std::nullopt;
        case ConstraintTemplate::Distinctness:
            for (std::size_t i = 0; i < scene.objects.size(); ++i)
                for (std::size_t j = i + 1; j < scene.objects.size(); ++j)
                    if (scene.objects[i].same_four_properties(scene.objects[j])) {
                        witnesses.push_back(scene.objects[i].id);
                        witnesses.push_back(scene.objects[j].id);
                    }
            break;
    }
    if (witnesses.empty()) return std::nullopt;
    std::sort(witnesses.begin(), witnesses.end());
    witnesses.erase(std::unique(witnesses.begin(), witnesses.end()), witnesses.end());
    return Violation{source, std::move(witnesses)};
}

/// Checks a complete scene against an environment: every listed constraint
/// plus the ambient rules (distinctness, the default region capacity when the
/// environment states none, and the scene size when it fixes one).
inline ConstraintReport check_scene(const SceneGraph& scene, const Environment& env) {
    ConstraintReport report;
    auto add = [&](std::optional<Violation> v) {
        if (v) report.violations.push_back(std::move(*v));
    };

    bool explicit_capacity = false;
    bool explicit_distinctness = false;
    for (std::size_t i = 0; i < env.constraints.size(); ++i) {
        const ConstraintInstance& c = env.constraints[i];
        if (c.form == ConstraintTemplate::RegionCapacity) explicit_capacity = true;
        if (c.form == ConstraintTemplate::Distinctness) explicit_distinctness = true;
        add(evaluate_constraint(scene, c, i));
    }
    if (!explicit_distinctness)
        add(evaluate_constraint(scene, make_distinctness(), GenericRule::Distinctness));
    if (!explicit_capacity)
        add(evaluate_constraint(scene, make_region_capacity(kDefaultRegionCapacity),
                                GenericRule::RegionCapacity));
    if (env.object_count)
        add(evaluate_constraint(scene, make_object_count(*env.object_count),
                                GenericRule::ObjectCount));
    return report;
}

}  // namespace obscura
