#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "obscura/catalog.hpp"
#include "obscura/error.hpp"

namespace obscura {

struct Vec2 {
    double x{};
    double y{};

    bool operator==(const Vec2&) const = default;
};

struct ObjectSpec {
    int id{};
    std::uint8_t color{};
    std::uint8_t shape{};
    std::uint8_t size{};
    std::uint8_t material{};
    std::uint8_t region{};
    std::optional<Vec2> position;

    std::uint8_t value(Attribute a) const {
        switch (a) {
            case Attribute::Color: return color;
            case Attribute::Shape: return shape;
            case Attribute::Size: return size;
            case Attribute::Material: return material;
        }
        return 0;
    }

    void set_value(Attribute a, std::uint8_t v) {
        switch (a) {
            case Attribute::Color: color = v; break;
            case Attribute::Shape: shape = v; break;
            case Attribute::Size: size = v; break;
            case Attribute::Material: material = v; break;
        }
    }

    bool same_four_properties(const ObjectSpec& other) const {
        return color == other.color && shape == other.shape && size == other.size &&
               material == other.material;
    }

    bool operator==(const ObjectSpec&) const = default;
};

/// relations[rel][i] lists the ids of objects standing in `rel` to object i,
/// ascending. So j in relations[Right][i] reads: j is to the right of i.
using RelationLists = std::array<std::vector<std::vector<int>>, 4>;

inline const std::vector<std::vector<int>>& relation_lists(const RelationLists& r, Relation rel) {
    return r[static_cast<std::size_t>(rel)];
}

enum class Completeness : std::uint8_t { Complete, Partial };

struct SceneGraph {
    std::vector<ObjectSpec> objects;
    RelationLists relations{};
    Completeness completeness = Completeness::Complete;
    /// Original id of the removed object, present on partial scenes.
    std::optional<int> hidden_ref;

    int object_count() const { return static_cast<int>(objects.size()); }

    bool operator==(const SceneGraph&) const = default;
};

// ---------------------------------------------------------------------------
// Ground-plane geometry. The plane is split into quadrants around the origin;
// +x is "right", +y is "front".

inline constexpr double kPositionMin = 0.3;   // per-axis distance from the origin
inline constexpr double kPositionMax = 3.0;
inline constexpr double kMinSeparation = 0.4;
inline constexpr double kAxisEpsilon = 1e-6;

constexpr std::uint8_t region_of_position(Vec2 p) {
    if (p.y < 0) return p.x < 0 ? 0 : 1;
    return p.x < 0 ? 2 : 3;
}

struct Box {
    double x_lo, x_hi, y_lo, y_hi;
};

/// Sampling box for a region, clear of both axes so region membership is
/// never ambiguous.
constexpr Box quadrant_box(int region) {
    double x_lo = (region == 0 || region == 2) ? -kPositionMax : kPositionMin;
    double x_hi = (region == 0 || region == 2) ? -kPositionMin : kPositionMax;
    double y_lo = (region == 0 || region == 1) ? -kPositionMax : kPositionMin;
    double y_hi = (region == 0 || region == 1) ? -kPositionMin : kPositionMax;
    return Box{x_lo, x_hi, y_lo, y_hi};
}

/// Derives the four relation lists from object positions by coordinate
/// comparison: j is right of i iff x_j > x_i, j is in front of i iff y_j > y_i.
/// Throws DegeneratePositionError if a position is missing or two objects
/// (nearly) coincide on an axis.
inline RelationLists relations_from_positions(const std::vector<ObjectSpec>& objects) {
    const std::size_t n = objects.size();
    for (const ObjectSpec& o : objects)
        if (!o.position)
            throw DegeneratePositionError("object " + std::to_string(o.id) + " has no position");

    RelationLists out;
    for (auto& lists : out) lists.assign(n, {});

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const Vec2 a = *objects[i].position;
            const Vec2 b = *objects[j].position;
            if (std::abs(a.x - b.x) <= kAxisEpsilon || std::abs(a.y - b.y) <= kAxisEpsilon)
                throw DegeneratePositionError(
                    "objects " + std::to_string(objects[i].id) + " and " +
                    std::to_string(objects[j].id) + " share an axis coordinate");
            if (j < i) continue;
            Relation x_rel = b.x > a.x ? Relation::Right : Relation::Left;
            Relation y_rel = b.y > a.y ? Relation::Front : Relation::Behind;
            // b stands in x_rel/y_rel to a; a stands in the inverses to b.
            out[static_cast<std::size_t>(x_rel)][i].push_back(objects[j].id);
            out[static_cast<std::size_t>(inverse(x_rel))][j].push_back(objects[i].id);
            out[static_cast<std::size_t>(y_rel)][i].push_back(objects[j].id);
            out[static_cast<std::size_t>(inverse(y_rel))][j].push_back(objects[i].id);
        }
    }
    // Ids equal indices in generated scenes, but keep the lists sorted even if
    // a caller hands us reordered ids.
    for (auto& lists : out)
        for (auto& ids : lists) std::sort(ids.begin(), ids.end());
    return out;
}

}  // namespace obscura
