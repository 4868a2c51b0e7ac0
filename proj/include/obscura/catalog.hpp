#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace obscura {

enum class Attribute : std::uint8_t { Color = 0, Shape = 1, Size = 2, Material = 3 };

inline constexpr int kAttributeCount = 4;

/// Fixed iteration order; doubles as the tie-break order wherever one attribute
/// must be chosen among equals.
inline constexpr std::array<Attribute, kAttributeCount> kAttributes{
    Attribute::Color, Attribute::Shape, Attribute::Size, Attribute::Material};

inline constexpr std::array<std::string_view, kAttributeCount> kAttributeNames{
    "color", "shape", "size", "material"};

inline constexpr std::array<std::string_view, 8> kColorNames{
    "gray", "red", "blue", "green", "brown", "purple", "cyan", "yellow"};
inline constexpr std::array<std::string_view, 4> kShapeNames{
    "cube", "cylinder", "sphere", "cone"};
inline constexpr std::array<std::string_view, 3> kSizeNames{
    "small", "medium", "large"};
inline constexpr std::array<std::string_view, 2> kMaterialNames{
    "rubber", "metal"};

struct AttrValue {
    Attribute attr{};
    std::uint8_t value{};

    bool operator==(const AttrValue&) const = default;
};

/// The closed attribute ontology. Value sets are disjoint across attributes,
/// which is what lets a bare value name identify its attribute.
struct AttributeCatalog {
    static constexpr int value_count(Attribute a) {
        switch (a) {
            case Attribute::Color: return static_cast<int>(kColorNames.size());
            case Attribute::Shape: return static_cast<int>(kShapeNames.size());
            case Attribute::Size: return static_cast<int>(kSizeNames.size());
            case Attribute::Material: return static_cast<int>(kMaterialNames.size());
        }
        return 0;
    }

    static constexpr std::string_view value_name(Attribute a, std::uint8_t v) {
        switch (a) {
            case Attribute::Color: return kColorNames[v];
            case Attribute::Shape: return kShapeNames[v];
            case Attribute::Size: return kSizeNames[v];
            case Attribute::Material: return kMaterialNames[v];
        }
        return {};
    }

    static constexpr std::string_view attribute_name(Attribute a) {
        return kAttributeNames[static_cast<std::size_t>(a)];
    }

    static std::optional<Attribute> find_attribute(std::string_view name) {
        for (int i = 0; i < kAttributeCount; ++i)
            if (kAttributeNames[static_cast<std::size_t>(i)] == name)
                return static_cast<Attribute>(i);
        return std::nullopt;
    }

    static std::optional<std::uint8_t> find_value(Attribute a, std::string_view name) {
        for (int v = 0; v < value_count(a); ++v)
            if (value_name(a, static_cast<std::uint8_t>(v)) == name)
                return static_cast<std::uint8_t>(v);
        return std::nullopt;
    }

    /// Resolves a bare value name to its (attribute, value) pair.
    static std::optional<AttrValue> find_value_any(std::string_view name) {
        for (Attribute a : kAttributes)
            if (auto v = find_value(a, name))
                return AttrValue{a, *v};
        return std::nullopt;
    }
};

inline std::string attr_value_name(const AttrValue& av) {
    return std::string(AttributeCatalog::value_name(av.attr, av.value));
}

// ---------------------------------------------------------------------------
// Regions and spatial relations.

enum class Relation : std::uint8_t { Left = 0, Right = 1, Front = 2, Behind = 3 };

inline constexpr int kRegionCount = 4;
inline constexpr std::array<Relation, 4> kRelations{
    Relation::Left, Relation::Right, Relation::Front, Relation::Behind};
inline constexpr std::array<std::string_view, 4> kRelationNames{
    "left", "right", "front", "behind"};

constexpr Relation inverse(Relation r) {
    switch (r) {
        case Relation::Left: return Relation::Right;
        case Relation::Right: return Relation::Left;
        case Relation::Front: return Relation::Behind;
        case Relation::Behind: return Relation::Front;
    }
    return r;
}

constexpr std::string_view relation_name(Relation r) {
    return kRelationNames[static_cast<std::size_t>(r)];
}

inline std::optional<Relation> find_relation(std::string_view name) {
    for (int i = 0; i < 4; ++i)
        if (kRelationNames[static_cast<std::size_t>(i)] == name)
            return static_cast<Relation>(i);
    return std::nullopt;
}

/// Set of regions as a 4-bit mask; bit r set means region r is in the set.
using RegionSet = std::uint8_t;

inline constexpr RegionSet kAllRegions = 0b1111;

constexpr bool region_set_contains(RegionSet s, int region) {
    return (s >> region) & 1;
}

inline std::vector<std::uint8_t> region_set_values(RegionSet s) {
    std::vector<std::uint8_t> out;
    for (int r = 0; r < kRegionCount; ++r)
        if (region_set_contains(s, r)) out.push_back(static_cast<std::uint8_t>(r));
    return out;
}

namespace detail {

// Base facts of the region topology. rightFacts[s] holds the regions that can
// contain an object lying to the right of an object in region s; frontFacts
// likewise for "in front of". Both are reflexive.
inline constexpr std::array<RegionSet, kRegionCount> kRightFacts{
    0b1111,  // region 0: right of it may fall anywhere
    0b1010,  // region 1: only regions 1, 3
    0b1111,  // region 2
    0b1010,  // region 3: only regions 1, 3
};
inline constexpr std::array<RegionSet, kRegionCount> kFrontFacts{
    0b1111,  // region 0
    0b1111,  // region 1
    0b1100,  // region 2: only regions 2, 3
    0b1100,  // region 3
};

// left and behind are the inverses: r may hold something left of s exactly
// when s may hold something right of r.
constexpr std::array<RegionSet, kRegionCount> invert(
    const std::array<RegionSet, kRegionCount>& facts) {
    std::array<RegionSet, kRegionCount> out{};
    for (int s = 0; s < kRegionCount; ++s)
        for (int r = 0; r < kRegionCount; ++r)
            if (region_set_contains(facts[static_cast<std::size_t>(r)], s))
                out[static_cast<std::size_t>(s)] =
                    static_cast<RegionSet>(out[static_cast<std::size_t>(s)] | (1u << r));
    return out;
}

inline constexpr std::array<RegionSet, kRegionCount> kLeftFacts = invert(kRightFacts);
inline constexpr std::array<RegionSet, kRegionCount> kBehindFacts = invert(kFrontFacts);

}  // namespace detail

/// Regions that can host an object standing in `rel` to an object in
/// `sourceRegion`. This is the whole spatial theory of the domain; positions
/// only ever refine it.
constexpr RegionSet region_relation(Relation rel, int sourceRegion) {
    switch (rel) {
        case Relation::Right: return detail::kRightFacts[static_cast<std::size_t>(sourceRegion)];
        case Relation::Front: return detail::kFrontFacts[static_cast<std::size_t>(sourceRegion)];
        case Relation::Left: return detail::kLeftFacts[static_cast<std::size_t>(sourceRegion)];
        case Relation::Behind: return detail::kBehindFacts[static_cast<std::size_t>(sourceRegion)];
    }
    return 0;
}

}  // namespace obscura
