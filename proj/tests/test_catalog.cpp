#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <string>

#include "obscura/catalog.hpp"

using namespace obscura;

TEST_CASE("attribute value counts", "[catalog]") {
    REQUIRE(AttributeCatalog::value_count(Attribute::Color) == 8);
    REQUIRE(AttributeCatalog::value_count(Attribute::Shape) == 4);
    REQUIRE(AttributeCatalog::value_count(Attribute::Size) == 3);
    REQUIRE(AttributeCatalog::value_count(Attribute::Material) == 2);
}

TEST_CASE("attribute order is color, shape, size, material", "[catalog]") {
    REQUIRE(kAttributes[0] == Attribute::Color);
    REQUIRE(kAttributes[1] == Attribute::Shape);
    REQUIRE(kAttributes[2] == Attribute::Size);
    REQUIRE(kAttributes[3] == Attribute::Material);
}

TEST_CASE("value names are unique across all attributes", "[catalog]") {
    std::set<std::string> seen;
    for (Attribute a : kAttributes)
        for (int v = 0; v < AttributeCatalog::value_count(a); ++v)
            REQUIRE(seen.insert(std::string(AttributeCatalog::value_name(
                                    a, static_cast<std::uint8_t>(v))))
                        .second);
    REQUIRE(seen.size() == 17);
}

TEST_CASE("find_value and find_value_any agree", "[catalog]") {
    for (Attribute a : kAttributes)
        for (int v = 0; v < AttributeCatalog::value_count(a); ++v) {
            std::string name(AttributeCatalog::value_name(a, static_cast<std::uint8_t>(v)));
            auto direct = AttributeCatalog::find_value(a, name);
            REQUIRE(direct);
            REQUIRE(*direct == v);
            auto any = AttributeCatalog::find_value_any(name);
            REQUIRE(any);
            REQUIRE(any->attr == a);
            REQUIRE(any->value == v);
        }
    REQUIRE_FALSE(AttributeCatalog::find_value(Attribute::Color, "sphere"));
    REQUIRE_FALSE(AttributeCatalog::find_value_any("banana"));
}

TEST_CASE("relation inverses", "[catalog]") {
    REQUIRE(inverse(Relation::Left) == Relation::Right);
    REQUIRE(inverse(Relation::Right) == Relation::Left);
    REQUIRE(inverse(Relation::Front) == Relation::Behind);
    REQUIRE(inverse(Relation::Behind) == Relation::Front);
}

namespace {

// Independent derivation of the region topology from the quadrant layout.
// Region r occupies a fixed sign pair (sx, sy); an object in region b can
// stand to the right of one in region a iff some x_b > x_a is compatible
// with both sign classes, i.e. unless b is in the negative-x half while a
// is in the positive-x half. Same for front along y.
bool x_positive(int region) { return region == 1 || region == 3; }
bool y_positive(int region) { return region == 2 || region == 3; }

bool can_hold(Relation rel, int source, int host) {
    switch (rel) {
        case Relation::Right: return x_positive(host) || !x_positive(source);
        case Relation::Left: return !x_positive(host) || x_positive(source);
        case Relation::Front: return y_positive(host) || !y_positive(source);
        case Relation::Behind: return !y_positive(host) || y_positive(source);
    }
    return false;
}

}  // namespace

TEST_CASE("region_relation matches the quadrant sign rule", "[catalog]") {
    for (Relation rel : kRelations)
        for (int src = 0; src < kRegionCount; ++src) {
            RegionSet set = region_relation(rel, src);
            for (int host = 0; host < kRegionCount; ++host)
                REQUIRE(region_set_contains(set, static_cast<std::uint8_t>(host)) ==
                        can_hold(rel, src, host));
        }
}

TEST_CASE("region_relation fixed points", "[catalog]") {
    REQUIRE(region_set_values(region_relation(Relation::Right, 1)) ==
            std::vector<std::uint8_t>{1, 3});
    REQUIRE(region_set_values(region_relation(Relation::Front, 2)) ==
            std::vector<std::uint8_t>{2, 3});
    REQUIRE(region_set_values(region_relation(Relation::Behind, 0)) ==
            std::vector<std::uint8_t>{0, 1});
    REQUIRE(region_set_values(region_relation(Relation::Right, 0)) ==
            std::vector<std::uint8_t>{0, 1, 2, 3});
}

TEST_CASE("region_relation is reflexive and inverse-consistent", "[catalog]") {
    for (Relation rel : kRelations)
        for (int r = 0; r < kRegionCount; ++r)
            REQUIRE(region_set_contains(region_relation(rel, r), static_cast<std::uint8_t>(r)));
    // host can stand rel to source iff source can stand inverse(rel) to host
    for (Relation rel : kRelations)
        for (int src = 0; src < kRegionCount; ++src)
            for (int host = 0; host < kRegionCount; ++host)
                REQUIRE(region_set_contains(region_relation(rel, src),
                                            static_cast<std::uint8_t>(host)) ==
                        region_set_contains(region_relation(inverse(rel), host),
                                            static_cast<std::uint8_t>(src)));
}
