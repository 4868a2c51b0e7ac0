#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "obscura/rng.hpp"
#include "obscura/scene.hpp"

using namespace obscura;

namespace {

ObjectSpec make_obj(int id, double x, double y) {
    ObjectSpec o;
    o.id = id;
    o.position = Vec2{x, y};
    o.region = region_of_position(*o.position);
    return o;
}

std::vector<ObjectSpec> random_objects(Rng& rng, int n) {
    std::vector<ObjectSpec> out;
    for (int i = 0; i < n; ++i) {
        for (;;) {
            double x = rng.uniform_real(-kPositionMax, kPositionMax);
            double y = rng.uniform_real(-kPositionMax, kPositionMax);
            bool clash = false;
            for (const ObjectSpec& o : out)
                if (std::abs(o.position->x - x) < 1e-3 || std::abs(o.position->y - y) < 1e-3)
                    clash = true;
            if (clash) continue;
            out.push_back(make_obj(i, x, y));
            break;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("quadrant mapping of positions", "[scene]") {
    REQUIRE(region_of_position(Vec2{-1.0, -1.0}) == 0);
    REQUIRE(region_of_position(Vec2{1.0, -1.0}) == 1);
    REQUIRE(region_of_position(Vec2{-1.0, 1.0}) == 2);
    REQUIRE(region_of_position(Vec2{1.0, 1.0}) == 3);
    for (int r = 0; r < kRegionCount; ++r) {
        Box b = quadrant_box(r);
        REQUIRE(region_of_position(Vec2{b.x_lo, b.y_lo}) == r);
        REQUIRE(region_of_position(Vec2{b.x_hi, b.y_hi}) == r);
        REQUIRE(b.x_lo < b.x_hi);
        REQUIRE(b.y_lo < b.y_hi);
    }
}

TEST_CASE("relations from a hand-built arrangement", "[scene]") {
    // 0 at lower-left, 1 at lower-right, 2 at upper-left.
    std::vector<ObjectSpec> objs{
        make_obj(0, -2.0, -2.0),
        make_obj(1, 1.5, -1.5),
        make_obj(2, -1.8, 1.2),
    };
    RelationLists rel = relations_from_positions(objs);
    REQUIRE(relation_lists(rel, Relation::Right)[0] == std::vector<int>{1, 2});
    REQUIRE(relation_lists(rel, Relation::Right)[1] == std::vector<int>{});
    REQUIRE(relation_lists(rel, Relation::Right)[2] == std::vector<int>{1});
    REQUIRE(relation_lists(rel, Relation::Left)[1] == std::vector<int>{0, 2});
    REQUIRE(relation_lists(rel, Relation::Front)[0] == std::vector<int>{1, 2});
    REQUIRE(relation_lists(rel, Relation::Front)[1] == std::vector<int>{2});
    REQUIRE(relation_lists(rel, Relation::Behind)[2] == std::vector<int>{0, 1});
}

TEST_CASE("relations match pairwise coordinate comparison", "[scene]") {
    Rng rng(20260817);
    for (int round = 0; round < 50; ++round) {
        int n = rng.uniform_int(2, 10);
        std::vector<ObjectSpec> objs = random_objects(rng, n);
        RelationLists rel = relations_from_positions(objs);

        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                const Vec2 a = *objs[static_cast<std::size_t>(i)].position;
                const Vec2 b = *objs[static_cast<std::size_t>(j)].position;
                auto holds = [&](Relation r) {
                    const auto& ids = relation_lists(rel, r)[static_cast<std::size_t>(i)];
                    return std::find(ids.begin(), ids.end(), j) != ids.end();
                };
                REQUIRE(holds(Relation::Right) == (b.x > a.x));
                REQUIRE(holds(Relation::Left) == (b.x < a.x));
                REQUIRE(holds(Relation::Front) == (b.y > a.y));
                REQUIRE(holds(Relation::Behind) == (b.y < a.y));
            }

        // rows are sorted ascending and closed under inversion
        for (Relation r : kRelations)
            for (int i = 0; i < n; ++i) {
                const auto& ids = relation_lists(rel, r)[static_cast<std::size_t>(i)];
                REQUIRE(std::is_sorted(ids.begin(), ids.end()));
                for (int j : ids) {
                    const auto& back =
                        relation_lists(rel, inverse(r))[static_cast<std::size_t>(j)];
                    REQUIRE(std::find(back.begin(), back.end(), i) != back.end());
                }
            }
    }
}

TEST_CASE("degenerate positions are rejected", "[scene]") {
    std::vector<ObjectSpec> no_pos{ObjectSpec{}};
    REQUIRE_THROWS_AS(relations_from_positions(no_pos), DegeneratePositionError);

    std::vector<ObjectSpec> shared_x{make_obj(0, 1.0, -1.0), make_obj(1, 1.0, 2.0)};
    REQUIRE_THROWS_AS(relations_from_positions(shared_x), DegeneratePositionError);

    std::vector<ObjectSpec> shared_y{make_obj(0, -1.0, 2.0), make_obj(1, 1.5, 2.0)};
    REQUIRE_THROWS_AS(relations_from_positions(shared_y), DegeneratePositionError);
}

TEST_CASE("object attribute accessors round trip", "[scene]") {
    ObjectSpec o;
    o.set_value(Attribute::Color, 5);
    o.set_value(Attribute::Shape, 2);
    o.set_value(Attribute::Size, 1);
    o.set_value(Attribute::Material, 0);
    REQUIRE(o.value(Attribute::Color) == 5);
    REQUIRE(o.value(Attribute::Shape) == 2);
    REQUIRE(o.value(Attribute::Size) == 1);
    REQUIRE(o.value(Attribute::Material) == 0);

    ObjectSpec p = o;
    p.id = 9;
    p.region = 3;
    REQUIRE(o.same_four_properties(p));
    p.set_value(Attribute::Size, 2);
    REQUIRE_FALSE(o.same_four_properties(p));
}
