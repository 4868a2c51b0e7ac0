#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <set>
#include <vector>

#include "obscura/brute.hpp"
#include "obscura/check.hpp"
#include "obscura/envgen.hpp"
#include "obscura/solver.hpp"

using namespace obscura;

namespace {

AttrValue av(Attribute a, const char* name) {
    return AttrValue{a, *AttributeCatalog::find_value(a, name)};
}

ObjectSpec obj(int id, const char* color, const char* shape, const char* size,
               const char* material, std::uint8_t region) {
    ObjectSpec o;
    o.id = id;
    o.color = *AttributeCatalog::find_value(Attribute::Color, color);
    o.shape = *AttributeCatalog::find_value(Attribute::Shape, shape);
    o.size = *AttributeCatalog::find_value(Attribute::Size, size);
    o.material = *AttributeCatalog::find_value(Attribute::Material, material);
    o.region = region;
    return o;
}

SceneGraph partial_of(std::vector<ObjectSpec> objects) {
    SceneGraph s;
    s.completeness = Completeness::Partial;
    s.objects = std::move(objects);
    return s;
}

std::vector<int> indices_of(const std::vector<HiddenCandidate>& hs) {
    std::vector<int> out;
    for (const HiddenCandidate& h : hs) out.push_back(candidate_index(h));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("candidate indexing is a bijection", "[solver]") {
    std::set<std::array<std::uint8_t, 5>> seen;
    for (int idx = 0; idx < kHiddenCandidateCount; ++idx) {
        HiddenCandidate h = candidate_from_index(idx);
        REQUIRE(candidate_index(h) == idx);
        REQUIRE(h.color < 8);
        REQUIRE(h.shape < 4);
        REQUIRE(h.size < 3);
        REQUIRE(h.material < 2);
        REQUIRE(h.region < 4);
        seen.insert({h.color, h.shape, h.size, h.material, h.region});
    }
    REQUIRE(seen.size() == static_cast<std::size_t>(kHiddenCandidateCount));
}

TEST_CASE("empty scene and environment admit the full grid", "[solver]") {
    REQUIRE(enumerate_hidden_candidates(partial_of({}), Environment{}).size() == 768);
}

TEST_CASE("per-object rules prune the grid", "[solver]") {
    Environment env;
    env.constraints = {make_negation(0, av(Attribute::Color, "red"))};
    // red in region 0 is out: 4 shapes x 3 sizes x 2 materials = 24 candidates
    REQUIRE(enumerate_hidden_candidates(partial_of({}), env).size() == 768 - 24);

    Environment restrict;
    restrict.constraints = {make_value_restriction(2, av(Attribute::Size, "medium"))};
    // region 2 keeps only medium: of its 192 candidates, 64 stay
    REQUIRE(enumerate_hidden_candidates(partial_of({}), restrict).size() == 768 - 192 + 64);
}

TEST_CASE("visible duplicates and capacity prune the grid", "[solver]") {
    // one visible object forbids its four-property twin in every region
    SceneGraph one = partial_of({obj(0, "green", "cube", "medium", "rubber", 0)});
    REQUIRE(enumerate_hidden_candidates(one, Environment{}).size() == 768 - 4);

    // a full region excludes all its candidates; twins overlap that exclusion
    SceneGraph full = partial_of({obj(0, "red", "cube", "small", "metal", 1),
                                  obj(1, "blue", "cone", "large", "rubber", 1),
                                  obj(2, "green", "sphere", "medium", "metal", 1)});
    REQUIRE(enumerate_hidden_candidates(full, Environment{}).size() == 768 - 192 - 9);
}

TEST_CASE("exact counts cut both ways", "[solver]") {
    Environment env;
    env.constraints = {make_exactly_n(0, av(Attribute::Color, "red"), 1)};
    // no visible red in region 0, so the hidden object must supply it
    std::vector<HiddenCandidate> forced = enumerate_hidden_candidates(partial_of({}), env);
    REQUIRE(forced.size() == 24);
    for (const HiddenCandidate& h : forced) {
        REQUIRE(h.region == 0);
        REQUIRE(h.color == *AttributeCatalog::find_value(Attribute::Color, "red"));
    }

    // quota already met: the hidden object must not add another
    SceneGraph met = partial_of({obj(0, "red", "cube", "small", "metal", 0)});
    std::vector<HiddenCandidate> spare = enumerate_hidden_candidates(met, env);
    for (const HiddenCandidate& h : spare)
        REQUIRE(!(h.region == 0 &&
                  h.color == *AttributeCatalog::find_value(Attribute::Color, "red")));
}

TEST_CASE("unsatisfiable visible side yields nothing", "[solver]") {
    Environment env;
    env.constraints = {make_negation(1, av(Attribute::Material, "rubber"))};
    SceneGraph bad = partial_of({obj(0, "red", "cube", "small", "rubber", 1)});
    REQUIRE(enumerate_hidden_candidates(bad, env).empty());
}

TEST_CASE("scene size disagreement is an error", "[solver]") {
    Environment env;
    env.object_count = 7;
    SceneGraph three = partial_of({obj(0, "red", "cube", "small", "metal", 0),
                                   obj(1, "blue", "cone", "large", "rubber", 1),
                                   obj(2, "green", "sphere", "medium", "metal", 2)});
    REQUIRE_THROWS_AS(enumerate_hidden_candidates(three, env), std::invalid_argument);
    env.object_count = 4;
    REQUIRE_NOTHROW(enumerate_hidden_candidates(three, env));
}

TEST_CASE("question variables bind distinct visible objects", "[solver]") {
    QuestionForm q;
    q.query_attribute = Attribute::Size;
    q.var_count = 3;
    q.properties = {{1, av(Attribute::Color, "blue")}, {2, av(Attribute::Color, "blue")}};
    q.same_properties = {{0, 1, Attribute::Shape}};
    q.relations = {{Relation::Right, 2, 0}};
    normalize_question(q);

    // only one blue object: Y and Z cannot both bind
    SceneGraph one_blue = partial_of({obj(0, "blue", "cube", "small", "metal", 0),
                                      obj(1, "red", "cone", "large", "rubber", 1)});
    one_blue.objects[0].position = Vec2{-1.0, -1.0};
    one_blue.objects[1].position = Vec2{1.5, -2.0};
    one_blue.relations = relations_from_positions(one_blue.objects);
    REQUIRE(enumerate_hidden_candidates(one_blue, Environment{}, &q).empty());

    SceneGraph two_blue = one_blue;
    two_blue.objects[1].color = *AttributeCatalog::find_value(Attribute::Color, "blue");
    REQUIRE_FALSE(enumerate_hidden_candidates(two_blue, Environment{}, &q).empty());
}

TEST_CASE("relations to the hidden object read through the region topology", "[solver]") {
    // X hidden, Y the single visible object in region 3; X right of Y
    QuestionForm q;
    q.query_attribute = Attribute::Color;
    q.var_count = 2;
    q.properties = {{1, av(Attribute::Shape, "cube")}};
    q.relations = {{Relation::Right, 1, 0}};
    q.inequalities = {{0, 1}};
    normalize_question(q);

    SceneGraph s = partial_of({obj(0, "red", "cube", "small", "metal", 3)});
    s.objects[0].position = Vec2{1.0, 1.0};
    s.relations = relations_from_positions(s.objects);

    std::vector<HiddenCandidate> hs = enumerate_hidden_candidates(s, Environment{}, &q);
    REQUIRE_FALSE(hs.empty());
    std::set<int> regions;
    for (const HiddenCandidate& h : hs) regions.insert(h.region);
    // right of a region-3 object: positive x only
    REQUIRE(regions == std::set<int>{1, 3});

    // flip the direction: left of a region-3 object can be anywhere
    QuestionForm left = q;
    left.relations = {{Relation::Left, 1, 0}};
    std::set<int> left_regions;
    for (const HiddenCandidate& h : enumerate_hidden_candidates(s, Environment{}, &left))
        left_regions.insert(h.region);
    REQUIRE(left_regions == std::set<int>{0, 1, 2, 3});
}

TEST_CASE("enumeration matches the direct grind", "[solver]") {
    GenerationConfig cfg;
    cfg.master_seed = 4242;
    std::vector<Environment> pool;
    for (int i = 0; i < 6; ++i)
        pool.push_back(generate_environment(
            cfg, derive_seed(cfg.master_seed, 0x454E5600u + static_cast<std::uint64_t>(i))));

    Rng rng(0x534f4c56u);
    int checked = 0;
    for (int round = 0; round < 60; ++round) {
        const Environment& env = pool[static_cast<std::size_t>(round % 6)];
        int n = rng.uniform_int(cfg.object_count_min, cfg.object_count_max);
        SearchBudget budget;
        budget.seed = derive_seed(777, static_cast<std::uint64_t>(round));
        std::optional<SceneGraph> scene = sample_scene(env, n, budget);
        if (!scene) continue;

        SceneGraph partial = *scene;
        partial.completeness = Completeness::Partial;
        std::size_t drop = static_cast<std::size_t>(rng.uniform_int(0, n - 1));
        partial.hidden_ref = partial.objects[drop].id;
        partial.objects.erase(partial.objects.begin() + static_cast<std::ptrdiff_t>(drop));
        // survivors are reindexed, as in make_partial: ids must stay 0..n-2
        for (std::size_t i = 0; i < partial.objects.size(); ++i)
            partial.objects[i].id = static_cast<int>(i);
        partial.relations = relations_from_positions(partial.objects);
        Environment no_size = env;
        no_size.object_count.reset();

        REQUIRE(indices_of(enumerate_hidden_candidates(partial, no_size)) ==
                indices_of(naive::hidden_candidates(partial, no_size, nullptr)));

        // a small question over one reference object
        const ObjectSpec& ref = partial.objects[0];
        QuestionForm q;
        q.query_attribute = kAttributes[static_cast<std::size_t>(rng.uniform_int(0, 3))];
        q.var_count = 2;
        Attribute ground = kAttributes[static_cast<std::size_t>(rng.uniform_int(0, 3))];
        q.properties = {{1, AttrValue{ground, ref.value(ground)}}};
        if (rng.bernoulli(0.5)) {
            Attribute shared;
            do {
                shared = kAttributes[static_cast<std::size_t>(rng.uniform_int(0, 3))];
            } while (shared == q.query_attribute);
            q.same_properties = {{0, 1, shared}};
        } else {
            Relation rel = kRelations[static_cast<std::size_t>(rng.uniform_int(0, 3))];
            q.relations = {{rel, 1, 0}};
            q.inequalities = {{0, 1}};
        }
        normalize_question(q);
        REQUIRE(indices_of(enumerate_hidden_candidates(partial, no_size, &q)) ==
                indices_of(naive::hidden_candidates(partial, no_size, &q)));
        ++checked;
    }
    REQUIRE(checked >= 40);
}

TEST_CASE("scene sampling is deterministic and sound", "[solver]") {
    GenerationConfig cfg;
    cfg.master_seed = 31337;
    Environment env = generate_environment(cfg, derive_seed(cfg.master_seed, 0x454E5600u));

    SearchBudget budget;
    budget.seed = 555;
    std::optional<SceneGraph> a = sample_scene(env, 6, budget);
    std::optional<SceneGraph> b = sample_scene(env, 6, budget);
    REQUIRE(a);
    REQUIRE(b);
    REQUIRE(a->object_count() == 6);
    REQUIRE(a->objects.size() == b->objects.size());
    for (std::size_t i = 0; i < a->objects.size(); ++i) {
        REQUIRE(a->objects[i] == b->objects[i]);
        REQUIRE(a->objects[i].position);
        REQUIRE(region_of_position(*a->objects[i].position) == a->objects[i].region);
    }
    REQUIRE(a->relations == b->relations);
    REQUIRE(a->relations == relations_from_positions(a->objects));
    REQUIRE(check_scene(*a, env).satisfied());

    REQUIRE_THROWS_AS(sample_scene(env, 13, budget), std::invalid_argument);
    REQUIRE_THROWS_AS(sample_scene(env, 0, budget), std::invalid_argument);
}
