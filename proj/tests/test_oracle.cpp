#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <string>
#include <vector>

#include "obscura/brute.hpp"
#include "obscura/oracle.hpp"
#include "obscura/parse.hpp"
#include "obscura/qgen.hpp"
#include "obscura/scenegen.hpp"

using namespace obscura;

namespace {

const char* kEnvText = R"(
object(0..4).
:- object(X), at(X, 0), hasProperty(X, size, large).
:- object(X), at(X, 0), hasProperty(X, shape, cylinder).
:- object(X), at(X, 0), hasProperty(X, shape, cone).
:- object(X), at(X, 1), hasProperty(X, size, small).
:- object(X), at(X, 1), hasProperty(X, shape, cone).
:- object(X), at(X, 1), hasProperty(X, material, rubber).
:- object(X), at(X, 1), hasProperty(X, shape, cube).
:- object(X), at(X, 2), not hasProperty(X, size, medium).
:- object(X), at(X, 2), not hasProperty(X, material, metal).
:- object(X), at(X, 2), hasProperty(X, material, rubber).
:- object(X), at(X, 2), hasProperty(X, shape, sphere).
:- object(X), at(X, 2), hasProperty(X, shape, cube).
:- object(X), at(X, 3), hasProperty(X, size, small).
:- object(X), at(X, 3), not hasProperty(X, material, metal), not hasProperty(X, color, blue).
:- #count{X1, X2: sameProperty(X1, X2, shape), object(X1), object(X2), at(X1, 3), at(X2, 2), hasProperty(X1, color, yellow), hasProperty(X2, color, yellow)} >= 4.
:- #count{X1, X2: sameProperty(X1, X2, color), object(X1), object(X2), at(X1, 0), at(X2, 3)} >= 2.
)";

const char* kQuestionText =
    "missing(Q) :- hasProperty(X,size,Q), hasProperty(X,material,rubber), "
    "hasProperty(X,color,red), hasProperty(Y,color,purple), hasProperty(Y,size,large), "
    "X!=Y, same_shape(Y,X).";

ObjectSpec placed(int id, const char* color, const char* shape, const char* size,
                  const char* material, double x, double y) {
    ObjectSpec o;
    o.id = id;
    o.color = *AttributeCatalog::find_value(Attribute::Color, color);
    o.shape = *AttributeCatalog::find_value(Attribute::Shape, shape);
    o.size = *AttributeCatalog::find_value(Attribute::Size, size);
    o.material = *AttributeCatalog::find_value(Attribute::Material, material);
    o.position = Vec2{x, y};
    o.region = region_of_position(*o.position);
    return o;
}

SceneGraph reference_partial() {
    SceneGraph partial;
    partial.completeness = Completeness::Partial;
    partial.objects = {
        placed(0, "green", "cube", "medium", "rubber", -2.0, -2.0),
        placed(1, "blue", "cylinder", "medium", "metal", 1.5, -1.5),
        placed(2, "gray", "cylinder", "medium", "metal", -1.8, 1.2),
        placed(3, "purple", "sphere", "large", "metal", 2.2, 2.4),
    };
    partial.relations = relations_from_positions(partial.objects);
    partial.hidden_ref = 4;
    return partial;
}

bool has_source(const std::vector<TraceSource>& ws, std::size_t idx) {
    return std::find(ws.begin(), ws.end(), TraceSource{idx}) != ws.end();
}

}  // namespace

TEST_CASE("reference solve, end to end", "[oracle]") {
    Environment env = parse_environment(kEnvText);
    QuestionForm q = parse_question(kQuestionText);
    SceneGraph partial = reference_partial();

    SolveResult result = solve(partial, env, q);
    REQUIRE(result.answers.attribute == Attribute::Size);
    REQUIRE(result.answers.value_names() == std::vector<std::string>{"small", "medium"});

    // the question fixes color and material outright and shape via sharing
    REQUIRE(result.trace.inferred.size() == 3);
    bool saw_red = false, saw_rubber = false, saw_sphere = false;
    for (const PropertyInference& inf : result.trace.inferred) {
        if (inf.attr == Attribute::Color)
            saw_red = inf.value == *AttributeCatalog::find_value(Attribute::Color, "red") &&
                      inf.note == "stated by the question";
        if (inf.attr == Attribute::Material)
            saw_rubber =
                inf.value == *AttributeCatalog::find_value(Attribute::Material, "rubber") &&
                inf.note == "stated by the question";
        if (inf.attr == Attribute::Shape)
            saw_sphere =
                inf.value == *AttributeCatalog::find_value(Attribute::Shape, "sphere") &&
                inf.note == "shared with the reference object";
    }
    REQUIRE(saw_red);
    REQUIRE(saw_rubber);
    REQUIRE(saw_sphere);

    // region verdicts: only region 0 survives, each elimination witnessed
    REQUIRE(result.trace.regions.size() == 4);
    REQUIRE(result.trace.regions[0].admitted);
    REQUIRE_FALSE(result.trace.regions[1].admitted);
    REQUIRE(has_source(result.trace.regions[1].witnesses, 5));  // no rubber in region 1
    REQUIRE_FALSE(result.trace.regions[2].admitted);
    REQUIRE(has_source(result.trace.regions[2].witnesses, 8));   // region 2 all metal
    REQUIRE(has_source(result.trace.regions[2].witnesses, 9));   // no rubber in region 2
    REQUIRE(has_source(result.trace.regions[2].witnesses, 10));  // no spheres in region 2
    REQUIRE_FALSE(result.trace.regions[3].admitted);
    REQUIRE(has_source(result.trace.regions[3].witnesses, 13));  // region 3 metal or blue

    // value verdicts: large is ruled out inside region 0
    REQUIRE(result.trace.values.size() == 3);
    for (const ValueVerdict& vv : result.trace.values) {
        if (vv.value == *AttributeCatalog::find_value(Attribute::Size, "large")) {
            REQUIRE_FALSE(vv.admitted);
            REQUIRE(has_source(vv.witnesses, 0));  // no large objects in region 0
        } else {
            REQUIRE(vv.admitted);
        }
    }

    // every surviving candidate is red, rubber, sphere, region 0
    REQUIRE_FALSE(result.candidates.empty());
    for (const HiddenCandidate& h : result.candidates) {
        REQUIRE(h.region == 0);
        REQUIRE(h.color == *AttributeCatalog::find_value(Attribute::Color, "red"));
        REQUIRE(h.material == *AttributeCatalog::find_value(Attribute::Material, "rubber"));
        REQUIRE(h.shape == *AttributeCatalog::find_value(Attribute::Shape, "sphere"));
    }
}

TEST_CASE("trace rendering narrates the eliminations", "[oracle]") {
    Environment env = parse_environment(kEnvText);
    QuestionForm q = parse_question(kQuestionText);
    SolveResult result = solve(reference_partial(), env, q);

    std::string text = render_trace(result, env, q);
    REQUIRE(text.find("Asked: the size of the hidden object.") != std::string::npos);
    REQUIRE(text.find("Known: its color is red (stated by the question).") != std::string::npos);
    REQUIRE(text.find("Known: its shape is sphere (shared with the reference object).") !=
            std::string::npos);
    REQUIRE(text.find("Region 0: possible.") != std::string::npos);
    REQUIRE(text.find("Region 1: ruled out by constraint 5 (\"There are no rubber material "
                      "objects in region 1.\").") != std::string::npos);
    REQUIRE(text.find("constraint 13 (\"All objects in region 3 have either metal material "
                      "or blue color.\")") != std::string::npos);
    REQUIRE(text.find("Value large: ruled out by constraint 0 (\"There are no large size "
                      "objects in region 0.\").") != std::string::npos);
    REQUIRE(text.find("Answer set: {small, medium}") != std::string::npos);
}

TEST_CASE("unsatisfiable questions raise", "[oracle]") {
    Environment env = parse_environment(kEnvText);
    SceneGraph partial = reference_partial();

    // left of and behind the green anchor (region 0) leaves only region 0,
    // where large is banned: no completion at all
    QuestionForm impossible = parse_question(
        "missing(Q) :- hasProperty(X, color, Q), hasProperty(X, size, large), "
        "hasProperty(Y, color, green), X != Y, left(Y, X), behind(Y, X).");
    REQUIRE_THROWS_AS(solve(partial, env, impossible), EmptyAnswerError);

    // the same shape of question with a satisfiable size still solves
    QuestionForm fine = parse_question(
        "missing(Q) :- hasProperty(X, color, Q), hasProperty(X, size, small), "
        "hasProperty(Y, color, green), X != Y, left(Y, X), behind(Y, X).");
    REQUIRE_NOTHROW(solve(partial, env, fine));
}

TEST_CASE("question-only eliminations get the question tag", "[oracle]") {
    // hidden right of a region-1 anchor: regions 0 and 2 are impossible from
    // the topology alone, no environment rule involved
    QuestionForm q;
    q.query_attribute = Attribute::Color;
    q.var_count = 2;
    q.properties = {{1, AttrValue{Attribute::Shape,
                                  *AttributeCatalog::find_value(Attribute::Shape, "cube")}}};
    q.relations = {{Relation::Right, 1, 0}};
    q.inequalities = {{0, 1}};
    normalize_question(q);

    SceneGraph partial;
    partial.completeness = Completeness::Partial;
    partial.objects = {placed(0, "red", "cube", "small", "metal", 1.0, -1.0)};
    partial.relations = relations_from_positions(partial.objects);

    SolveResult result = solve(partial, Environment{}, q);
    REQUIRE(result.trace.regions[0].admitted == false);
    REQUIRE(result.trace.regions[0].witnesses ==
            std::vector<TraceSource>{QuestionConstraintTag{}});
    REQUIRE(result.trace.regions[1].admitted);
    REQUIRE(result.trace.regions[2].admitted == false);
    REQUIRE(result.trace.regions[2].witnesses ==
            std::vector<TraceSource>{QuestionConstraintTag{}});
    REQUIRE(result.trace.regions[3].admitted);

    std::string text = render_trace(result, Environment{}, q);
    REQUIRE(text.find("Region 0: ruled out by the question constraints.") != std::string::npos);
}

TEST_CASE("solve agrees with the direct grind", "[oracle]") {
    GenerationConfig cfg;
    cfg.master_seed = 808;
    Environment env = generate_environment(cfg, derive_seed(cfg.master_seed, 0x454E5600u));

    int compared = 0;
    for (int round = 0; round < 40; ++round) {
        SceneGraph complete = generate_complete_scene(env, 5 + round % 5,
                                                      derive_seed(17, round));
        auto [partial, hidden] = make_partial(complete, derive_seed(18, round));
        Environment no_size = env;
        no_size.object_count.reset();

        for (std::uint64_t qs = 0; qs < 6; ++qs) {
            std::optional<InstantiatedQuestion> iq = instantiate_question(
                complete, hidden.id, kAttributes[static_cast<std::size_t>(qs % 4)],
                derive_seed(19, round * 16 + qs));
            if (!iq) continue;
            SolveResult via_solver = solve(partial, no_size, iq->form);
            AnswerSet via_grind = naive::brute_force_solve(partial, no_size, iq->form);
            REQUIRE(via_solver.answers == via_grind);
            REQUIRE(via_solver.answers.contains(hidden.value(iq->form.query_attribute)));
            ++compared;
        }
    }
    REQUIRE(compared >= 100);
}
