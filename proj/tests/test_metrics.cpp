#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "obscura/metrics.hpp"

using namespace obscura;

namespace {

AnswerSet answers(Attribute a, std::vector<const char*> names) {
    std::vector<std::uint8_t> vals;
    for (const char* n : names) vals.push_back(*AttributeCatalog::find_value(a, n));
    return make_answer_set(a, std::move(vals));
}

}  // namespace

TEST_CASE("prediction vocabulary covers the ontology", "[metrics]") {
    REQUIRE(kPredictionVocabulary.size() == 17);
    for (Attribute a : kAttributes)
        for (int v = 0; v < AttributeCatalog::value_count(a); ++v)
            REQUIRE(is_prediction_label(
                AttributeCatalog::value_name(a, static_cast<std::uint8_t>(v))));
    REQUIRE_FALSE(is_prediction_label("big"));
    REQUIRE_FALSE(is_prediction_label(""));
    REQUIRE_FALSE(is_prediction_label("region"));
}

TEST_CASE("jaccard and exact match", "[metrics]") {
    std::vector<std::string> ab{"medium", "small"};
    std::vector<std::string> a{"small"};
    std::vector<std::string> c{"large"};
    std::vector<std::string> none;

    REQUIRE(jaccard_index(ab, ab) == 1.0);
    REQUIRE(jaccard_index(ab, a) == 0.5);
    REQUIRE(jaccard_index(a, c) == 0.0);
    REQUIRE(jaccard_index(none, none) == 1.0);
    REQUIRE(jaccard_index(none, a) == 0.0);

    REQUIRE(exact_match(ab, ab));
    REQUIRE_FALSE(exact_match(ab, a));
    REQUIRE(exact_match(none, none));
}

TEST_CASE("prediction files parse leniently", "[metrics]") {
    std::vector<Prediction> ps = parse_predictions(
        "# id then labels\n"
        "0 small medium\n"
        "1, large\n"
        "\n"
        "2 Red,BLUE\n"
        "3\n");
    REQUIRE(ps.size() == 4);
    REQUIRE(ps[0].id == 0);
    REQUIRE(ps[0].values == std::vector<std::string>{"medium", "small"});
    REQUIRE(ps[1].id == 1);
    REQUIRE(ps[1].values == std::vector<std::string>{"large"});
    // case folds, commas split, duplicates collapse
    REQUIRE(ps[2].values == std::vector<std::string>{"blue", "red"});
    REQUIRE(ps[3].values.empty());

    REQUIRE(parse_predictions("4 small small small")[0].values ==
            std::vector<std::string>{"small"});
}

TEST_CASE("prediction files reject junk with line numbers", "[metrics]") {
    try {
        parse_predictions("0 small\nseven large\n");
        FAIL("expected an eval error");
    } catch (const EvalError& e) {
        REQUIRE(std::string(e.what()).find("line 2") != std::string::npos);
    }

    try {
        parse_predictions("0 small\n1 banana\n");
        FAIL("expected an eval error");
    } catch (const EvalError& e) {
        REQUIRE(std::string(e.what()).find("line 2") != std::string::npos);
        REQUIRE(std::string(e.what()).find("banana") != std::string::npos);
    }

    REQUIRE_THROWS_AS(parse_predictions("1x small\n"), EvalError);
}

TEST_CASE("evaluation grades instances and attributes", "[metrics]") {
    std::vector<std::pair<int, AnswerSet>> gold;
    gold.emplace_back(0, answers(Attribute::Size, {"small", "medium"}));
    gold.emplace_back(1, answers(Attribute::Size, {"large"}));
    gold.emplace_back(2, answers(Attribute::Color, {"red", "blue"}));

    std::vector<Prediction> ps = parse_predictions(
        "0 small medium\n"   // exact
        "1 small\n"          // disjoint
        "2 red\n");          // half right

    EvalResult r = evaluate(gold, ps);
    REQUIRE(r.per_instance.size() == 3);
    REQUIRE(r.per_instance[0].exact == 1.0);
    REQUIRE(r.per_instance[0].jaccard == 1.0);
    REQUIRE(r.per_instance[1].exact == 0.0);
    REQUIRE(r.per_instance[1].jaccard == 0.0);
    REQUIRE(r.per_instance[2].exact == 0.0);
    REQUIRE(r.per_instance[2].jaccard == 0.5);

    REQUIRE(r.exact_mean == Catch::Approx(1.0 / 3.0));
    REQUIRE(r.jaccard_mean == Catch::Approx(0.5));

    const AttributeEval& size_eval = r.by_attribute[static_cast<std::size_t>(Attribute::Size)];
    REQUIRE(size_eval.count == 2);
    REQUIRE(size_eval.exact_mean == Catch::Approx(0.5));
    REQUIRE(size_eval.jaccard_mean == Catch::Approx(0.5));
    const AttributeEval& color_eval =
        r.by_attribute[static_cast<std::size_t>(Attribute::Color)];
    REQUIRE(color_eval.count == 1);
    REQUIRE(color_eval.jaccard_mean == Catch::Approx(0.5));
    REQUIRE(r.by_attribute[static_cast<std::size_t>(Attribute::Shape)].count == 0);
}

TEST_CASE("evaluation demands aligned ids", "[metrics]") {
    std::vector<std::pair<int, AnswerSet>> gold;
    gold.emplace_back(0, answers(Attribute::Size, {"small"}));
    gold.emplace_back(1, answers(Attribute::Size, {"large"}));

    REQUIRE_THROWS_AS(evaluate(gold, parse_predictions("0 small\n")), EvalError);
    REQUIRE_THROWS_AS(evaluate(gold, parse_predictions("0 small\n1 large\n2 small\n")),
                      EvalError);
    REQUIRE_THROWS_AS(evaluate(gold, parse_predictions("0 small\n0 small\n1 large\n")),
                      EvalError);
    REQUIRE_NOTHROW(evaluate(gold, parse_predictions("1 large\n0 small\n")));
}

TEST_CASE("gold predictions score perfectly", "[metrics]") {
    std::vector<std::pair<int, AnswerSet>> gold;
    gold.emplace_back(7, answers(Attribute::Material, {"rubber", "metal"}));
    gold.emplace_back(9, answers(Attribute::Shape, {"cube", "cone", "sphere"}));

    std::string file;
    for (const auto& [id, ans] : gold) {
        file += std::to_string(id);
        for (const std::string& name : ans.value_names()) file += " " + name;
        file += "\n";
    }
    EvalResult r = evaluate(gold, parse_predictions(file));
    REQUIRE(r.exact_mean == 1.0);
    REQUIRE(r.jaccard_mean == 1.0);
}
