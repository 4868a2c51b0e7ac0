#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <set>
#include <string>

#include "obscura/dataset.hpp"
#include "obscura/oracle.hpp"
#include "obscura/stats.hpp"

using namespace obscura;
namespace fs = std::filesystem;

namespace {

GenerationConfig small_config() {
    GenerationConfig cfg;
    cfg.environment_count = 4;
    cfg.master_seed = 20260817;
    return cfg;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const char* tag) {
        path = fs::temp_directory_path() / (std::string("obscura_test_") + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("generated instances satisfy the dataset invariants", "[dataset]") {
    GenerationConfig cfg = small_config();
    GeneratedDataset ds = generate_dataset(cfg, 24);
    REQUIRE(ds.environments.size() == 4);
    REQUIRE(ds.instances.size() == 24);

    for (std::size_t i = 0; i < ds.instances.size(); ++i) {
        const DatasetInstance& inst = ds.instances[i];
        REQUIRE(inst.id == static_cast<int>(i));
        // environments rotate round-robin
        REQUIRE(inst.environment.id == static_cast<int>(i % 4));
        REQUIRE(inst.environment == ds.environments[i % 4]);

        // scene sizes inside the configured band, partial one short
        REQUIRE(inst.complete.object_count() >= cfg.object_count_min);
        REQUIRE(inst.complete.object_count() <= cfg.object_count_max);
        REQUIRE(inst.partial.object_count() == inst.complete.object_count() - 1);
        REQUIRE(inst.partial.hidden_ref == inst.hidden.id);
        REQUIRE(reassemble(inst.partial, inst.hidden) == inst.complete);

        // the question is valid: a proper nonempty answer set holding the truth
        const QuestionRecord& q = inst.question;
        int domain = AttributeCatalog::value_count(q.form.query_attribute);
        REQUIRE(q.answers.attribute == q.form.query_attribute);
        REQUIRE(q.answers.values.size() >= 1);
        REQUIRE(static_cast<int>(q.answers.values.size()) < domain);
        REQUIRE(q.ground_truth == inst.hidden.value(q.form.query_attribute));
        REQUIRE(q.answers.contains(q.ground_truth));

        // stored answers match a fresh solve
        SolveResult again = solve(inst.partial, inst.environment, q.form);
        REQUIRE(again.answers == q.answers);
    }
}

TEST_CASE("query attributes follow the configured mix", "[dataset]") {
    GenerationConfig cfg = small_config();
    GeneratedDataset ds = generate_dataset(cfg, 40);
    std::array<int, kAttributeCount> counts{};
    for (const DatasetInstance& inst : ds.instances)
        ++counts[static_cast<std::size_t>(inst.question.form.query_attribute)];
    // 40/40/10/10 over 40 instances, with at most a question of slack for
    // environments that cannot ground a particular attribute
    REQUIRE(counts[0] >= 15);
    REQUIRE(counts[1] >= 15);
    REQUIRE(counts[2] >= 3);
    REQUIRE(counts[3] >= 3);
    REQUIRE(counts[0] + counts[1] + counts[2] + counts[3] == 40);
}

TEST_CASE("generation is reproducible", "[dataset]") {
    GenerationConfig cfg = small_config();
    GeneratedDataset a = generate_dataset(cfg, 12);
    GeneratedDataset b = generate_dataset(cfg, 12);
    REQUIRE(a.environments == b.environments);
    REQUIRE(a.instances == b.instances);

    GenerationConfig other = cfg;
    other.master_seed += 1;
    GeneratedDataset c = generate_dataset(other, 12);
    REQUIRE_FALSE(a.instances == c.instances);
}

TEST_CASE("instances round trip through json", "[dataset]") {
    GeneratedDataset ds = generate_dataset(small_config(), 6);
    for (const DatasetInstance& inst : ds.instances) {
        nlohmann::ordered_json j = instance_to_json(inst);
        DatasetInstance back = instance_from_json(j);
        REQUIRE(back == inst);
        // serialization is stable, not merely equivalent
        REQUIRE(instance_to_json(back).dump() == j.dump());
    }
}

TEST_CASE("instance files survive a disk round trip", "[dataset]") {
    TempDir dir("roundtrip");
    GeneratedDataset ds = generate_dataset(small_config(), 3);
    for (const DatasetInstance& inst : ds.instances) {
        fs::path p = dir.path / ("instance_" + std::to_string(inst.id) + ".json");
        write_instance(p, inst);
        REQUIRE(read_instance(p) == inst);
    }
    REQUIRE_THROWS_AS(read_instance(dir.path / "missing.json"), std::runtime_error);
}

TEST_CASE("dataset trees carry every artifact", "[dataset]") {
    TempDir dir("tree");
    GenerationConfig cfg = small_config();
    GeneratedDataset ds = generate_dataset(cfg, 8);
    write_dataset(ds, dir.path);

    for (int e = 0; e < cfg.environment_count; ++e) {
        std::string stem = "env_" + detail::padded_number(e, 3);
        REQUIRE(fs::exists(dir.path / "environments" / (stem + ".lp")));
        REQUIRE(fs::exists(dir.path / "environments" / (stem + ".nl.txt")));
        // the program on disk parses back to the generated environment
        Environment env = parse_environment(
            detail::read_text_file(dir.path / "environments" / (stem + ".lp")));
        env.id = e;
        REQUIRE(env == ds.environments[static_cast<std::size_t>(e)]);
    }

    for (const DatasetInstance& inst : ds.instances) {
        std::string num = detail::padded_number(inst.id, 6);
        REQUIRE(fs::exists(dir.path / "scenes" / ("complete_" + num + ".json")));
        REQUIRE(fs::exists(dir.path / "scenes" / ("partial_" + num + ".json")));
        REQUIRE(fs::exists(dir.path / "questions" / ("question_" + num + ".json")));
        REQUIRE(fs::exists(dir.path / "answers" / ("answer_" + num + ".json")));
        REQUIRE(fs::exists(dir.path / "prompts" / ("standalone_" + num + ".txt")));
        REQUIRE(fs::exists(dir.path / "prompts" / ("parser_" + num + ".txt")));

        SceneFile complete = read_scene_file(dir.path / "scenes" / ("complete_" + num + ".json"));
        REQUIRE(complete.scene.objects == inst.complete.objects);
        REQUIRE(complete.scene.relations == inst.complete.relations);
        REQUIRE_FALSE(complete.hidden);

        SceneFile partial = read_scene_file(dir.path / "scenes" / ("partial_" + num + ".json"));
        REQUIRE(partial.scene.objects == inst.partial.objects);
        REQUIRE(partial.hidden == inst.hidden);

        nlohmann::ordered_json q = nlohmann::ordered_json::parse(
            detail::read_text_file(dir.path / "questions" / ("question_" + num + ".json")));
        REQUIRE(q.at("id").get<int>() == inst.id);
        REQUIRE(q.at("environment").get<int>() == inst.environment.id);
        REQUIRE(q.at("object_count").get<int>() == inst.complete.object_count());
        REQUIRE(detail::question_record_from_json(q) == inst.question);

        nlohmann::ordered_json a = nlohmann::ordered_json::parse(
            detail::read_text_file(dir.path / "answers" / ("answer_" + num + ".json")));
        REQUIRE(a.at("answer_set").get<std::vector<std::string>>() ==
                inst.question.answers.value_names());
        REQUIRE(a.at("envelope").get<std::string>() == answer_envelope(inst.question.answers));
    }

    nlohmann::ordered_json manifest =
        nlohmann::ordered_json::parse(detail::read_text_file(dir.path / "manifest.json"));
    REQUIRE(manifest.at("schema_version").get<int>() == kDatasetSchemaVersion);
    REQUIRE(manifest.at("instance_count").get<int>() == 8);
    REQUIRE(manifest.at("environment_count").get<int>() == 4);
    long long mix_total = 0;
    for (Attribute attr : kAttributes)
        mix_total += manifest.at("question_counts")
                         .at(std::string(AttributeCatalog::attribute_name(attr)))
                         .get<long long>();
    REQUIRE(mix_total == 8);
}

TEST_CASE("dataset trees are byte-stable across runs", "[dataset]") {
    TempDir one("stable_a");
    TempDir two("stable_b");
    GenerationConfig cfg = small_config();
    write_dataset(generate_dataset(cfg, 6), one.path);
    write_dataset(generate_dataset(cfg, 6), two.path);

    std::set<fs::path> rel_a, rel_b;
    for (const auto& entry : fs::recursive_directory_iterator(one.path))
        if (entry.is_regular_file()) rel_a.insert(fs::relative(entry.path(), one.path));
    for (const auto& entry : fs::recursive_directory_iterator(two.path))
        if (entry.is_regular_file()) rel_b.insert(fs::relative(entry.path(), two.path));
    REQUIRE(rel_a == rel_b);
    REQUIRE_FALSE(rel_a.empty());
    for (const fs::path& rel : rel_a)
        REQUIRE(detail::read_text_file(one.path / rel) == detail::read_text_file(two.path / rel));
}

TEST_CASE("prompts carry the full exemplar", "[dataset]") {
    GeneratedDataset ds = generate_dataset(small_config(), 2);
    const DatasetInstance& inst = ds.instances[0];

    std::string standalone = emit_prompt(inst, PromptStyle::Standalone);
    REQUIRE(standalone.find("Task description:") == 0);
    REQUIRE(standalone.find("Scene Observed: The following is the scene graph:") !=
            std::string::npos);
    REQUIRE(standalone.find("'objects':") != std::string::npos);
    REQUIRE(standalone.find("Constraints:") != std::string::npos);
    // every environment constraint sentence appears
    for (const ConstraintInstance& c : inst.environment.constraints)
        REQUIRE(standalone.find(render_constraint_nl(c)) != std::string::npos);
    // the scene-size sentence counts the hidden object too
    REQUIRE(standalone.find(render_constraint_nl(
                make_object_count(inst.partial.object_count() + 1))) != std::string::npos);
    REQUIRE(standalone.find("Question: ") != std::string::npos);
    REQUIRE(standalone.find(inst.question.nl) != std::string::npos);
    std::string tail = "Answer: " + answer_envelope(inst.question.answers) + "\n";
    REQUIRE(standalone.size() > tail.size());
    REQUIRE(standalone.substr(standalone.size() - tail.size()) == tail);

    std::string parser = emit_prompt(inst, PromptStyle::Parser);
    REQUIRE(parser.find("Task description:") == 0);
    REQUIRE(parser.find("Question: " + inst.question.nl) != std::string::npos);
    REQUIRE(parser.find("ASP:\n###\n" + render_question_asp(inst.question.form) + "\n###\n") !=
            std::string::npos);
}

TEST_CASE("stats summarize the dataset", "[dataset]") {
    GeneratedDataset ds = generate_dataset(small_config(), 20);
    DatasetStats stats = dataset_stats(ds);
    REQUIRE(stats.total == 20);

    long long by_attr_total = 0;
    for (long long c : stats.by_attribute) by_attr_total += c;
    REQUIRE(by_attr_total == 20);

    long long by_env_total = 0;
    for (const auto& [env_id, c] : stats.by_environment) {
        REQUIRE(env_id >= 0);
        REQUIRE(env_id < 4);
        by_env_total += c;
    }
    REQUIRE(by_env_total == 20);

    long long by_count_total = 0;
    for (const auto& [n, c] : stats.by_object_count) {
        REQUIRE(n >= 5);
        REQUIRE(n <= 9);
        by_count_total += c;
    }
    REQUIRE(by_count_total == 20);

    long long by_template_total = 0;
    for (const auto& [id, c] : stats.by_template) {
        bool known = false;
        for (std::string_view t : kQuestionTemplateIds) known = known || id == t;
        REQUIRE(known);
        by_template_total += c;
    }
    REQUIRE(by_template_total == 20);

    std::string text = format_stats(stats);
    REQUIRE(text.find("20") != std::string::npos);
    nlohmann::ordered_json j = stats_to_json(stats);
    REQUIRE(j.at("questions").get<long long>() == 20);
}
