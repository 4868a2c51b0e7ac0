#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "obscura/answer.hpp"
#include "obscura/envgen.hpp"
#include "obscura/error.hpp"
#include "obscura/parse.hpp"
#include "obscura/prompt.hpp"
#include "obscura/qgen.hpp"
#include "obscura/render.hpp"
#include "obscura/rng.hpp"
#include "obscura/scene_io.hpp"
#include "obscura/scenegen.hpp"

namespace obscura {

inline constexpr int kDatasetSchemaVersion = 1;

/// One emitted question with everything needed to grade it.
struct QuestionRecord {
    QuestionForm form;
    std::string nl;
    std::string template_id;
    AnswerSet answers;
    /// The removed object's actual value for the query attribute.
    std::uint8_t ground_truth = 0;

    bool operator==(const QuestionRecord&) const = default;
};

struct DatasetInstance {
    int id = 0;
    Environment environment;
    SceneGraph complete;
    SceneGraph partial;
    ObjectSpec hidden;
    QuestionRecord question;

    bool operator==(const DatasetInstance&) const = default;
};

struct GeneratedDataset {
    GenerationConfig config;
    std::vector<Environment> environments;
    std::vector<DatasetInstance> instances;
};

namespace detail {

/// All four attributes, most-underrepresented first. The head matches what
/// BalanceLedger::choose would pick; the tail is the fallback order.
inline std::array<Attribute, kAttributeCount> attributes_by_deficit(const BalanceLedger& ledger,
                                                                    const QuestionMix& mix) {
    std::array<Attribute, kAttributeCount> order = kAttributes;
    auto deficit = [&](Attribute a) {
        return mix.at(a) * static_cast<double>(ledger.total()) -
               static_cast<double>(ledger.counts[static_cast<std::size_t>(a)]);
    };
    std::stable_sort(order.begin(), order.end(), [&](Attribute a, Attribute b) {
        return deficit(a) > deficit(b) + 1e-12;
    });
    return order;
}

/// One rung of the retry ladder: try to mint an instance asking about attr.
/// Scenes, hidden picks, and question drafts are retried on nested derived
/// seeds so a failure never perturbs sibling draws.
inline std::optional<DatasetInstance> try_generate_instance(const Environment& env, int id,
                                                            Attribute attr,
                                                            std::uint64_t instance_seed,
                                                            const GenerationConfig& cfg) {
    std::uint64_t aseed =
        derive_seed(instance_seed, 0x41000000u + static_cast<std::uint64_t>(attr));
    Rng rng(aseed);
    for (int scene_try = 0; scene_try < 5; ++scene_try) {
        int n = rng.uniform_int(cfg.object_count_min, cfg.object_count_max);
        SceneGraph complete;
        try {
            complete = generate_complete_scene(
                env, n, derive_seed(aseed, 0x53430000u + static_cast<std::uint64_t>(scene_try)));
        } catch (const GenerationError&) {
            continue;
        }
        for (int hidden_try = 0; hidden_try < 4; ++hidden_try) {
            auto [partial, hidden] = make_partial(
                complete, derive_seed(aseed, 0x48490000u + static_cast<std::uint64_t>(
                                                               scene_try * 16 + hidden_try)));
            for (int q_try = 0; q_try < 50; ++q_try) {
                std::uint64_t qseed = derive_seed(
                    aseed, 0x51550000u + static_cast<std::uint64_t>(
                                             (scene_try * 16 + hidden_try) * 64 + q_try));
                auto draft = instantiate_question(complete, hidden.id, attr, qseed);
                if (!draft) continue;
                ValidationResult v = validate_question(draft->form, partial, env);
                if (v.verdict != ValidationResult::Verdict::Valid) continue;
                std::uint8_t truth = hidden.value(attr);
                if (!v.answers->contains(truth))
                    throw std::logic_error("ground truth fell outside the answer set");
                DatasetInstance out;
                out.id = id;
                out.environment = env;
                out.complete = std::move(complete);
                out.partial = std::move(partial);
                out.hidden = hidden;
                out.question = QuestionRecord{std::move(draft->form), std::move(draft->nl),
                                              std::move(draft->template_id),
                                              std::move(*v.answers), truth};
                return out;
            }
        }
    }
    return std::nullopt;
}

}  // namespace detail

/// Builds the environment pool and instance_count instances. Instance i uses
/// environment i mod pool size; query attributes track the configured mix by
/// always trying the most underrepresented attribute first.
inline GeneratedDataset generate_dataset(const GenerationConfig& cfg, int instance_count) {
    cfg.validate();
    if (instance_count < 0) throw std::invalid_argument("negative instance count");
    GeneratedDataset out;
    out.config = cfg;
    out.environments = generate_environments(cfg);
    out.instances.reserve(static_cast<std::size_t>(instance_count));
    BalanceLedger ledger;
    for (int id = 0; id < instance_count; ++id) {
        const Environment& env =
            out.environments[static_cast<std::size_t>(id) % out.environments.size()];
        std::uint64_t instance_seed =
            derive_seed(cfg.master_seed, 0x494E5300u + static_cast<std::uint64_t>(id));
        std::optional<DatasetInstance> made;
        for (Attribute attr : detail::attributes_by_deficit(ledger, cfg.question_mix)) {
            made = detail::try_generate_instance(env, id, attr, instance_seed, cfg);
            if (made) {
                ledger.record(attr);
                break;
            }
        }
        if (!made)
            throw GenerationError("instance " + std::to_string(id) +
                                  ": no valid question in environment " +
                                  std::to_string(env.id));
        out.instances.push_back(std::move(*made));
    }
    return out;
}

inline std::string emit_prompt(const DatasetInstance& instance, PromptStyle style) {
    if (style == PromptStyle::Parser)
        return emit_parser_prompt(instance.question.nl, instance.question.form);
    return emit_standalone_prompt(instance.partial, instance.environment, instance.question.nl,
                                  instance.question.answers);
}

namespace detail {

inline nlohmann::ordered_json question_record_to_json(const QuestionRecord& q) {
    nlohmann::ordered_json j;
    j["nl"] = q.nl;
    j["program"] = render_question_asp(q.form);
    j["template"] = q.template_id;
    j["query_attribute"] =
        std::string(AttributeCatalog::attribute_name(q.form.query_attribute));
    j["answer_set"] = q.answers.value_names();
    j["ground_truth"] = attr_value_name({q.form.query_attribute, q.ground_truth});
    return j;
}

inline QuestionRecord question_record_from_json(const nlohmann::ordered_json& j) {
    QuestionRecord q;
    q.nl = j.at("nl").get<std::string>();
    q.form = parse_question(j.at("program").get<std::string>());
    q.template_id = j.at("template").get<std::string>();
    auto attr = AttributeCatalog::find_attribute(j.at("query_attribute").get<std::string>());
    if (!attr || *attr != q.form.query_attribute)
        throw SchemaError("question record: query_attribute disagrees with the program");
    auto value_of = [&](const std::string& name) {
        auto v = AttributeCatalog::find_value(*attr, name);
        if (!v) throw SchemaError("question record: unknown value " + name);
        return *v;
    };
    std::vector<std::uint8_t> values;
    for (const auto& v : j.at("answer_set")) values.push_back(value_of(v.get<std::string>()));
    q.answers = make_answer_set(*attr, std::move(values));
    q.ground_truth = value_of(j.at("ground_truth").get<std::string>());
    return q;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return text;
}

inline std::string padded_number(int n, int width) {
    std::string digits = std::to_string(n);
    if (static_cast<int>(digits.size()) < width)
        digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
    return digits;
}

}  // namespace detail

inline nlohmann::ordered_json instance_to_json(const DatasetInstance& inst) {
    nlohmann::ordered_json j;
    j["schema_version"] = kDatasetSchemaVersion;
    j["id"] = inst.id;
    j["environment"] = {{"id", inst.environment.id},
                        {"program", render_environment_asp(inst.environment)}};
    j["complete"] = scene_to_json(inst.complete);
    j["partial"] = scene_to_json(inst.partial, inst.hidden);
    j["question"] = detail::question_record_to_json(inst.question);
    return j;
}

inline DatasetInstance instance_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_object()) throw SchemaError("instance: not a JSON object");
    if (!j.contains("schema_version") ||
        j.at("schema_version").get<int>() != kDatasetSchemaVersion)
        throw SchemaError("instance: missing or unsupported schema_version");
    DatasetInstance inst;
    inst.id = j.at("id").get<int>();
    inst.environment = parse_environment(j.at("environment").at("program").get<std::string>());
    inst.environment.id = j.at("environment").at("id").get<int>();
    inst.complete = scene_from_json(j.at("complete")).scene;
    SceneFile partial = scene_from_json(j.at("partial"));
    if (!partial.hidden) throw SchemaError("instance: partial scene lacks hidden metadata");
    inst.partial = std::move(partial.scene);
    inst.hidden = *partial.hidden;
    inst.question = detail::question_record_from_json(j.at("question"));
    return inst;
}

inline void write_instance(const std::filesystem::path& path, const DatasetInstance& inst) {
    detail::write_text_file(path, instance_to_json(inst).dump(2) + "\n");
}

inline DatasetInstance read_instance(const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(detail::read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("instance file " + path.string() + ": " + e.what());
    }
    return instance_from_json(j);
}

/// Writes the whole dataset as the standard tree: environments/, scenes/,
/// questions/, answers/, prompts/, plus a manifest. Byte-stable for a given
/// dataset value.
inline void write_dataset(const GeneratedDataset& dataset, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "environments");
    fs::create_directories(dir / "scenes");
    fs::create_directories(dir / "questions");
    fs::create_directories(dir / "answers");
    fs::create_directories(dir / "prompts");

    for (const Environment& env : dataset.environments) {
        std::string stem = "env_" + detail::padded_number(env.id, 3);
        detail::write_text_file(dir / "environments" / (stem + ".lp"),
                                render_environment_asp(env));
        detail::write_text_file(dir / "environments" / (stem + ".nl.txt"),
                                render_environment_nl(env));
    }

    std::array<long long, kAttributeCount> attribute_counts{};
    for (const DatasetInstance& inst : dataset.instances) {
        std::string num = detail::padded_number(inst.id, 6);
        ++attribute_counts[static_cast<std::size_t>(inst.question.form.query_attribute)];

        write_scene_file(dir / "scenes" / ("complete_" + num + ".json"), inst.complete);
        write_scene_file(dir / "scenes" / ("partial_" + num + ".json"), inst.partial,
                         inst.hidden);

        nlohmann::ordered_json q;
        q["schema_version"] = kDatasetSchemaVersion;
        q["id"] = inst.id;
        q["environment"] = inst.environment.id;
        q["object_count"] = inst.complete.object_count();
        q.update(detail::question_record_to_json(inst.question));
        detail::write_text_file(dir / "questions" / ("question_" + num + ".json"),
                                q.dump(2) + "\n");

        nlohmann::ordered_json a;
        a["schema_version"] = kDatasetSchemaVersion;
        a["id"] = inst.id;
        a["query_attribute"] =
            std::string(AttributeCatalog::attribute_name(inst.question.answers.attribute));
        a["answer_set"] = inst.question.answers.value_names();
        a["ground_truth"] =
            attr_value_name({inst.question.form.query_attribute, inst.question.ground_truth});
        a["envelope"] = answer_envelope(inst.question.answers);
        detail::write_text_file(dir / "answers" / ("answer_" + num + ".json"),
                                a.dump(2) + "\n");

        detail::write_text_file(dir / "prompts" / ("standalone_" + num + ".txt"),
                                emit_prompt(inst, PromptStyle::Standalone));
        detail::write_text_file(dir / "prompts" / ("parser_" + num + ".txt"),
                                emit_prompt(inst, PromptStyle::Parser));
    }

    nlohmann::ordered_json manifest;
    manifest["schema_version"] = kDatasetSchemaVersion;
    manifest["master_seed"] = dataset.config.master_seed;
    manifest["environment_count"] = dataset.environments.size();
    manifest["instance_count"] = dataset.instances.size();
    manifest["object_count_min"] = dataset.config.object_count_min;
    manifest["object_count_max"] = dataset.config.object_count_max;
    nlohmann::ordered_json mix;
    for (Attribute a : kAttributes)
        mix[std::string(AttributeCatalog::attribute_name(a))] =
            dataset.config.question_mix.at(a);
    manifest["question_mix"] = std::move(mix);
    nlohmann::ordered_json counts;
    for (Attribute a : kAttributes)
        counts[std::string(AttributeCatalog::attribute_name(a))] =
            attribute_counts[static_cast<std::size_t>(a)];
    manifest["question_counts"] = std::move(counts);
    detail::write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace obscura
