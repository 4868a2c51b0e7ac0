// Command-line surface for the obscura pipeline: environment and dataset
// generation, solving, explanation, dataset validation, statistics,
// prediction grading, and prompt emission.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "obscura/obscura.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

obscura::GenerationConfig load_config(const std::string& path, std::optional<std::uint64_t> seed) {
    obscura::GenerationConfig cfg;
    if (!path.empty()) {
        ordered_json j;
        try {
            j = ordered_json::parse(obscura::detail::read_text_file(path));
        } catch (const nlohmann::json::parse_error& e) {
            throw std::runtime_error("config " + path + ": " + e.what());
        }
        for (const auto& [key, value] : j.items()) {
            if (key == "environment_count") cfg.environment_count = value.get<int>();
            else if (key == "max_instantiations") cfg.max_instantiations = value.get<int>();
            else if (key == "min_per_region") cfg.min_per_region = value.get<int>();
            else if (key == "object_count_min") cfg.object_count_min = value.get<int>();
            else if (key == "object_count_max") cfg.object_count_max = value.get<int>();
            else if (key == "master_seed") cfg.master_seed = value.get<std::uint64_t>();
            else if (key == "question_mix") {
                for (const auto& [attr, share] : value.items()) {
                    if (attr == "color") cfg.question_mix.color = share.get<double>();
                    else if (attr == "shape") cfg.question_mix.shape = share.get<double>();
                    else if (attr == "size") cfg.question_mix.size = share.get<double>();
                    else if (attr == "material") cfg.question_mix.material = share.get<double>();
                    else throw std::runtime_error("config: unknown question_mix key " + attr);
                }
            } else {
                throw std::runtime_error("config: unknown key " + key);
            }
        }
    }
    if (seed) cfg.master_seed = *seed;
    cfg.validate();
    return cfg;
}

obscura::Environment load_environment(const std::string& path) {
    obscura::Environment env = obscura::parse_environment(obscura::detail::read_text_file(path));
    return env;
}

/// Loads a written dataset tree back into memory, in instance-id order.
std::vector<obscura::DatasetInstance> read_dataset_tree(const fs::path& dir) {
    if (!fs::is_directory(dir / "questions"))
        throw std::runtime_error(dir.string() + " is not a dataset tree (no questions/)");

    std::map<int, obscura::Environment> environments;
    for (const auto& entry : fs::directory_iterator(dir / "environments")) {
        if (entry.path().extension() != ".lp") continue;
        std::string stem = entry.path().stem().string();  // env_012
        obscura::Environment env =
            obscura::parse_environment(obscura::detail::read_text_file(entry.path()));
        env.id = std::stoi(stem.substr(4));
        environments.emplace(env.id, std::move(env));
    }

    std::vector<fs::path> question_files;
    for (const auto& entry : fs::directory_iterator(dir / "questions"))
        if (entry.path().extension() == ".json") question_files.push_back(entry.path());
    std::sort(question_files.begin(), question_files.end());

    std::vector<obscura::DatasetInstance> out;
    out.reserve(question_files.size());
    for (const fs::path& qpath : question_files) {
        ordered_json j = ordered_json::parse(obscura::detail::read_text_file(qpath));
        obscura::DatasetInstance inst;
        inst.id = j.at("id").get<int>();
        int env_id = j.at("environment").get<int>();
        auto it = environments.find(env_id);
        if (it == environments.end())
            throw std::runtime_error(qpath.string() + ": environment " +
                                     std::to_string(env_id) + " is not in the tree");
        inst.environment = it->second;
        inst.question = obscura::detail::question_record_from_json(j);

        std::string num = obscura::detail::padded_number(inst.id, 6);
        inst.complete =
            obscura::read_scene_file(dir / "scenes" / ("complete_" + num + ".json")).scene;
        obscura::SceneFile partial =
            obscura::read_scene_file(dir / "scenes" / ("partial_" + num + ".json"));
        if (!partial.hidden)
            throw std::runtime_error(qpath.string() + ": partial scene lacks hidden metadata");
        inst.partial = std::move(partial.scene);
        inst.hidden = *partial.hidden;
        out.push_back(std::move(inst));
    }
    return out;
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text;
    else
        obscura::detail::write_text_file(out_path, text);
}

int run_gen_envs(const obscura::GenerationConfig& cfg, const std::string& out_dir) {
    std::vector<obscura::Environment> envs = obscura::generate_environments(cfg);
    fs::create_directories(out_dir);
    for (const obscura::Environment& env : envs) {
        std::string stem = "env_" + obscura::detail::padded_number(env.id, 3);
        obscura::detail::write_text_file(fs::path(out_dir) / (stem + ".lp"),
                                         obscura::render_environment_asp(env));
        obscura::detail::write_text_file(fs::path(out_dir) / (stem + ".nl.txt"),
                                         obscura::render_environment_nl(env));
    }
    std::cout << "wrote " << envs.size() << " environments to " << out_dir << "\n";
    return 0;
}

int run_gen_dataset(const obscura::GenerationConfig& cfg, int count,
                    const std::string& out_dir) {
    obscura::GeneratedDataset dataset = obscura::generate_dataset(cfg, count);
    obscura::write_dataset(dataset, out_dir);
    std::cout << "wrote " << dataset.instances.size() << " instances over "
              << dataset.environments.size() << " environments to " << out_dir << "\n";
    return 0;
}

int run_solve(const std::string& scene_path, const std::string& env_path,
              const std::string& question_path, const std::string& out_path, bool explain) {
    obscura::SceneGraph partial = obscura::read_scene_file(scene_path).scene;
    obscura::Environment env = load_environment(env_path);
    obscura::QuestionForm q =
        obscura::parse_question(obscura::detail::read_text_file(question_path));
    obscura::SolveResult result = obscura::solve(partial, env, q);

    std::string text;
    if (explain) {
        text = obscura::render_trace(result, env, q);
    } else {
        text = "answer set: {";
        std::vector<std::string> names = result.answers.value_names();
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i) text += ", ";
            text += names[i];
        }
        text += "}\nenvelope: " + obscura::answer_envelope(result.answers) + "\n";
    }
    write_output(out_path, text);
    return 0;
}

int run_validate(const std::string& data_dir) {
    std::vector<obscura::DatasetInstance> instances = read_dataset_tree(data_dir);
    long long scene_violations = 0, answer_mismatches = 0, file_disagreements = 0;
    for (const obscura::DatasetInstance& inst : instances) {
        if (!obscura::check_scene(inst.complete, inst.environment).satisfied()) {
            ++scene_violations;
            std::cout << "instance " << inst.id << ": complete scene violates its rules\n";
        }
        obscura::SceneGraph rebuilt = obscura::reassemble(inst.partial, inst.hidden);
        if (!obscura::check_scene(rebuilt, inst.environment).satisfied()) {
            ++scene_violations;
            std::cout << "instance " << inst.id << ": reassembled scene violates its rules\n";
        }
        obscura::AnswerSet fresh =
            obscura::solve(inst.partial, inst.environment, inst.question.form).answers;
        if (!(fresh == inst.question.answers)) {
            ++answer_mismatches;
            std::cout << "instance " << inst.id << ": stored answer set is stale\n";
        }
        if (!inst.question.answers.contains(inst.question.ground_truth)) {
            ++answer_mismatches;
            std::cout << "instance " << inst.id << ": ground truth escaped the answer set\n";
        }

        std::string num = obscura::detail::padded_number(inst.id, 6);
        fs::path apath = fs::path(data_dir) / "answers" / ("answer_" + num + ".json");
        ordered_json a = ordered_json::parse(obscura::detail::read_text_file(apath));
        if (a.at("answer_set").get<std::vector<std::string>>() !=
                inst.question.answers.value_names() ||
            a.at("envelope").get<std::string>() !=
                obscura::answer_envelope(inst.question.answers)) {
            ++file_disagreements;
            std::cout << "instance " << inst.id << ": answer file disagrees with question\n";
        }
    }
    std::cout << "instances checked: " << instances.size() << "\n"
              << "constraint violations: " << scene_violations << "\n"
              << "answer-set mismatches: " << answer_mismatches << "\n"
              << "answer-file disagreements: " << file_disagreements << "\n";
    bool ok = scene_violations == 0 && answer_mismatches == 0 && file_disagreements == 0;
    std::cout << (ok ? "ok\n" : "FAILED\n");
    return ok ? 0 : 1;
}

int run_stats(const std::string& data_dir, bool as_json, const std::string& out_path) {
    std::vector<obscura::DatasetInstance> instances = read_dataset_tree(data_dir);
    obscura::DatasetStats stats = obscura::dataset_stats(instances);
    write_output(out_path, as_json ? obscura::stats_to_json(stats).dump(2) + "\n"
                                   : obscura::format_stats(stats));
    return 0;
}

int run_eval(const std::string& data_dir, const std::string& predictions_path, bool as_json,
             const std::string& out_path) {
    std::vector<std::pair<int, obscura::AnswerSet>> gold;
    std::vector<fs::path> answer_files;
    for (const auto& entry : fs::directory_iterator(fs::path(data_dir) / "answers"))
        if (entry.path().extension() == ".json") answer_files.push_back(entry.path());
    std::sort(answer_files.begin(), answer_files.end());
    for (const fs::path& apath : answer_files) {
        ordered_json a = ordered_json::parse(obscura::detail::read_text_file(apath));
        auto attr =
            obscura::AttributeCatalog::find_attribute(a.at("query_attribute").get<std::string>());
        if (!attr) throw std::runtime_error(apath.string() + ": unknown query attribute");
        std::vector<std::uint8_t> values;
        for (const auto& name : a.at("answer_set")) {
            auto v = obscura::AttributeCatalog::find_value(*attr, name.get<std::string>());
            if (!v) throw std::runtime_error(apath.string() + ": unknown answer value");
            values.push_back(*v);
        }
        gold.emplace_back(a.at("id").get<int>(), obscura::make_answer_set(*attr, std::move(values)));
    }

    std::vector<obscura::Prediction> predictions =
        obscura::parse_predictions(obscura::detail::read_text_file(predictions_path));
    obscura::EvalResult result = obscura::evaluate(gold, predictions);

    std::string text;
    if (as_json) {
        ordered_json j;
        j["instances"] = result.per_instance.size();
        j["exact_mean"] = result.exact_mean;
        j["jaccard_mean"] = result.jaccard_mean;
        ordered_json by_attr;
        for (obscura::Attribute a : obscura::kAttributes) {
            const obscura::AttributeEval& e =
                result.by_attribute[static_cast<std::size_t>(a)];
            by_attr[std::string(obscura::AttributeCatalog::attribute_name(a))] = {
                {"count", e.count},
                {"exact_mean", e.exact_mean},
                {"jaccard_mean", e.jaccard_mean}};
        }
        j["by_attribute"] = std::move(by_attr);
        ordered_json per;
        for (const obscura::InstanceEval& e : result.per_instance)
            per.push_back(
                {{"id", e.id},
                 {"attribute",
                  std::string(obscura::AttributeCatalog::attribute_name(e.attribute))},
                 {"exact", e.exact},
                 {"jaccard", e.jaccard}});
        j["per_instance"] = std::move(per);
        text = j.dump(2) + "\n";
    } else {
        char buf[128];
        text = "instances: " + std::to_string(result.per_instance.size()) + "\n";
        std::snprintf(buf, sizeof buf, "exact accuracy: %.4f\nmean Jaccard:   %.4f\n",
                      result.exact_mean, result.jaccard_mean);
        text += buf;
        text += "by attribute:\n";
        for (obscura::Attribute a : obscura::kAttributes) {
            const obscura::AttributeEval& e =
                result.by_attribute[static_cast<std::size_t>(a)];
            std::snprintf(buf, sizeof buf, "  %-8s n=%-6lld exact=%.4f jaccard=%.4f\n",
                          std::string(obscura::AttributeCatalog::attribute_name(a)).c_str(),
                          e.count, e.exact_mean, e.jaccard_mean);
            text += buf;
        }
    }
    write_output(out_path, text);
    return 0;
}

int run_emit_prompts(const std::string& data_dir, const std::string& out_dir,
                     const std::string& style) {
    std::vector<obscura::DatasetInstance> instances = read_dataset_tree(data_dir);
    fs::create_directories(out_dir);
    long long written = 0;
    for (const obscura::DatasetInstance& inst : instances) {
        std::string num = obscura::detail::padded_number(inst.id, 6);
        if (style == "standalone" || style == "both") {
            obscura::detail::write_text_file(
                fs::path(out_dir) / ("standalone_" + num + ".txt"),
                obscura::emit_prompt(inst, obscura::PromptStyle::Standalone));
            ++written;
        }
        if (style == "parser" || style == "both") {
            obscura::detail::write_text_file(
                fs::path(out_dir) / ("parser_" + num + ".txt"),
                obscura::emit_prompt(inst, obscura::PromptStyle::Parser));
            ++written;
        }
    }
    std::cout << "wrote " << written << " prompts to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"constraint-scene question generation and eliminative reasoning"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    std::string config_path;
    std::string out;
    app.add_option("--seed", seed, "master seed (overrides the config file)");
    app.add_option("--config", config_path, "generation config JSON")->check(CLI::ExistingFile);
    app.add_option("--out", out, "output file or directory");

    int rc = 0;

    CLI::App* gen_envs = app.add_subcommand("gen-envs", "generate an environment pool");
    gen_envs->fallthrough();
    gen_envs->callback([&] {
        if (out.empty()) throw CLI::ValidationError("gen-envs", "--out is required");
        rc = run_gen_envs(load_config(config_path, seed), out);
    });

    CLI::App* gen_dataset = app.add_subcommand("gen-dataset", "generate a full dataset tree");
    gen_dataset->fallthrough();
    int instance_count = 1000;
    gen_dataset->add_option("--count", instance_count, "instances to generate")
        ->check(CLI::Range(1, 1000000));
    gen_dataset->callback([&] {
        if (out.empty()) throw CLI::ValidationError("gen-dataset", "--out is required");
        rc = run_gen_dataset(load_config(config_path, seed), instance_count, out);
    });

    std::string scene_path, env_path, question_path;
    CLI::App* solve_cmd =
        app.add_subcommand("solve", "answer a question about a partial scene");
    solve_cmd->fallthrough();
    solve_cmd->add_option("--scene", scene_path, "partial scene JSON")
        ->required()
        ->check(CLI::ExistingFile);
    solve_cmd->add_option("--env", env_path, "environment program")
        ->required()
        ->check(CLI::ExistingFile);
    solve_cmd->add_option("--question", question_path, "question program")
        ->required()
        ->check(CLI::ExistingFile);
    solve_cmd->callback([&] { rc = run_solve(scene_path, env_path, question_path, out, false); });

    CLI::App* explain_cmd =
        app.add_subcommand("explain", "answer with the full elimination trace");
    explain_cmd->fallthrough();
    explain_cmd->add_option("--scene", scene_path, "partial scene JSON")
        ->required()
        ->check(CLI::ExistingFile);
    explain_cmd->add_option("--env", env_path, "environment program")
        ->required()
        ->check(CLI::ExistingFile);
    explain_cmd->add_option("--question", question_path, "question program")
        ->required()
        ->check(CLI::ExistingFile);
    explain_cmd->callback(
        [&] { rc = run_solve(scene_path, env_path, question_path, out, true); });

    std::string data_dir;
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "re-check every instance of a dataset tree");
    validate_cmd->fallthrough();
    validate_cmd->add_option("--data", data_dir, "dataset tree")
        ->required()
        ->check(CLI::ExistingDirectory);
    validate_cmd->callback([&] { rc = run_validate(data_dir); });

    bool as_json = false;
    CLI::App* stats_cmd = app.add_subcommand("stats", "distribution tables for a dataset tree");
    stats_cmd->fallthrough();
    stats_cmd->add_option("--data", data_dir, "dataset tree")
        ->required()
        ->check(CLI::ExistingDirectory);
    stats_cmd->add_flag("--json", as_json, "emit machine-readable JSON");
    stats_cmd->callback([&] { rc = run_stats(data_dir, as_json, out); });

    std::string predictions_path;
    CLI::App* eval_cmd = app.add_subcommand("eval", "grade predictions against gold answers");
    eval_cmd->fallthrough();
    eval_cmd->add_option("--data", data_dir, "dataset tree")
        ->required()
        ->check(CLI::ExistingDirectory);
    eval_cmd->add_option("--predictions", predictions_path,
                         "one line per instance: id then the predicted labels")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_flag("--json", as_json, "emit machine-readable JSON");
    eval_cmd->callback([&] { rc = run_eval(data_dir, predictions_path, as_json, out); });

    std::string style = "both";
    CLI::App* prompts_cmd =
        app.add_subcommand("emit-prompts", "write exemplar prompts for a dataset tree");
    prompts_cmd->fallthrough();
    prompts_cmd->add_option("--data", data_dir, "dataset tree")
        ->required()
        ->check(CLI::ExistingDirectory);
    prompts_cmd->add_option("--style", style, "standalone, parser, or both")
        ->check(CLI::IsMember({"standalone", "parser", "both"}));
    prompts_cmd->callback([&] {
        if (out.empty()) throw CLI::ValidationError("emit-prompts", "--out is required");
        rc = run_emit_prompts(data_dir, out, style);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "obscura: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
