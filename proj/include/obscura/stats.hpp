#pragma once

#include <array>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "obscura/catalog.hpp"
#include "obscura/dataset.hpp"

namespace obscura {

struct DatasetStats {
    long long total = 0;
    std::array<long long, kAttributeCount> by_attribute{};
    std::map<std::string, long long> by_template;
    std::map<int, long long> by_object_count;
    std::map<int, long long> by_environment;
    /// Per query attribute: answer-set size and composition histograms.
    std::array<std::map<std::size_t, long long>, kAttributeCount> answer_sizes;
    std::array<std::map<std::string, long long>, kAttributeCount> answer_compositions;
};

inline std::string answer_composition_key(const AnswerSet& answers) {
    std::string key = "{";
    std::vector<std::string> names = answers.value_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) key += ", ";
        key += names[i];
    }
    return key + "}";
}

inline DatasetStats dataset_stats(const std::vector<DatasetInstance>& instances) {
    DatasetStats s;
    for (const DatasetInstance& inst : instances) {
        ++s.total;
        std::size_t a = static_cast<std::size_t>(inst.question.form.query_attribute);
        ++s.by_attribute[a];
        ++s.by_template[inst.question.template_id];
        ++s.by_object_count[inst.complete.object_count()];
        ++s.by_environment[inst.environment.id];
        ++s.answer_sizes[a][inst.question.answers.values.size()];
        ++s.answer_compositions[a][answer_composition_key(inst.question.answers)];
    }
    return s;
}

inline DatasetStats dataset_stats(const GeneratedDataset& dataset) {
    return dataset_stats(dataset.instances);
}

namespace detail {

inline std::string percent(long long part, long long whole) {
    if (whole == 0) return "0.0%";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * static_cast<double>(part) /
                                                 static_cast<double>(whole));
    return buf;
}

}  // namespace detail

/// Plain-text histogram tables, one section per axis.
inline std::string format_stats(const DatasetStats& s) {
    std::string out = "questions: " + std::to_string(s.total) + "\n";
    out += "\nquery attributes:\n";
    for (Attribute a : kAttributes) {
        long long n = s.by_attribute[static_cast<std::size_t>(a)];
        out += "  " + std::string(AttributeCatalog::attribute_name(a)) + ": " +
               std::to_string(n) + " (" + detail::percent(n, s.total) + ")\n";
    }
    out += "\ntemplates:\n";
    for (const auto& [name, n] : s.by_template)
        out += "  " + name + ": " + std::to_string(n) + " (" + detail::percent(n, s.total) +
               ")\n";
    out += "\nobject counts:\n";
    for (const auto& [count, n] : s.by_object_count)
        out += "  " + std::to_string(count) + ": " + std::to_string(n) + " (" +
               detail::percent(n, s.total) + ")\n";
    out += "\nenvironment usage:\n";
    for (const auto& [env, n] : s.by_environment)
        out += "  env " + std::to_string(env) + ": " + std::to_string(n) + "\n";
    for (Attribute a : kAttributes) {
        std::size_t idx = static_cast<std::size_t>(a);
        if (s.by_attribute[idx] == 0) continue;
        out += "\nanswer sets for " + std::string(AttributeCatalog::attribute_name(a)) +
               " questions (" + std::to_string(s.by_attribute[idx]) + "):\n";
        out += "  by size:";
        for (const auto& [size, n] : s.answer_sizes[idx])
            out += " " + std::to_string(size) + "->" + std::to_string(n);
        out += "\n  by composition:\n";
        for (const auto& [key, n] : s.answer_compositions[idx])
            out += "    " + key + ": " + std::to_string(n) + "\n";
    }
    return out;
}

inline nlohmann::ordered_json stats_to_json(const DatasetStats& s) {
    nlohmann::ordered_json j;
    j["questions"] = s.total;
    nlohmann::ordered_json attrs;
    for (Attribute a : kAttributes)
        attrs[std::string(AttributeCatalog::attribute_name(a))] =
            s.by_attribute[static_cast<std::size_t>(a)];
    j["query_attributes"] = std::move(attrs);
    j["templates"] = s.by_template;
    nlohmann::ordered_json counts;
    for (const auto& [count, n] : s.by_object_count) counts[std::to_string(count)] = n;
    j["object_counts"] = std::move(counts);
    nlohmann::ordered_json envs;
    for (const auto& [env, n] : s.by_environment) envs[std::to_string(env)] = n;
    j["environment_usage"] = std::move(envs);
    nlohmann::ordered_json answers;
    for (Attribute a : kAttributes) {
        std::size_t idx = static_cast<std::size_t>(a);
        nlohmann::ordered_json sizes;
        for (const auto& [size, n] : s.answer_sizes[idx]) sizes[std::to_string(size)] = n;
        nlohmann::ordered_json comps;
        for (const auto& [key, n] : s.answer_compositions[idx]) comps[key] = n;
        answers[std::string(AttributeCatalog::attribute_name(a))] = {
            {"by_size", std::move(sizes)}, {"by_composition", std::move(comps)}};
    }
    j["answer_sets"] = std::move(answers);
    return j;
}

}  // namespace obscura
