#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "obscura/answer.hpp"
#include "obscura/catalog.hpp"
#include "obscura/error.hpp"

namespace obscura {

/// Every value a prediction may contain, across all four attributes.
inline constexpr std::array<std::string_view, 17> kPredictionVocabulary{
    "red",    "blue",  "green", "yellow", "cyan",     "brown",  "gray",   "purple", "rubber",
    "metal",  "large", "small", "medium", "cone",     "cube",   "cylinder", "sphere"};

inline bool is_prediction_label(std::string_view label) {
    return std::find(kPredictionVocabulary.begin(), kPredictionVocabulary.end(), label) !=
           kPredictionVocabulary.end();
}

/// One graded line: the instance id plus a deduplicated, sorted value set.
struct Prediction {
    int id = 0;
    std::vector<std::string> values;
};

namespace detail {

inline std::vector<std::string> canonical_label_set(std::vector<std::string> values) {
    for (std::string& v : values) {
        std::transform(v.begin(), v.end(), v.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (!is_prediction_label(v)) throw EvalError("unknown label: " + v);
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

}  // namespace detail

/// Reads "id label label ..." lines; commas between labels are tolerated.
/// Blank lines and lines starting with # are skipped.
inline std::vector<Prediction> read_predictions(std::istream& in) {
    std::vector<Prediction> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        std::string head;
        if (!(fields >> head)) continue;
        if (head[0] == '#') continue;
        Prediction p;
        try {
            std::size_t used = 0;
            p.id = std::stoi(head, &used);
            if (used != head.size()) throw std::invalid_argument(head);
        } catch (const std::exception&) {
            throw EvalError("predictions line " + std::to_string(line_no) +
                            ": expected an instance id, got \"" + head + "\"");
        }
        std::string label;
        while (fields >> label) p.values.push_back(label);
        try {
            p.values = detail::canonical_label_set(std::move(p.values));
        } catch (const EvalError& e) {
            throw EvalError("predictions line " + std::to_string(line_no) + ": " + e.what());
        }
        out.push_back(std::move(p));
    }
    return out;
}

inline std::vector<Prediction> parse_predictions(const std::string& text) {
    std::istringstream in(text);
    return read_predictions(in);
}

/// |A n P| / |A u P| over sorted unique label sets. Both empty counts as 1.
inline double jaccard_index(const std::vector<std::string>& a,
                            const std::vector<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::vector<std::string> inter, uni;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(uni));
    return static_cast<double>(inter.size()) / static_cast<double>(uni.size());
}

inline bool exact_match(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    return a == b;
}

struct InstanceEval {
    int id = 0;
    Attribute attribute = Attribute::Color;
    double exact = 0;
    double jaccard = 0;
};

struct AttributeEval {
    long long count = 0;
    double exact_mean = 0;
    double jaccard_mean = 0;
};

struct EvalResult {
    std::vector<InstanceEval> per_instance;
    double exact_mean = 0;
    double jaccard_mean = 0;
    std::array<AttributeEval, kAttributeCount> by_attribute{};
};

/// Grades predictions against gold answer sets. Ids must align exactly:
/// every gold id predicted once, no stray predictions.
inline EvalResult evaluate(const std::vector<std::pair<int, AnswerSet>>& gold,
                           const std::vector<Prediction>& predictions) {
    std::map<int, std::vector<std::string>> by_id;
    for (const Prediction& p : predictions) {
        auto canonical = detail::canonical_label_set(p.values);
        if (!by_id.emplace(p.id, std::move(canonical)).second)
            throw EvalError("duplicate prediction for instance " + std::to_string(p.id));
    }

    EvalResult result;
    std::array<double, kAttributeCount> exact_sum{};
    std::array<double, kAttributeCount> jaccard_sum{};
    for (const auto& [id, answers] : gold) {
        auto it = by_id.find(id);
        if (it == by_id.end())
            throw EvalError("missing prediction for instance " + std::to_string(id));
        std::vector<std::string> actual = answers.value_names();
        std::sort(actual.begin(), actual.end());
        InstanceEval e;
        e.id = id;
        e.attribute = answers.attribute;
        e.exact = exact_match(actual, it->second) ? 1.0 : 0.0;
        e.jaccard = jaccard_index(actual, it->second);
        std::size_t a = static_cast<std::size_t>(e.attribute);
        exact_sum[a] += e.exact;
        jaccard_sum[a] += e.jaccard;
        ++result.by_attribute[a].count;
        result.per_instance.push_back(e);
        by_id.erase(it);
    }
    if (!by_id.empty())
        throw EvalError("prediction for unknown instance " +
                        std::to_string(by_id.begin()->first));

    double exact_total = 0, jaccard_total = 0;
    for (const InstanceEval& e : result.per_instance) {
        exact_total += e.exact;
        jaccard_total += e.jaccard;
    }
    if (!result.per_instance.empty()) {
        result.exact_mean = exact_total / static_cast<double>(result.per_instance.size());
        result.jaccard_mean = jaccard_total / static_cast<double>(result.per_instance.size());
    }
    for (std::size_t a = 0; a < kAttributeCount; ++a) {
        if (result.by_attribute[a].count == 0) continue;
        result.by_attribute[a].exact_mean =
            exact_sum[a] / static_cast<double>(result.by_attribute[a].count);
        result.by_attribute[a].jaccard_mean =
            jaccard_sum[a] / static_cast<double>(result.by_attribute[a].count);
    }
    return result;
}

}  // namespace obscura
