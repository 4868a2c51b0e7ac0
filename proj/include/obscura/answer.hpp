#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "obscura/catalog.hpp"

namespace obscura {

/// The set of values the queried attribute may take, sorted by value index.
/// Valid question answers satisfy 1 <= size < domain size.
struct AnswerSet {
    Attribute attribute{};
    std::vector<std::uint8_t> values;

    bool operator==(const AnswerSet&) const = default;

    bool contains(std::uint8_t v) const {
        return std::find(values.begin(), values.end(), v) != values.end();
    }

    bool full_domain() const {
        return static_cast<int>(values.size()) == AttributeCatalog::value_count(attribute);
    }

    std::vector<std::string> value_names() const {
        std::vector<std::string> out;
        out.reserve(values.size());
        for (std::uint8_t v : values)
            out.push_back(std::string(AttributeCatalog::value_name(attribute, v)));
        return out;
    }
};

inline AnswerSet make_answer_set(Attribute a, std::vector<std::uint8_t> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return AnswerSet{a, std::move(values)};
}

}  // namespace obscura
