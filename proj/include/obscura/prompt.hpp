#pragma once

#include <string>
#include <vector>

#include "obscura/answer.hpp"
#include "obscura/catalog.hpp"
#include "obscura/constraint.hpp"
#include "obscura/question.hpp"
#include "obscura/render.hpp"
#include "obscura/scene.hpp"
#include "obscura/scene_io.hpp"

namespace obscura {

enum class PromptStyle { Standalone, Parser };

namespace detail {

inline std::string capitalized(std::string word) {
    if (!word.empty() && word[0] >= 'a' && word[0] <= 'z')
        word[0] = static_cast<char>(word[0] - 'a' + 'A');
    return word;
}

/// "small, medium, or large"; two items drop the comma: "rubber or metal".
inline std::string oxford_or(const std::vector<std::string>& items) {
    if (items.size() == 1) return items[0];
    if (items.size() == 2) return items[0] + " or " + items[1];
    std::string out;
    for (std::size_t i = 0; i + 1 < items.size(); ++i) out += items[i] + ", ";
    return out + "or " + items.back();
}

/// Region alternatives keep the comma either way: "0, 1, 2, or 3" / "1, or 3".
inline std::string region_list_phrase(RegionSet set) {
    std::string out;
    auto values = region_set_values(set);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        if (i + 1 == values.size() && values.size() > 1) out += "or ";
        out += std::to_string(values[i]);
    }
    return out;
}

inline std::string relation_nl_phrase(Relation r) {
    switch (r) {
        case Relation::Left: return "to the left of";
        case Relation::Right: return "to the right of";
        case Relation::Front: return "in front of";
        case Relation::Behind: return "behind";
    }
    return {};
}

inline std::vector<std::string> attribute_value_words(Attribute a) {
    std::vector<std::string> out;
    for (int v = 0; v < AttributeCatalog::value_count(a); ++v)
        out.emplace_back(AttributeCatalog::value_name(a, static_cast<std::uint8_t>(v)));
    return out;
}

}  // namespace detail

/// "###{Small, Medium}###": the answer values, capitalized, in set order.
inline std::string answer_envelope(const AnswerSet& answers) {
    std::string out = "###{";
    for (std::size_t i = 0; i < answers.values.size(); ++i) {
        if (i) out += ", ";
        out += detail::capitalized(attr_value_name({answers.attribute, answers.values[i]}));
    }
    return out + "}###";
}

/// The scene-independent rule sentences: ontology, region topology, the
/// one-value-per-property and one-region rules, distinctness, capacity.
inline std::vector<std::string> generic_rules_nl(int capacity = kDefaultRegionCapacity) {
    std::vector<std::string> out;
    std::string colors;
    for (const std::string& c : detail::attribute_value_words(Attribute::Color)) {
        if (!colors.empty()) colors += ", or ";
        colors += c;
    }
    out.push_back("Objects can be in one of the 8 colors. It can be " + colors + ".");
    out.push_back("Objects can be in one of the 4 shapes. It can be a " +
                  detail::oxford_or(detail::attribute_value_words(Attribute::Shape)) + ".");
    out.push_back("Objects can be in one of the 3 sizes. It can be " +
                  detail::oxford_or(detail::attribute_value_words(Attribute::Size)) + ".");
    out.push_back("Objects can be in one of the 2 materials. It can be " +
                  detail::oxford_or(detail::attribute_value_words(Attribute::Material)) + ".");
    out.push_back("The scene is divided into 4 regions. They are named 0, 1, 2, 3.");
    for (Relation rel : {Relation::Right, Relation::Front}) {
        for (int src = 0; src < kRegionCount; ++src)
            out.push_back(
                "If there are two objects and the first object is located in region " +
                std::to_string(src) + " and the second object is " +
                detail::relation_nl_phrase(rel) +
                " the first object, then the location of the second object is either in "
                "region " +
                detail::region_list_phrase(region_relation(rel, src)) + ".");
        Relation inv = inverse(rel);
        out.push_back("If there are two objects, the first object is " +
                      detail::relation_nl_phrase(rel) +
                      " the second object, then the second object is " +
                      detail::relation_nl_phrase(inv) + " the first object.");
    }
    for (Attribute a : {Attribute::Color, Attribute::Material, Attribute::Shape,
                        Attribute::Size})
        out.push_back("Every object must be assigned exactly one value for " +
                      std::string(AttributeCatalog::attribute_name(a)) + ".");
    out.push_back("Every object must be assigned exactly one value for region.");
    out.push_back(render_constraint_nl(make_distinctness()));
    out.push_back(render_constraint_nl(make_region_capacity(capacity)));
    return out;
}

/// Exemplar block for asking a model to answer directly from the partial
/// scene plus the rule text. Ends with the enveloped gold answer.
inline std::string emit_standalone_prompt(const SceneGraph& partial, const Environment& env,
                                          const std::string& question_nl,
                                          const AnswerSet& answers) {
    std::string out =
        "Task description: You are a helpful assistant who answers questions about hidden "
        "objects based on scene description and the constraints in the scene. The scene graph "
        "is in JSON format with the following keys. The key objects contain a list of objects "
        "present in the scene. Each object has various attributes like material, color, "
        "shape, size, and region. The key relationships hold information about the spatial "
        "relationships between objects in the scene. It contains sub-fields like \"front,\" "
        "\"right,\" \"left,\" \"behind,\" etc., each associated with a list of object indices "
        "representing objects that have that specific relationship with another object. For "
        "example, relationships[\"front\"][0] refers to the objects that are in front of the "
        "object at index 0.\n\n";
    out += "Scene Observed: The following is the scene graph:\n";
    out += scene_python_repr(partial) + "\n\n";
    out +=
        "Constraints: The scene contains several visible objects, and has one additional "
        "object that is hidden. Objects must have 4 properties. They are color, shape, size, "
        "and material. The scene must conform to the following constraints.\n";
    for (const std::string& sentence : generic_rules_nl(region_capacity(env)))
        out += "\n" + sentence + "\n";
    int total = static_cast<int>(partial.object_count()) + 1;
    out += "\n" + render_constraint_nl(make_object_count(total)) + "\n";
    for (const ConstraintInstance& c : env.constraints)
        out += "\n" + render_constraint_nl(c) + "\n";
    out +=
        "\nQuestion: Answer the following question about the hidden object. The solution "
        "should satisfy the constraints. " +
        question_nl + "\n\n";
    out += "Answer: " + answer_envelope(answers) + "\n";
    return out;
}

/// Exemplar block for asking a model to translate the question into logic.
/// The program sits between bare "###" fence lines.
inline std::string emit_parser_prompt(const std::string& question_nl, const QuestionForm& q) {
    std::string out =
        "Task description: You are a helpful assistant that converts questions in English "
        "into ASP logic language.\n\n";
    out += "Question: " + question_nl + "\n\n";
    out += "ASP:\n###\n" + render_question_asp(q) + "\n###\n";
    return out;
}

}  // namespace obscura
