#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "obscura/error.hpp"
#include "obscura/scene.hpp"

namespace obscura {

inline constexpr int kSceneSchemaVersion = 1;

namespace detail {

inline nlohmann::ordered_json object_to_json(const ObjectSpec& o) {
    // Key order follows the scene-graph text format: material, color, size,
    // region, shape. Region is a string there.
    nlohmann::ordered_json j;
    j["material"] = attr_value_name({Attribute::Material, o.material});
    j["color"] = attr_value_name({Attribute::Color, o.color});
    j["size"] = attr_value_name({Attribute::Size, o.size});
    j["region"] = std::to_string(o.region);
    j["shape"] = attr_value_name({Attribute::Shape, o.shape});
    return j;
}

inline std::uint8_t value_from_json(const nlohmann::ordered_json& j, const char* key,
                                    Attribute attr) {
    if (!j.contains(key) || !j[key].is_string())
        throw SchemaError(std::string("object lacks a '") + key + "' string");
    std::string name = j[key].get<std::string>();
    auto v = AttributeCatalog::find_value(attr, name);
    if (!v) throw SchemaError("unknown " + std::string(key) + " value '" + name + "'");
    return *v;
}

inline std::uint8_t region_from_json(const nlohmann::ordered_json& j) {
    int r = -1;
    if (j.is_string()) {
        const std::string& s = j.get_ref<const std::string&>();
        if (s.size() == 1 && s[0] >= '0' && s[0] <= '9') r = s[0] - '0';
    } else if (j.is_number_integer()) {
        r = j.get<int>();
    }
    if (r < 0 || r >= kRegionCount) throw SchemaError("region out of range");
    return static_cast<std::uint8_t>(r);
}

}  // namespace detail

/// Serializes a scene. Objects and relationships match the scene-graph text
/// format; positions and metadata are extensions (positions only when every
/// object has one). `hidden` adds the removed object to the metadata of a
/// partial scene.
inline nlohmann::ordered_json scene_to_json(const SceneGraph& scene,
                                            const std::optional<ObjectSpec>& hidden = {}) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSceneSchemaVersion;
    j["objects"] = nlohmann::ordered_json::array();
    for (const ObjectSpec& o : scene.objects) j["objects"].push_back(detail::object_to_json(o));

    nlohmann::ordered_json rels;
    for (Relation r : {Relation::Left, Relation::Front, Relation::Behind, Relation::Right}) {
        nlohmann::ordered_json lists = nlohmann::ordered_json::array();
        for (const std::vector<int>& row : scene.relations[static_cast<std::size_t>(r)])
            lists.push_back(row);
        rels[std::string(relation_name(r))] = std::move(lists);
    }
    j["relationships"] = std::move(rels);

    bool all_positioned = !scene.objects.empty();
    for (const ObjectSpec& o : scene.objects)
        if (!o.position) all_positioned = false;
    if (all_positioned) {
        nlohmann::ordered_json pos = nlohmann::ordered_json::array();
        for (const ObjectSpec& o : scene.objects)
            pos.push_back(nlohmann::ordered_json::array({o.position->x, o.position->y}));
        j["positions"] = std::move(pos);
    }

    nlohmann::ordered_json meta;
    meta["completeness"] =
        scene.completeness == Completeness::Complete ? "complete" : "partial";
    if (hidden) {
        nlohmann::ordered_json h = detail::object_to_json(*hidden);
        h["original_id"] = hidden->id;
        if (hidden->position)
            h["position"] = nlohmann::ordered_json::array({hidden->position->x, hidden->position->y});
        meta["hidden"] = std::move(h);
    }
    j["metadata"] = std::move(meta);
    return j;
}

struct SceneFile {
    SceneGraph scene;
    std::optional<ObjectSpec> hidden;
};

/// Rebuilds a scene from JSON. Tolerates the bare text format (objects and
/// relationships only): relations are taken as given, or derived from
/// positions when present, or left empty.
inline SceneFile scene_from_json(const nlohmann::ordered_json& j) {
    if (j.contains("schema_version") &&
        (!j["schema_version"].is_number_integer() ||
         j["schema_version"].get<int>() != kSceneSchemaVersion))
        throw SchemaError("unsupported scene schema version");
    if (!j.contains("objects") || !j["objects"].is_array())
        throw SchemaError("scene lacks an object list");

    SceneFile out;
    SceneGraph& scene = out.scene;
    for (const auto& jo : j["objects"]) {
        ObjectSpec o;
        o.id = scene.object_count();
        o.material = detail::value_from_json(jo, "material", Attribute::Material);
        o.color = detail::value_from_json(jo, "color", Attribute::Color);
        o.size = detail::value_from_json(jo, "size", Attribute::Size);
        o.shape = detail::value_from_json(jo, "shape", Attribute::Shape);
        if (!jo.contains("region")) throw SchemaError("object lacks a region");
        o.region = detail::region_from_json(jo["region"]);
        scene.objects.push_back(o);
    }

    const std::size_t n = scene.objects.size();
    if (j.contains("positions")) {
        if (!j["positions"].is_array() || j["positions"].size() != n)
            throw SchemaError("positions do not match the object list");
        for (std::size_t i = 0; i < n; ++i) {
            const auto& p = j["positions"][i];
            if (!p.is_array() || p.size() != 2) throw SchemaError("malformed position");
            scene.objects[i].position = Vec2{p[0].get<double>(), p[1].get<double>()};
        }
    }

    if (j.contains("relationships")) {
        const auto& rels = j["relationships"];
        for (Relation r : kRelations) {
            std::string name(relation_name(r));
            if (!rels.contains(name)) throw SchemaError("relationships lack '" + name + "'");
            const auto& lists = rels[name];
            if (!lists.is_array() || lists.size() != n)
                throw SchemaError("relationship lists do not match the object list");
            auto& target = scene.relations[static_cast<std::size_t>(r)];
            target.assign(n, {});
            for (std::size_t i = 0; i < n; ++i) {
                if (!lists[i].is_array()) throw SchemaError("malformed relationship row");
                for (const auto& x : lists[i]) {
                    int id = x.get<int>();
                    if (id < 0 || id >= static_cast<int>(n))
                        throw SchemaError("relationship id out of range");
                    target[i].push_back(id);
                }
                std::sort(target[i].begin(), target[i].end());
            }
        }
    } else {
        bool all_positioned = n > 0;
        for (const ObjectSpec& o : scene.objects)
            if (!o.position) all_positioned = false;
        if (all_positioned)
            scene.relations = relations_from_positions(scene.objects);
        else
            for (auto& lists : scene.relations) lists.assign(n, {});
    }

    if (j.contains("metadata")) {
        const auto& meta = j["metadata"];
        if (meta.contains("completeness") && meta["completeness"].is_string())
            scene.completeness = meta["completeness"].get<std::string>() == "partial"
                                     ? Completeness::Partial
                                     : Completeness::Complete;
        if (meta.contains("hidden")) {
            const auto& h = meta["hidden"];
            ObjectSpec hidden;
            hidden.material = detail::value_from_json(h, "material", Attribute::Material);
            hidden.color = detail::value_from_json(h, "color", Attribute::Color);
            hidden.size = detail::value_from_json(h, "size", Attribute::Size);
            hidden.shape = detail::value_from_json(h, "shape", Attribute::Shape);
            if (!h.contains("region")) throw SchemaError("hidden object lacks a region");
            hidden.region = detail::region_from_json(h["region"]);
            if (h.contains("original_id")) hidden.id = h["original_id"].get<int>();
            if (h.contains("position") && h["position"].is_array() && h["position"].size() == 2)
                hidden.position = Vec2{h["position"][0].get<double>(),
                                       h["position"][1].get<double>()};
            scene.hidden_ref = hidden.id;
            out.hidden = hidden;
        }
    }
    return out;
}

/// Accepts both strict JSON and the single-quoted Python-dict style of the
/// scene-graph text blocks. Attribute names never contain quotes, so a plain
/// quote swap is lossless.
inline SceneFile parse_scene_text(std::string_view text) {
    std::string normalized(text);
    for (char& c : normalized)
        if (c == '\'') c = '"';
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(normalized);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("malformed scene text: ") + e.what());
    }
    return scene_from_json(j);
}

inline void write_scene_file(const std::filesystem::path& path, const SceneGraph& scene,
                             const std::optional<ObjectSpec>& hidden = {}) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot write " + path.string());
    out << scene_to_json(scene, hidden).dump(2) << "\n";
}

inline SceneFile read_scene_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scene_text(buf.str());
}

/// The scene-graph block used in prompts: objects and relationships only,
/// rendered as a Python dict literal.
inline std::string scene_python_repr(const SceneGraph& scene) {
    std::string out = "{'objects': [";
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        const ObjectSpec& o = scene.objects[i];
        if (i) out += ", ";
        out += "{'material': '" + attr_value_name({Attribute::Material, o.material}) +
               "', 'color': '" + attr_value_name({Attribute::Color, o.color}) +
               "', 'size': '" + attr_value_name({Attribute::Size, o.size}) +
               "', 'region': '" + std::to_string(o.region) +
               "', 'shape': '" + attr_value_name({Attribute::Shape, o.shape}) + "'}";
    }
    out += "], 'relationships': {";
    bool first_rel = true;
    for (Relation r : {Relation::Left, Relation::Front, Relation::Behind, Relation::Right}) {
        if (!first_rel) out += ", ";
        first_rel = false;
        out += "'" + std::string(relation_name(r)) + "': [";
        const auto& lists = scene.relations[static_cast<std::size_t>(r)];
        for (std::size_t i = 0; i < lists.size(); ++i) {
            if (i) out += ", ";
            out += "[";
            for (std::size_t k = 0; k < lists[i].size(); ++k) {
                if (k) out += ", ";
                out += std::to_string(lists[i][k]);
            }
            out += "]";
        }
        out += "]";
    }
    out += "}}";
    return out;
}

}  // namespace obscura
