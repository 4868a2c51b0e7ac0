#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "obscura/check.hpp"
#include "obscura/constraint.hpp"
#include "obscura/question.hpp"
#include "obscura/rng.hpp"
#include "obscura/scene.hpp"

namespace obscura {

/// One possible identity of the hidden object: four attribute values plus a
/// region. Positions never enter the candidate space; regions carry all the
/// spatial information a hidden object has.
struct HiddenCandidate {
    std::uint8_t color{}, shape{}, size{}, material{}, region{};

    std::uint8_t value(Attribute a) const {
        switch (a) {
            case Attribute::Color: return color;
            case Attribute::Shape: return shape;
            case Attribute::Size: return size;
            case Attribute::Material: return material;
        }
        return 0;
    }

    ObjectSpec to_object(int id) const {
        ObjectSpec o;
        o.id = id;
        o.color = color;
        o.shape = shape;
        o.size = size;
        o.material = material;
        o.region = region;
        return o;
    }

    bool operator==(const HiddenCandidate&) const = default;
};

/// 8 colors x 4 shapes x 3 sizes x 2 materials x 4 regions.
inline constexpr int kHiddenCandidateCount = 768;

inline HiddenCandidate candidate_from_index(int idx) {
    HiddenCandidate h;
    h.region = static_cast<std::uint8_t>(idx % kRegionCount);
    idx /= kRegionCount;
    h.material = static_cast<std::uint8_t>(idx % 2);
    idx /= 2;
    h.size = static_cast<std::uint8_t>(idx % 3);
    idx /= 3;
    h.shape = static_cast<std::uint8_t>(idx % 4);
    idx /= 4;
    h.color = static_cast<std::uint8_t>(idx);
    return h;
}

inline int candidate_index(const HiddenCandidate& h) {
    return (((h.color * 4 + h.shape) * 3 + h.size) * 2 + h.material) * kRegionCount + h.region;
}

namespace detail {

/// Decides whether a hidden candidate admits a satisfying binding of the
/// question body. The query variable is the hidden object; every other
/// variable binds a distinct visible object. Relations touching the hidden
/// object are read possibilistically through the region topology: the atom
/// holds if the candidate's region can stand in that relation at all.
class QuestionBinder {
public:
    QuestionBinder(const SceneGraph& partial, const QuestionForm& q) : scene_(partial), q_(q) {
        for (const PropertyAtom& p : q.properties)
            if (p.var == q.query_var) hidden_ground_.push_back(p.value);
        for (int v = 0; v < q.var_count; ++v) {
            if (v == q.query_var) continue;
            vars_.push_back(v);
            std::vector<int> pool;
            for (std::size_t i = 0; i < partial.objects.size(); ++i) {
                bool ok = true;
                for (const PropertyAtom& p : q.properties)
                    if (p.var == v && partial.objects[i].value(p.value.attr) != p.value.value) {
                        ok = false;
                        break;
                    }
                if (ok) pool.push_back(static_cast<int>(i));
            }
            pools_.push_back(std::move(pool));
        }
    }

    bool admits(const HiddenCandidate& h) const {
        for (const AttrValue& av : hidden_ground_)
            if (h.value(av.attr) != av.value) return false;
        std::vector<int> chosen(vars_.size(), -1);
        return bind(0, h, chosen);
    }

private:
    bool bind(std::size_t k, const HiddenCandidate& h, std::vector<int>& chosen) const {
        if (k == vars_.size()) return atoms_hold(h, chosen);
        for (int idx : pools_[k]) {
            bool used = false;
            for (std::size_t j = 0; j < k; ++j)
                if (chosen[j] == idx) used = true;
            if (used) continue;
            chosen[k] = idx;
            if (bind(k + 1, h, chosen)) return true;
        }
        chosen[k] = -1;
        return false;
    }

    // Variable -> bound visible object index, or -1 for the hidden object.
    int slot(int var, const std::vector<int>& chosen) const {
        if (var == q_.query_var) return -1;
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == var) return chosen[i];
        return -1;
    }

    std::uint8_t value_of(int slot_idx, const HiddenCandidate& h, Attribute a) const {
        if (slot_idx < 0) return h.value(a);
        return scene_.objects[static_cast<std::size_t>(slot_idx)].value(a);
    }

    std::uint8_t region_of(int slot_idx, const HiddenCandidate& h) const {
        if (slot_idx < 0) return h.region;
        return scene_.objects[static_cast<std::size_t>(slot_idx)].region;
    }

    bool atoms_hold(const HiddenCandidate& h, const std::vector<int>& chosen) const {
        for (const SamePropertyAtom& sp : q_.same_properties) {
            int a = slot(sp.a, chosen), b = slot(sp.b, chosen);
            if (a >= 0 && b >= 0 && a == b) return false;  // sameProperty implies distinctness
            if (value_of(a, h, sp.attr) != value_of(b, h, sp.attr)) return false;
        }
        for (const InequalityAtom& ineq : q_.inequalities) {
            int a = slot(ineq.a, chosen), b = slot(ineq.b, chosen);
            if (a >= 0 && b >= 0 && a == b) return false;
        }
        for (const RelationAtom& r : q_.relations) {
            int a = slot(r.a, chosen), b = slot(r.b, chosen);
            if (a >= 0 && b >= 0) {
                if (a == b) return false;
                int id_b = scene_.objects[static_cast<std::size_t>(b)].id;
                const std::vector<int>& row =
                    scene_.relations[static_cast<std::size_t>(r.rel)][static_cast<std::size_t>(a)];
                bool found = false;
                for (int x : row)
                    if (x == id_b) found = true;
                if (!found) return false;
            } else if (a >= 0) {
                // hidden stands in r.rel to the object bound at a
                if (!region_set_contains(region_relation(r.rel, region_of(a, h)), h.region))
                    return false;
            } else {
                // the object bound at b stands in r.rel to hidden
                if (!region_set_contains(region_relation(r.rel, h.region), region_of(b, h)))
                    return false;
            }
        }
        return true;
    }

    const SceneGraph& scene_;
    const QuestionForm& q_;
    std::vector<AttrValue> hidden_ground_;
    std::vector<int> vars_;
    std::vector<std::vector<int>> pools_;
};

inline bool qualifier_ok(const ObjectSpec& o, const ConstraintInstance& c) {
    return c.values.empty() || o.value(c.values[0].attr) == c.values[0].value;
}

inline bool qualifier_ok(const HiddenCandidate& h, const ConstraintInstance& c) {
    return c.values.empty() || h.value(c.values[0].attr) == c.values[0].value;
}

/// Ordered same-property tuples among visible objects for a pair constraint.
inline int visible_pair_tuples(const std::vector<ObjectSpec>& vis, const ConstraintInstance& c) {
    int count = 0;
    for (const ObjectSpec& a : vis) {
        if (a.region != c.regions[0] || !qualifier_ok(a, c)) continue;
        for (const ObjectSpec& b : vis) {
            if (b.id == a.id || b.region != c.regions[1] || !qualifier_ok(b, c)) continue;
            if (a.value(*c.attribute) == b.value(*c.attribute)) ++count;
        }
    }
    return count;
}

/// Extra tuples a hidden candidate contributes to a pair constraint.
inline int hidden_pair_delta(const std::vector<ObjectSpec>& vis, const ConstraintInstance& c,
                             const HiddenCandidate& h) {
    if (!qualifier_ok(h, c)) return 0;
    int d = 0;
    if (h.region == c.regions[0])
        for (const ObjectSpec& b : vis)
            if (b.region == c.regions[1] && qualifier_ok(b, c) &&
                b.value(*c.attribute) == h.value(*c.attribute))
                ++d;
    if (h.region == c.regions[1])
        for (const ObjectSpec& a : vis)
            if (a.region == c.regions[0] && qualifier_ok(a, c) &&
                a.value(*c.attribute) == h.value(*c.attribute))
                ++d;
    return d;
}

}  // namespace detail

/// All hidden-object completions of a partial scene consistent with the
/// environment and, when given, the question body. The grid of 768
/// (color, shape, size, material, region) combinations is filtered with
/// precomputed visible-side counts, so each candidate costs near-constant
/// work. Throws std::invalid_argument when the environment fixes a scene
/// size that disagrees with the partial scene.
inline std::vector<HiddenCandidate> enumerate_hidden_candidates(
    const SceneGraph& partial, const Environment& env, const QuestionForm* question = nullptr) {
    const std::vector<ObjectSpec>& vis = partial.objects;
    if (env.object_count && *env.object_count != static_cast<int>(vis.size()) + 1)
        throw std::invalid_argument(
            "partial scene plus hidden object has " + std::to_string(vis.size() + 1) +
            " objects, environment fixes " + std::to_string(*env.object_count));

    const int capacity = region_capacity(env);
    int region_count[kRegionCount] = {};
    for (const ObjectSpec& o : vis) ++region_count[o.region];
    for (int r = 0; r < kRegionCount; ++r)
        if (region_count[r] > capacity) return {};
    for (std::size_t i = 0; i < vis.size(); ++i)
        for (std::size_t j = i + 1; j < vis.size(); ++j)
            if (vis[i].same_four_properties(vis[j])) return {};

    // Visible objects must already satisfy every per-object rule; the hidden
    // object cannot repair those.
    struct CountState {
        const ConstraintInstance* c;
        int visible;
    };
    std::vector<const ConstraintInstance*> per_object;
    std::vector<CountState> exactly, pairs;
    for (const ConstraintInstance& c : env.constraints) {
        switch (c.form) {
            case ConstraintTemplate::ValueRestriction:
            case ConstraintTemplate::Negation:
            case ConstraintTemplate::Or: {
                SceneGraph probe;
                probe.objects = vis;
                if (evaluate_constraint(probe, c, std::size_t{0})) return {};
                per_object.push_back(&c);
                break;
            }
            case ConstraintTemplate::ExactlyN: {
                int n = 0;
                for (const ObjectSpec& o : vis)
                    if (o.region == c.regions[0] && o.value(c.values[0].attr) == c.values[0].value)
                        ++n;
                exactly.push_back({&c, n});
                break;
            }
            case ConstraintTemplate::AtLeastNPairs:
            case ConstraintTemplate::AtMostNPairs:
                pairs.push_back({&c, detail::visible_pair_tuples(vis, c)});
                break;
            case ConstraintTemplate::RegionCapacity:
            case ConstraintTemplate::ObjectCount:
            case ConstraintTemplate::Distinctness:
                break;  // handled globally above / by the capacity filter
        }
    }

    std::optional<detail::QuestionBinder> binder;
    if (question) binder.emplace(partial, *question);

    std::vector<HiddenCandidate> result;
    for (int idx = 0; idx < kHiddenCandidateCount; ++idx) {
        HiddenCandidate h = candidate_from_index(idx);
        if (region_count[h.region] + 1 > capacity) continue;

        bool ok = true;
        for (const ObjectSpec& o : vis)
            if (o.color == h.color && o.shape == h.shape && o.size == h.size &&
                o.material == h.material) {
                ok = false;
                break;
            }
        if (!ok) continue;

        for (const ConstraintInstance* c : per_object) {
            if (h.region != c->regions[0]) continue;
            bool m0 = h.value(c->values[0].attr) == c->values[0].value;
            switch (c->form) {
                case ConstraintTemplate::ValueRestriction: ok = m0; break;
                case ConstraintTemplate::Negation: ok = !m0; break;
                case ConstraintTemplate::Or:
                    ok = m0 || h.value(c->values[1].attr) == c->values[1].value;
                    break;
                default: break;
            }
            if (!ok) break;
        }
        if (!ok) continue;

        for (const CountState& s : exactly) {
            int n = s.visible;
            if (h.region == s.c->regions[0] &&
                h.value(s.c->values[0].attr) == s.c->values[0].value)
                ++n;
            if (n != *s.c->count) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;

        for (const CountState& s : pairs) {
            int n = s.visible + detail::hidden_pair_delta(vis, *s.c, h);
            bool within = s.c->form == ConstraintTemplate::AtLeastNPairs ? n >= *s.c->count
                                                                         : n <= *s.c->count;
            if (!within) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;

        if (binder && !binder->admits(h)) continue;
        result.push_back(h);
    }
    return result;
}

/// Restart and step bounds for randomized scene search.
struct SearchBudget {
    int max_restarts = 10000;
    long long max_steps = 1000000;
    std::uint64_t seed = 0;
};

namespace detail {

/// Cheap rejections while a scene is being drawn object by object. Only the
/// constraints a prefix can already break are tested; the full check runs
/// once the draw completes.
inline bool placement_ok(const std::vector<ObjectSpec>& prefix, const ObjectSpec& o,
                         const Environment& env) {
    for (const ObjectSpec& p : prefix)
        if (p.same_four_properties(o)) return false;
    for (const ConstraintInstance& c : env.constraints) {
        switch (c.form) {
            case ConstraintTemplate::ValueRestriction:
                if (o.region == c.regions[0] && o.value(c.values[0].attr) != c.values[0].value)
                    return false;
                break;
            case ConstraintTemplate::Negation:
                if (o.region == c.regions[0] && o.value(c.values[0].attr) == c.values[0].value)
                    return false;
                break;
            case ConstraintTemplate::Or:
                if (o.region == c.regions[0] && o.value(c.values[0].attr) != c.values[0].value &&
                    o.value(c.values[1].attr) != c.values[1].value)
                    return false;
                break;
            case ConstraintTemplate::ExactlyN: {
                if (o.region != c.regions[0] || o.value(c.values[0].attr) != c.values[0].value)
                    break;
                int n = 1;
                for (const ObjectSpec& p : prefix)
                    if (p.region == c.regions[0] && p.value(c.values[0].attr) == c.values[0].value)
                        ++n;
                if (n > *c.count) return false;
                break;
            }
            case ConstraintTemplate::AtMostNPairs: {
                HiddenCandidate h{o.color, o.shape, o.size, o.material, o.region};
                if (visible_pair_tuples(prefix, c) + hidden_pair_delta(prefix, c, h) > *c.count)
                    return false;
                break;
            }
            default: break;
        }
    }
    return true;
}

inline bool assign_positions(std::vector<ObjectSpec>& objects, Rng& rng) {
    std::vector<Vec2> placed;
    for (ObjectSpec& o : objects) {
        Box box = quadrant_box(o.region);
        bool found = false;
        for (int attempt = 0; attempt < 200 && !found; ++attempt) {
            Vec2 p{rng.uniform_real(box.x_lo, box.x_hi), rng.uniform_real(box.y_lo, box.y_hi)};
            found = true;
            for (const Vec2& q : placed) {
                double dx = p.x - q.x, dy = p.y - q.y;
                if (dx * dx + dy * dy < kMinSeparation * kMinSeparation ||
                    std::abs(dx) <= kAxisEpsilon || std::abs(dy) <= kAxisEpsilon) {
                    found = false;
                    break;
                }
            }
            if (found) {
                o.position = p;
                placed.push_back(p);
            }
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace detail

/// Draws a complete scene of `object_count` objects satisfying the
/// environment, or nullopt once the budget runs out. Identical budgets and
/// seeds give identical scenes. Throws std::invalid_argument if the requested
/// size can never fit the regions.
inline std::optional<SceneGraph> sample_scene(const Environment& env, int object_count,
                                              const SearchBudget& budget) {
    const int capacity = region_capacity(env);
    if (object_count < 1 || object_count > kRegionCount * capacity)
        throw std::invalid_argument("object count " + std::to_string(object_count) +
                                    " cannot fit four regions of " + std::to_string(capacity));
    if (env.object_count && *env.object_count != object_count) return std::nullopt;

    Rng rng(budget.seed);
    long long steps = 0;
    for (int restart = 0; restart < budget.max_restarts; ++restart) {
        std::vector<ObjectSpec> objects;
        int region_count[kRegionCount] = {};
        bool complete = true;
        for (int i = 0; i < object_count && complete; ++i) {
            bool placed = false;
            for (int attempt = 0; attempt < 40 && !placed; ++attempt) {
                if (++steps > budget.max_steps) return std::nullopt;
                ObjectSpec o;
                o.id = i;
                o.region = static_cast<std::uint8_t>(rng.uniform_int(0, kRegionCount - 1));
                if (region_count[o.region] >= capacity) continue;
                o.color = static_cast<std::uint8_t>(
                    rng.uniform_int(0, AttributeCatalog::value_count(Attribute::Color) - 1));
                o.shape = static_cast<std::uint8_t>(
                    rng.uniform_int(0, AttributeCatalog::value_count(Attribute::Shape) - 1));
                o.size = static_cast<std::uint8_t>(
                    rng.uniform_int(0, AttributeCatalog::value_count(Attribute::Size) - 1));
                o.material = static_cast<std::uint8_t>(
                    rng.uniform_int(0, AttributeCatalog::value_count(Attribute::Material) - 1));
                if (!detail::placement_ok(objects, o, env)) continue;
                objects.push_back(o);
                ++region_count[o.region];
                placed = true;
            }
            if (!placed) complete = false;
        }
        if (!complete) continue;

        SceneGraph scene;
        scene.objects = std::move(objects);
        scene.completeness = Completeness::Complete;
        if (!check_scene(scene, env).satisfied()) continue;
        if (!detail::assign_positions(scene.objects, rng)) continue;
        scene.relations = relations_from_positions(scene.objects);
        return scene;
    }
    return std::nullopt;
}

}  // namespace obscura
