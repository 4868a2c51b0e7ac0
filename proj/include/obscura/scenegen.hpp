#pragma once

#include <cstdint>
#include <utility>

#include "obscura/envgen.hpp"
#include "obscura/error.hpp"
#include "obscura/rng.hpp"
#include "obscura/scene.hpp"
#include "obscura/solver.hpp"

namespace obscura {

/// Draws a complete scene of n objects for an environment. Wraps sample_scene
/// with the standard budget and turns exhaustion into a hard error.
inline SceneGraph generate_complete_scene(const Environment& env, int object_count,
                                          std::uint64_t seed) {
    SearchBudget budget;
    budget.seed = seed;
    std::optional<SceneGraph> scene = sample_scene(env, object_count, budget);
    if (!scene)
        throw GenerationError("no scene with " + std::to_string(object_count) +
                              " objects found for environment " + std::to_string(env.id));
    return *scene;
}

/// Removes one uniformly drawn object. The survivors are reindexed 0..n-2 in
/// their original order and their relations recomputed; the removed object is
/// returned with its original id, which partial.hidden_ref also records.
inline std::pair<SceneGraph, ObjectSpec> make_partial(const SceneGraph& complete,
                                                      std::uint64_t seed) {
    Rng rng(seed);
    int k = rng.uniform_int(0, complete.object_count() - 1);
    ObjectSpec hidden = complete.objects[static_cast<std::size_t>(k)];

    SceneGraph partial;
    partial.completeness = Completeness::Partial;
    partial.hidden_ref = hidden.id;
    for (const ObjectSpec& o : complete.objects) {
        if (o.id == hidden.id) continue;
        ObjectSpec survivor = o;
        survivor.id = partial.object_count();
        partial.objects.push_back(survivor);
    }
    partial.relations = relations_from_positions(partial.objects);
    return {std::move(partial), hidden};
}

/// Undoes make_partial: the hidden object slots back at its original index
/// and ids are restored. Relations are recomputed from positions.
inline SceneGraph reassemble(const SceneGraph& partial, const ObjectSpec& hidden) {
    SceneGraph complete;
    complete.completeness = Completeness::Complete;
    for (const ObjectSpec& o : partial.objects) {
        ObjectSpec restored = o;
        restored.id = o.id < hidden.id ? o.id : o.id + 1;
        complete.objects.push_back(restored);
    }
    complete.objects.insert(complete.objects.begin() + hidden.id, hidden);
    complete.relations = relations_from_positions(complete.objects);
    return complete;
}

}  // namespace obscura
