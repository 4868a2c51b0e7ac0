#pragma once

#include <vector>

#include "obscura/answer.hpp"
#include "obscura/constraint.hpp"
#include "obscura/error.hpp"
#include "obscura/question.hpp"
#include "obscura/scene.hpp"
#include "obscura/solver.hpp"

// Deliberately plain re-implementation of scene checking and hidden-object
// solving: straight loops, no precomputation, no shared evaluation code with
// check.hpp or solver.hpp. Exists so the fast paths have something
// independent to disagree with.

namespace obscura::naive {

inline int count_in_region(const std::vector<ObjectSpec>& objs, int region) {
    int n = 0;
    for (const ObjectSpec& o : objs)
        if (o.region == region) ++n;
    return n;
}

/// Every constraint of the environment plus the ambient rules, evaluated
/// directly on the object list.
inline bool objects_satisfy(const std::vector<ObjectSpec>& objs, const Environment& env) {
    if (env.object_count && static_cast<int>(objs.size()) != *env.object_count) return false;

    int capacity = kDefaultRegionCapacity;
    for (const ConstraintInstance& c : env.constraints)
        if (c.form == ConstraintTemplate::RegionCapacity) capacity = *c.count;
    for (int r = 0; r < kRegionCount; ++r)
        if (count_in_region(objs, r) > capacity) return false;

    for (std::size_t i = 0; i < objs.size(); ++i)
        for (std::size_t j = 0; j < objs.size(); ++j)
            if (i != j && objs[i].color == objs[j].color && objs[i].shape == objs[j].shape &&
                objs[i].size == objs[j].size && objs[i].material == objs[j].material)
                return false;

    for (const ConstraintInstance& c : env.constraints) {
        switch (c.form) {
            case ConstraintTemplate::ValueRestriction:
                for (const ObjectSpec& o : objs)
                    if (o.region == c.regions[0] && o.value(c.values[0].attr) != c.values[0].value)
                        return false;
                break;
            case ConstraintTemplate::Negation:
                for (const ObjectSpec& o : objs)
                    if (o.region == c.regions[0] && o.value(c.values[0].attr) == c.values[0].value)
                        return false;
                break;
            case ConstraintTemplate::Or:
                for (const ObjectSpec& o : objs)
                    if (o.region == c.regions[0] &&
                        o.value(c.values[0].attr) != c.values[0].value &&
                        o.value(c.values[1].attr) != c.values[1].value)
                        return false;
                break;
            case ConstraintTemplate::ExactlyN: {
                int n = 0;
                for (const ObjectSpec& o : objs)
                    if (o.region == c.regions[0] && o.value(c.values[0].attr) == c.values[0].value)
                        ++n;
                if (n != *c.count) return false;
                break;
            }
            case ConstraintTemplate::AtLeastNPairs:
            case ConstraintTemplate::AtMostNPairs: {
                int n = 0;
                for (const ObjectSpec& a : objs)
                    for (const ObjectSpec& b : objs) {
                        if (a.id == b.id) continue;
                        if (a.region != c.regions[0] || b.region != c.regions[1]) continue;
                        if (a.value(*c.attribute) != b.value(*c.attribute)) continue;
                        if (!c.values.empty() &&
                            (a.value(c.values[0].attr) != c.values[0].value ||
                             b.value(c.values[0].attr) != c.values[0].value))
                            continue;
                        ++n;
                    }
                if (c.form == ConstraintTemplate::AtLeastNPairs && n < *c.count) return false;
                if (c.form == ConstraintTemplate::AtMostNPairs && n > *c.count) return false;
                break;
            }
            case ConstraintTemplate::RegionCapacity:
            case ConstraintTemplate::ObjectCount:
            case ConstraintTemplate::Distinctness:
                break;  // covered above / by env.object_count
        }
    }
    return true;
}

inline bool scene_satisfies(const SceneGraph& scene, const Environment& env) {
    return objects_satisfy(scene.objects, env);
}

/// True when some assignment of the question variables satisfies every atom.
/// The query variable is the hidden object; the rest range over the visible
/// objects of the partial scene, distinct from one another. Relations against
/// the hidden object hold when the region topology allows them at all.
inline bool question_holds(const SceneGraph& partial, const ObjectSpec& hidden,
                           const QuestionForm& q) {
    for (const PropertyAtom& p : q.properties)
        if (p.var == q.query_var && hidden.value(p.value.attr) != p.value.value) return false;

    std::vector<int> other_vars;
    for (int v = 0; v < q.var_count; ++v)
        if (v != q.query_var) other_vars.push_back(v);

    const int n = static_cast<int>(partial.objects.size());
    const int k = static_cast<int>(other_vars.size());
    if (k > n) return false;

    std::vector<int> pick(static_cast<std::size_t>(k), 0);
    while (true) {
        bool distinct = true;
        for (int i = 0; i < k && distinct; ++i)
            for (int j = i + 1; j < k; ++j)
                if (pick[static_cast<std::size_t>(i)] == pick[static_cast<std::size_t>(j)]) {
                    distinct = false;
                    break;
                }
        if (distinct) {
            auto lookup = [&](int var) -> const ObjectSpec& {
                if (var == q.query_var) return hidden;
                for (int i = 0; i < k; ++i)
                    if (other_vars[static_cast<std::size_t>(i)] == var)
                        return partial.objects[static_cast<std::size_t>(
                            pick[static_cast<std::size_t>(i)])];
                return hidden;
            };
            auto is_hidden = [&](int var) { return var == q.query_var; };

            bool ok = true;
            for (const PropertyAtom& p : q.properties)
                if (lookup(p.var).value(p.value.attr) != p.value.value) ok = false;
            for (const SamePropertyAtom& sp : q.same_properties) {
                if (!is_hidden(sp.a) && !is_hidden(sp.b) && lookup(sp.a).id == lookup(sp.b).id)
                    ok = false;
                if (lookup(sp.a).value(sp.attr) != lookup(sp.b).value(sp.attr)) ok = false;
            }
            for (const InequalityAtom& ineq : q.inequalities)
                if (!is_hidden(ineq.a) && !is_hidden(ineq.b) &&
                    lookup(ineq.a).id == lookup(ineq.b).id)
                    ok = false;
            for (const RelationAtom& r : q.relations) {
                const ObjectSpec& a = lookup(r.a);
                const ObjectSpec& b = lookup(r.b);
                if (is_hidden(r.a) && is_hidden(r.b)) {
                    ok = false;
                } else if (is_hidden(r.a) || is_hidden(r.b)) {
                    // possibilistic: can something in b's region stand in rel
                    // to something in a's region?
                    if (!region_set_contains(region_relation(r.rel, a.region), b.region))
                        ok = false;
                } else {
                    if (a.id == b.id) ok = false;
                    bool found = false;
                    for (int x : partial.relations[static_cast<std::size_t>(r.rel)]
                                                  [static_cast<std::size_t>(a.id)])
                        if (x == b.id) found = true;
                    if (!found) ok = false;
                }
            }
            if (ok) return true;
        }
        // next assignment
        int i = k - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - 1) {
            pick[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
    }
    return false;
}

/// Grinds over all 768 completions, keeping those that satisfy the
/// environment and the question.
inline std::vector<HiddenCandidate> hidden_candidates(const SceneGraph& partial,
                                                      const Environment& env,
                                                      const QuestionForm* q) {
    std::vector<HiddenCandidate> kept;
    const int hidden_id = static_cast<int>(partial.objects.size());
    for (int color = 0; color < 8; ++color)
        for (int shape = 0; shape < 4; ++shape)
            for (int size = 0; size < 3; ++size)
                for (int material = 0; material < 2; ++material)
                    for (int region = 0; region < 4; ++region) {
                        ObjectSpec hidden;
                        hidden.id = hidden_id;
                        hidden.color = static_cast<std::uint8_t>(color);
                        hidden.shape = static_cast<std::uint8_t>(shape);
                        hidden.size = static_cast<std::uint8_t>(size);
                        hidden.material = static_cast<std::uint8_t>(material);
                        hidden.region = static_cast<std::uint8_t>(region);

                        std::vector<ObjectSpec> all = partial.objects;
                        all.push_back(hidden);
                        if (!objects_satisfy(all, env)) continue;
                        if (q && !question_holds(partial, hidden, *q)) continue;
                        kept.push_back(HiddenCandidate{
                            hidden.color, hidden.shape, hidden.size, hidden.material,
                            hidden.region});
                    }
    return kept;
}

/// Independent twin of oracle solve(): same contract, none of the shared
/// machinery. Throws EmptyAnswerError when no completion exists.
inline AnswerSet brute_force_solve(const SceneGraph& partial, const Environment& env,
                                   const QuestionForm& q) {
    std::vector<HiddenCandidate> kept = hidden_candidates(partial, env, &q);
    if (kept.empty())
        throw EmptyAnswerError("no hidden-object completion satisfies the question");
    std::vector<std::uint8_t> values;
    for (const HiddenCandidate& h : kept) values.push_back(h.value(q.query_attribute));
    return make_answer_set(q.query_attribute, std::move(values));
}

}  // namespace obscura::naive
