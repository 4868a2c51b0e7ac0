#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "obscura/constraint.hpp"
#include "obscura/error.hpp"
#include "obscura/rng.hpp"
#include "obscura/solver.hpp"

namespace obscura {

/// Target shares of query attributes across a dataset.
struct QuestionMix {
    double color = 0.4;
    double shape = 0.4;
    double size = 0.1;
    double material = 0.1;

    double at(Attribute a) const {
        switch (a) {
            case Attribute::Color: return color;
            case Attribute::Shape: return shape;
            case Attribute::Size: return size;
            case Attribute::Material: return material;
        }
        return 0;
    }
};

struct GenerationConfig {
    int environment_count = 30;
    /// Hard ceiling on constraints instantiated per environment.
    int max_instantiations = 15;
    /// Minimum constraints touching each region.
    int min_per_region = 2;
    int object_count_min = 5;
    int object_count_max = 9;
    QuestionMix question_mix;
    std::uint64_t master_seed = 0;

    void validate() const {
        auto fail = [](const std::string& what) {
            throw std::invalid_argument("generation config: " + what);
        };
        if (environment_count < 1) fail("environment count must be positive");
        if (object_count_min < 1 || object_count_max > kRegionCount * kDefaultRegionCapacity ||
            object_count_min > object_count_max)
            fail("object count range must lie within 1.." +
                 std::to_string(kRegionCount * kDefaultRegionCapacity));
        if (min_per_region < 0) fail("negative per-region minimum");
        if (max_instantiations < min_per_region * kRegionCount)
            fail("instantiation ceiling below the per-region minimum");
        double sum = question_mix.color + question_mix.shape + question_mix.size +
                     question_mix.material;
        if (sum < 1.0 - 1e-9 || sum > 1.0 + 1e-9) fail("question mix must sum to 1");
        for (Attribute a : kAttributes)
            if (question_mix.at(a) < 0) fail("negative question mix entry");
    }
};

namespace detail {

/// Book-keeping to avoid locally contradictory draws. The satisfiability
/// probe below is the real gate; this only keeps the acceptance rate up.
struct RegionDraft {
    std::array<std::optional<std::uint8_t>, kAttributeCount> fixed;  // ValueRestriction
    std::array<std::uint32_t, kAttributeCount> forbidden{};          // Negation bitmask
    int exactly_here = 0;

    bool fixed_to_other(Attribute a, std::uint8_t v) const {
        auto f = fixed[static_cast<std::size_t>(a)];
        return f && *f != v;
    }
    bool is_forbidden(Attribute a, std::uint8_t v) const {
        return (forbidden[static_cast<std::size_t>(a)] >> v) & 1;
    }
    int forbidden_count(Attribute a) const {
        std::uint32_t m = forbidden[static_cast<std::size_t>(a)];
        int n = 0;
        while (m) {
            n += static_cast<int>(m & 1);
            m >>= 1;
        }
        return n;
    }
};

inline AttrValue draw_value(Rng& rng) {
    Attribute a = kAttributes[static_cast<std::size_t>(rng.uniform_int(0, kAttributeCount - 1))];
    std::uint8_t v =
        static_cast<std::uint8_t>(rng.uniform_int(0, AttributeCatalog::value_count(a) - 1));
    return {a, v};
}

/// One per-region constraint, respecting the draft state; nullopt when the
/// drawn shape conflicts and the caller should redraw.
inline std::optional<ConstraintInstance> draw_region_constraint(Rng& rng, std::uint8_t region,
                                                                RegionDraft& draft,
                                                                int& exactly_total) {
    double roll = rng.uniform_real(0.0, 1.0);
    if (roll < 0.45) {
        // Negation: forbid one value, always leaving at least one open.
        AttrValue av = draw_value(rng);
        if (draft.fixed[static_cast<std::size_t>(av.attr)]) return std::nullopt;
        if (draft.is_forbidden(av.attr, av.value)) return std::nullopt;
        if (draft.forbidden_count(av.attr) + 1 >= AttributeCatalog::value_count(av.attr))
            return std::nullopt;
        draft.forbidden[static_cast<std::size_t>(av.attr)] |= 1u << av.value;
        return make_negation(region, av);
    }
    if (roll < 0.65) {
        // ValueRestriction: pin one attribute.
        AttrValue av = draw_value(rng);
        if (draft.fixed[static_cast<std::size_t>(av.attr)]) return std::nullopt;
        if (draft.is_forbidden(av.attr, av.value)) return std::nullopt;
        draft.fixed[static_cast<std::size_t>(av.attr)] = av.value;
        return make_value_restriction(region, av);
    }
    if (roll < 0.85) {
        // Or: two live disjuncts, same attribute or not.
        AttrValue a = draw_value(rng);
        AttrValue b = draw_value(rng);
        if (a == b) return std::nullopt;
        bool a_dead = draft.fixed_to_other(a.attr, a.value) || draft.is_forbidden(a.attr, a.value);
        bool b_dead = draft.fixed_to_other(b.attr, b.value) || draft.is_forbidden(b.attr, b.value);
        if (a_dead && b_dead) return std::nullopt;
        return make_or(region, a, b);
    }
    // ExactlyN: at most one per region, two per environment.
    if (draft.exactly_here >= 1 || exactly_total >= 2) return std::nullopt;
    AttrValue av = draw_value(rng);
    if (draft.fixed_to_other(av.attr, av.value) || draft.is_forbidden(av.attr, av.value))
        return std::nullopt;
    int n = rng.uniform_int(1, 2);
    ++draft.exactly_here;
    ++exactly_total;
    return make_exactly_n(region, av, n);
}

}  // namespace detail

/// Builds one environment: a few value constraints per region, a few
/// cross-region pair constraints, then a satisfiability probe that demands at
/// least two distinct scenes for every object count in the configured range.
/// Unsatisfiable or overly rigid drafts are rejected and redrawn. Throws
/// GenerationError when no acceptable draft appears within the attempt budget.
inline Environment generate_environment(const GenerationConfig& cfg, std::uint64_t env_seed) {
    cfg.validate();
    Rng rng(env_seed);

    for (int attempt = 0; attempt < 500; ++attempt) {
        Environment env;
        std::array<detail::RegionDraft, kRegionCount> drafts;
        int exactly_total = 0;
        bool gave_up = false;

        for (int r = 0; r < kRegionCount && !gave_up; ++r) {
            int budget_left = cfg.max_instantiations - static_cast<int>(env.constraints.size()) -
                              cfg.min_per_region * (kRegionCount - 1 - r);
            int want = cfg.min_per_region;
            if (budget_left > want && rng.bernoulli(0.5)) ++want;
            for (int k = 0; k < want; ++k) {
                bool drawn = false;
                for (int redraw = 0; redraw < 30 && !drawn; ++redraw) {
                    auto c = detail::draw_region_constraint(
                        rng, static_cast<std::uint8_t>(r),
                        drafts[static_cast<std::size_t>(r)], exactly_total);
                    if (c) {
                        env.constraints.push_back(std::move(*c));
                        drawn = true;
                    }
                }
                if (!drawn) gave_up = true;
            }
        }
        if (gave_up) continue;

        int at_least_total = 0;
        int want_pairs = rng.uniform_int(0, 3);
        for (int k = 0; k < want_pairs; ++k) {
            if (static_cast<int>(env.constraints.size()) >= cfg.max_instantiations) break;
            std::uint8_t r1 = static_cast<std::uint8_t>(rng.uniform_int(0, kRegionCount - 1));
            std::uint8_t r2 = static_cast<std::uint8_t>(rng.uniform_int(0, kRegionCount - 1));
            if (r1 == r2) continue;
            Attribute shared =
                kAttributes[static_cast<std::size_t>(rng.uniform_int(0, kAttributeCount - 1))];
            std::optional<AttrValue> qualifier;
            if (rng.bernoulli(0.5)) {
                AttrValue q = detail::draw_value(rng);
                if (q.attr != shared) qualifier = q;
            }
            if (at_least_total < 2 && rng.bernoulli(0.4)) {
                env.constraints.push_back(make_at_least_pairs(r1, r2, shared, 1, qualifier));
                ++at_least_total;
            } else {
                env.constraints.push_back(
                    make_at_most_pairs(r1, r2, shared, rng.uniform_int(0, 2), qualifier));
            }
        }

        // Probe: every admissible scene size must be reachable, twice over.
        bool feasible = true;
        for (int n = cfg.object_count_min; n <= cfg.object_count_max && feasible; ++n) {
            SearchBudget probe;
            probe.max_restarts = 300;
            probe.max_steps = 60000;
            probe.seed = derive_seed(env_seed, 0x50520000u + static_cast<std::uint64_t>(n));
            auto first = sample_scene(env, n, probe);
            if (!first) {
                feasible = false;
                break;
            }
            bool two_distinct = false;
            for (int alt = 1; alt <= 3 && !two_distinct; ++alt) {
                probe.seed = derive_seed(env_seed, 0x50520000u +
                                                       static_cast<std::uint64_t>(n) +
                                                       static_cast<std::uint64_t>(alt) * 256);
                auto second = sample_scene(env, n, probe);
                if (!second) continue;
                for (std::size_t i = 0; i < first->objects.size(); ++i) {
                    const ObjectSpec& a = first->objects[i];
                    const ObjectSpec& b = second->objects[i];
                    if (a.region != b.region || !a.same_four_properties(b)) {
                        two_distinct = true;
                        break;
                    }
                }
            }
            if (!two_distinct) feasible = false;
        }
        if (feasible) return env;
    }
    throw GenerationError("no satisfiable environment after 500 drafts");
}

/// The full environment pool, ids 0..count-1, each from its own derived seed.
inline std::vector<Environment> generate_environments(const GenerationConfig& cfg) {
    cfg.validate();
    std::vector<Environment> envs;
    envs.reserve(static_cast<std::size_t>(cfg.environment_count));
    for (int i = 0; i < cfg.environment_count; ++i) {
        Environment env =
            generate_environment(cfg, derive_seed(cfg.master_seed,
                                                  0x454E5600u + static_cast<std::uint64_t>(i)));
        env.id = i;
        envs.push_back(std::move(env));
    }
    return envs;
}

}  // namespace obscura
