#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "obscura/answer.hpp"
#include "obscura/envgen.hpp"
#include "obscura/question.hpp"
#include "obscura/rng.hpp"
#include "obscura/scene.hpp"
#include "obscura/solver.hpp"

namespace obscura {

/// Running counts of query attributes, steering each next question toward the
/// configured mix.
struct BalanceLedger {
    std::array<long long, kAttributeCount> counts{};

    long long total() const {
        long long t = 0;
        for (long long c : counts) t += c;
        return t;
    }

    /// The attribute furthest below its target share; ties break in the fixed
    /// attribute order. With the default 40/40/10/10 mix this settles into an
    /// exact period-10 cycle.
    Attribute choose(const QuestionMix& mix) const {
        long long t = total();
        Attribute best = Attribute::Color;
        double best_deficit = -1e18;
        for (Attribute a : kAttributes) {
            double deficit = mix.at(a) * static_cast<double>(t) -
                             static_cast<double>(counts[static_cast<std::size_t>(a)]);
            if (deficit > best_deficit + 1e-12) {
                best_deficit = deficit;
                best = a;
            }
        }
        return best;
    }

    void record(Attribute a) { ++counts[static_cast<std::size_t>(a)]; }
};

inline Attribute choose_query_attribute(const BalanceLedger& ledger, const QuestionMix& mix) {
    return ledger.choose(mix);
}

inline constexpr std::array<std::string_view, 6> kQuestionTemplateIds{
    "relational_what", "relational_there_is", "relational_the",
    "same_prop_what",  "same_prop_there_is",  "same_prop_the"};

struct InstantiatedQuestion {
    QuestionForm form;
    std::string nl;
    std::string template_id;
};

namespace detail {

/// Natural-language word for a value, with the synonym coin flips the
/// question surface uses.
inline std::string value_word(Rng& rng, const AttrValue& av) {
    std::string base = attr_value_name(av);
    if (base == "large") return rng.bernoulli(0.5) ? "big" : "large";
    if (base == "small") return rng.bernoulli(0.5) ? "tiny" : "small";
    if (base == "metal") return rng.bernoulli(0.5) ? "metallic" : "metal";
    return base;
}

/// "big purple object" / "red rubber cube": size, color, material words in
/// that order, then the shape value as the noun when present, otherwise
/// thing/object.
inline std::string descriptor_phrase(Rng& rng, const ObjectSpec& o,
                                     const std::array<bool, kAttributeCount>& included) {
    std::string out;
    auto add = [&](Attribute a) {
        if (!included[static_cast<std::size_t>(a)]) return;
        if (!out.empty()) out += " ";
        out += value_word(rng, {a, o.value(a)});
    };
    add(Attribute::Size);
    add(Attribute::Color);
    add(Attribute::Material);
    if (included[static_cast<std::size_t>(Attribute::Shape)]) {
        if (!out.empty()) out += " ";
        out += attr_value_name({Attribute::Shape, o.shape});
    } else {
        if (!out.empty()) out += " ";
        out += rng.bernoulli(0.5) ? "object" : "thing";
    }
    return out;
}

inline std::string relation_phrase(Relation r) {
    switch (r) {
        case Relation::Left: return "to the left of";
        case Relation::Right: return "to the right of";
        case Relation::Front: return "in front of";
        case Relation::Behind: return "behind";
    }
    return {};
}

/// Random nonempty subset of attributes, excluding the given ones. At least
/// one descriptor keeps references grammatical and gives every question
/// variable a property atom.
inline std::array<bool, kAttributeCount> draw_descriptors(Rng& rng,
                                                          std::uint32_t excluded_mask) {
    std::array<bool, kAttributeCount> inc{};
    std::vector<int> eligible;
    for (int a = 0; a < kAttributeCount; ++a) {
        if ((excluded_mask >> a) & 1) continue;
        eligible.push_back(a);
        inc[static_cast<std::size_t>(a)] = rng.bernoulli(0.5);
    }
    bool any = false;
    for (bool b : inc) any = any || b;
    if (!any && !eligible.empty()) {
        int forced = eligible[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<int>(eligible.size()) - 1))];
        inc[static_cast<std::size_t>(forced)] = true;
    }
    return inc;
}

inline std::uint32_t attr_bit(Attribute a) { return 1u << static_cast<int>(a); }

}  // namespace detail

/// Builds one question about the hidden object of a complete scene: either a
/// spatial-relation reference or a shared-property reference to some other
/// object, phrased through one of six surface templates. Every atom holds in
/// the complete scene, so the true value always survives solving. Returns
/// nullopt when the drawn style cannot be grounded (the caller retries with a
/// fresh seed).
inline std::optional<InstantiatedQuestion> instantiate_question(const SceneGraph& complete,
                                                                int hidden_id,
                                                                Attribute query_attr,
                                                                std::uint64_t seed) {
    Rng rng(seed);
    const ObjectSpec& hidden = complete.objects[static_cast<std::size_t>(hidden_id)];
    if (complete.object_count() < 2) return std::nullopt;

    int style = rng.uniform_int(0, 5);
    bool relational = style < 3;

    QuestionForm q;
    q.head = QuestionHead::Missing;
    q.query_var = 0;
    q.query_attribute = query_attr;
    q.var_count = 2;

    std::string nl;
    if (relational) {
        // Reference: an object the hidden one stands in some relation to.
        std::vector<Relation> rels(kRelations.begin(), kRelations.end());
        rng.shuffle(rels);
        const ObjectSpec* ref = nullptr;
        Relation rel = rels[0];
        for (Relation r : rels) {
            const std::vector<int>& refs =
                complete.relations[static_cast<std::size_t>(inverse(r))]
                                  [static_cast<std::size_t>(hidden_id)];
            if (refs.empty()) continue;
            rel = r;
            int ref_id = refs[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<int>(refs.size()) - 1))];
            ref = &complete.objects[static_cast<std::size_t>(ref_id)];
            break;
        }
        if (!ref) return std::nullopt;

        auto dx = detail::draw_descriptors(rng, detail::attr_bit(query_attr));
        auto dy = detail::draw_descriptors(rng, 0);
        for (int a = 0; a < kAttributeCount; ++a) {
            Attribute attr = static_cast<Attribute>(a);
            if (dx[static_cast<std::size_t>(a)])
                q.properties.push_back({0, {attr, hidden.value(attr)}});
            if (dy[static_cast<std::size_t>(a)])
                q.properties.push_back({1, {attr, ref->value(attr)}});
        }
        q.relations.push_back({rel, 1, 0});  // hidden (X) stands in rel to ref (Y)

        std::string sx = detail::descriptor_phrase(rng, hidden, dx);
        std::string sy = detail::descriptor_phrase(rng, *ref, dy);
        std::string attr_word = std::string(AttributeCatalog::attribute_name(query_attr));
        std::string rel_word = detail::relation_phrase(rel);
        switch (style) {
            case 0: nl = "What " + attr_word + " is the " + sx + " that is " + rel_word +
                         " the " + sy + "?";
                break;
            case 1: nl = "There is a " + sx + " " + rel_word + " the " + sy + "; what " +
                         attr_word + " is it?";
                break;
            default: nl = "The " + sx + " that is " + rel_word + " the " + sy + " is what " +
                          attr_word + "?";
                break;
        }
    } else {
        // Reference: an object sharing one attribute value with the hidden one.
        std::vector<Attribute> shared_pool(kAttributes.begin(), kAttributes.end());
        rng.shuffle(shared_pool);
        std::optional<Attribute> shared;
        const ObjectSpec* partner = nullptr;
        for (Attribute p : shared_pool) {
            if (p == query_attr) continue;
            std::vector<const ObjectSpec*> partners;
            for (const ObjectSpec& o : complete.objects)
                if (o.id != hidden.id && o.value(p) == hidden.value(p)) partners.push_back(&o);
            if (partners.empty()) continue;
            shared = p;
            partner = partners[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<int>(partners.size()) - 1))];
            break;
        }
        if (!shared) return std::nullopt;

        auto dx = detail::draw_descriptors(
            rng, detail::attr_bit(query_attr) | detail::attr_bit(*shared));
        auto dy = detail::draw_descriptors(rng, detail::attr_bit(*shared));
        for (int a = 0; a < kAttributeCount; ++a) {
            Attribute attr = static_cast<Attribute>(a);
            if (dx[static_cast<std::size_t>(a)])
                q.properties.push_back({0, {attr, hidden.value(attr)}});
            if (dy[static_cast<std::size_t>(a)])
                q.properties.push_back({1, {attr, partner->value(attr)}});
        }
        q.same_properties.push_back({1, 0, *shared});  // same_P(Y, X)
        q.inequalities.push_back({0, 1});

        std::string sx = detail::descriptor_phrase(rng, hidden, dx);
        std::string sy = detail::descriptor_phrase(rng, *partner, dy);
        std::string attr_word = std::string(AttributeCatalog::attribute_name(query_attr));
        std::string p_word = std::string(AttributeCatalog::attribute_name(*shared));
        switch (style) {
            case 3: nl = "What is the " + attr_word + " of the other " + sx +
                         " that is the same " + p_word + " as the " + sy + "?";
                break;
            case 4: nl = "There is another " + sx + " that is the same " + p_word + " as the " +
                         sy + "; what " + attr_word + " is it?";
                break;
            default: nl = "The other " + sx + " that is the same " + p_word + " as the " + sy +
                          " is what " + attr_word + "?";
                break;
        }
    }

    normalize_question(q);
    validate_question_form(q);
    return InstantiatedQuestion{std::move(q), std::move(nl),
                                std::string(kQuestionTemplateIds[static_cast<std::size_t>(style)])};
}

/// Verdict of checking a candidate question against its partial scene.
struct ValidationResult {
    enum class Verdict { Valid, FullDomain, Empty };
    Verdict verdict = Verdict::Empty;
    std::optional<AnswerSet> answers;
};

/// Solves the question on the partial scene and applies the validity bound
/// 1 <= |S| < |domain|: FullDomain means the question eliminates nothing,
/// Empty means no completion satisfies it at all.
inline ValidationResult validate_question(const QuestionForm& q, const SceneGraph& partial,
                                          const Environment& env) {
    std::vector<HiddenCandidate> candidates = enumerate_hidden_candidates(partial, env, &q);
    if (candidates.empty()) return {ValidationResult::Verdict::Empty, std::nullopt};
    std::vector<std::uint8_t> values;
    for (const HiddenCandidate& h : candidates) values.push_back(h.value(q.query_attribute));
    AnswerSet answers = make_answer_set(q.query_attribute, std::move(values));
    if (answers.full_domain()) return {ValidationResult::Verdict::FullDomain, std::nullopt};
    return {ValidationResult::Verdict::Valid, std::move(answers)};
}

}  // namespace obscura
