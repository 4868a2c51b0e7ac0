#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "obscura/answer.hpp"
#include "obscura/check.hpp"
#include "obscura/error.hpp"
#include "obscura/question.hpp"
#include "obscura/render.hpp"
#include "obscura/solver.hpp"

namespace obscura {

/// Trace witness meaning "the question body itself rules this out" (no
/// environment rule needed).
struct QuestionConstraintTag {
    bool operator==(const QuestionConstraintTag&) const = default;
};

/// What eliminated a region or value: an environment constraint (by index),
/// an ambient rule, or the question body.
using TraceSource = std::variant<std::size_t, GenericRule, QuestionConstraintTag>;

/// A property of the hidden object that follows from the question alone,
/// before any environment reasoning.
struct PropertyInference {
    Attribute attr{};
    std::uint8_t value{};
    std::string note;
};

struct RegionVerdict {
    std::uint8_t region{};
    bool admitted{};
    /// For eliminated regions: sources violated by every completion the
    /// question allows there. Empty with admitted=false means no single rule
    /// covers all of them.
    std::vector<TraceSource> witnesses;
};

struct ValueVerdict {
    std::uint8_t value{};
    bool admitted{};
    std::vector<TraceSource> witnesses;
};

/// Eliminative-induction record: what the question pins down, which regions
/// survive, and which answer values survive. The admitted values equal the
/// answer set by construction.
struct EliminationTrace {
    std::vector<PropertyInference> inferred;
    std::vector<RegionVerdict> regions;
    std::vector<ValueVerdict> values;

    std::vector<std::uint8_t> admitted_values() const {
        std::vector<std::uint8_t> out;
        for (const ValueVerdict& v : values)
            if (v.admitted) out.push_back(v.value);
        return out;
    }
};

struct SolveResult {
    AnswerSet answers;
    EliminationTrace trace;
    std::vector<HiddenCandidate> candidates;
};

namespace detail {

inline std::vector<TraceSource> violation_sources(const SceneGraph& partial,
                                                  const Environment& env,
                                                  const HiddenCandidate& h) {
    SceneGraph full;
    full.objects = partial.objects;
    full.objects.push_back(h.to_object(static_cast<int>(partial.objects.size())));
    std::vector<TraceSource> out;
    for (const Violation& v : check_scene(full, env).violations) {
        if (std::holds_alternative<std::size_t>(v.source))
            out.push_back(std::get<std::size_t>(v.source));
        else
            out.push_back(std::get<GenericRule>(v.source));
    }
    return out;
}

inline bool source_present(const std::vector<TraceSource>& sources, const TraceSource& s) {
    for (const TraceSource& x : sources)
        if (x == s) return true;
    return false;
}

/// Sources violated by every candidate in the pool.
inline std::vector<TraceSource> common_sources(const SceneGraph& partial, const Environment& env,
                                               const std::vector<HiddenCandidate>& pool) {
    std::vector<TraceSource> common = violation_sources(partial, env, pool.front());
    for (std::size_t i = 1; i < pool.size() && !common.empty(); ++i) {
        std::vector<TraceSource> here = violation_sources(partial, env, pool[i]);
        std::vector<TraceSource> kept;
        for (const TraceSource& s : common)
            if (source_present(here, s)) kept.push_back(s);
        common = std::move(kept);
    }
    return common;
}

}  // namespace detail

/// Answers a question about the hidden object of a partial scene by
/// eliminative induction over all completions. Returns the answer set, the
/// per-region and per-value elimination trace, and the surviving candidates.
/// Throws EmptyAnswerError if nothing completes the scene.
inline SolveResult solve(const SceneGraph& partial, const Environment& env,
                         const QuestionForm& q) {
    validate_question_form(q);
    SolveResult result;
    result.candidates = enumerate_hidden_candidates(partial, env, &q);
    if (result.candidates.empty())
        throw EmptyAnswerError("no hidden-object completion satisfies the question");

    std::vector<std::uint8_t> values;
    for (const HiddenCandidate& h : result.candidates) values.push_back(h.value(q.query_attribute));
    result.answers = make_answer_set(q.query_attribute, std::move(values));

    // What the question alone admits, per region: the yardstick for deciding
    // which environment rules actually did the eliminating.
    detail::QuestionBinder binder(partial, q);
    std::array<std::vector<HiddenCandidate>, kRegionCount> question_only;
    for (int idx = 0; idx < kHiddenCandidateCount; ++idx) {
        HiddenCandidate h = candidate_from_index(idx);
        if (binder.admits(h)) question_only[h.region].push_back(h);
    }

    // Phase 1: properties fixed by the question body.
    for (const PropertyAtom& p : q.properties)
        if (p.var == q.query_var)
            result.trace.inferred.push_back({p.value.attr, p.value.value, "stated by the question"});
    for (const SamePropertyAtom& sp : q.same_properties) {
        if (sp.a != q.query_var && sp.b != q.query_var) continue;
        int other = sp.a == q.query_var ? sp.b : sp.a;
        std::optional<std::uint8_t> forced;
        bool consistent = true;
        for (const ObjectSpec& o : partial.objects) {
            bool fits = true;
            for (const PropertyAtom& p : q.properties)
                if (p.var == other && o.value(p.value.attr) != p.value.value) fits = false;
            if (!fits) continue;
            std::uint8_t v = o.value(sp.attr);
            if (!forced)
                forced = v;
            else if (*forced != v)
                consistent = false;
        }
        if (forced && consistent)
            result.trace.inferred.push_back({sp.attr, *forced, "shared with the reference object"});
    }

    // Phase 2: regions.
    std::array<bool, kRegionCount> region_admitted{};
    for (const HiddenCandidate& h : result.candidates) region_admitted[h.region] = true;
    for (int r = 0; r < kRegionCount; ++r) {
        RegionVerdict verdict;
        verdict.region = static_cast<std::uint8_t>(r);
        verdict.admitted = region_admitted[static_cast<std::size_t>(r)];
        if (!verdict.admitted) {
            const auto& pool = question_only[static_cast<std::size_t>(r)];
            if (pool.empty())
                verdict.witnesses.push_back(QuestionConstraintTag{});
            else
                verdict.witnesses = detail::common_sources(partial, env, pool);
        }
        result.trace.regions.push_back(std::move(verdict));
    }

    // Phase 3: values of the queried attribute, over admitted regions only.
    for (int v = 0; v < AttributeCatalog::value_count(q.query_attribute); ++v) {
        ValueVerdict verdict;
        verdict.value = static_cast<std::uint8_t>(v);
        verdict.admitted = result.answers.contains(static_cast<std::uint8_t>(v));
        if (!verdict.admitted) {
            std::vector<HiddenCandidate> pool;
            for (int r = 0; r < kRegionCount; ++r) {
                if (!region_admitted[static_cast<std::size_t>(r)]) continue;
                for (const HiddenCandidate& h : question_only[static_cast<std::size_t>(r)])
                    if (h.value(q.query_attribute) == v) pool.push_back(h);
            }
            if (pool.empty())
                verdict.witnesses.push_back(QuestionConstraintTag{});
            else
                verdict.witnesses = detail::common_sources(partial, env, pool);
        }
        result.trace.values.push_back(std::move(verdict));
    }
    return result;
}

/// Human-readable witness label.
inline std::string trace_source_label(const TraceSource& s, const Environment& env) {
    if (std::holds_alternative<std::size_t>(s)) {
        std::size_t idx = std::get<std::size_t>(s);
        return "constraint " + std::to_string(idx) + " (\"" +
               render_constraint_nl(env.constraints[idx]) + "\")";
    }
    if (std::holds_alternative<GenericRule>(s)) {
        switch (std::get<GenericRule>(s)) {
            case GenericRule::Distinctness: return "the distinctness rule";
            case GenericRule::RegionCapacity: return "the region capacity";
            case GenericRule::ObjectCount: return "the scene size";
        }
    }
    return "the question constraints";
}

/// Plain-text rendering of a solve result, step by step.
inline std::string render_trace(const SolveResult& result, const Environment& env,
                                const QuestionForm& q) {
    std::string out = "Asked: the " +
                      std::string(AttributeCatalog::attribute_name(q.query_attribute)) +
                      " of the hidden object.\n";
    for (const PropertyInference& inf : result.trace.inferred)
        out += "Known: its " + std::string(AttributeCatalog::attribute_name(inf.attr)) + " is " +
               std::string(AttributeCatalog::value_name(inf.attr, inf.value)) + " (" + inf.note +
               ").\n";
    auto witness_text = [&](const std::vector<TraceSource>& ws) {
        if (ws.empty()) return std::string("a combination of constraints");
        std::string s;
        for (std::size_t i = 0; i < ws.size(); ++i) {
            if (i) s += "; ";
            s += trace_source_label(ws[i], env);
        }
        return s;
    };
    for (const RegionVerdict& rv : result.trace.regions) {
        out += "Region " + std::to_string(rv.region) + ": ";
        out += rv.admitted ? "possible.\n" : "ruled out by " + witness_text(rv.witnesses) + ".\n";
    }
    for (const ValueVerdict& vv : result.trace.values) {
        out += "Value " +
               std::string(AttributeCatalog::value_name(q.query_attribute, vv.value)) + ": ";
        out += vv.admitted ? "possible.\n" : "ruled out by " + witness_text(vv.witnesses) + ".\n";
    }
    out += "Answer set: {";
    const std::vector<std::string> names = result.answers.value_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ", ";
        out += names[i];
    }
    out += "}\n";
    return out;
}

}  // namespace obscura
