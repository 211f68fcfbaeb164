#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cyp/diagnostics.hpp"
#include "cyp/syntax.hpp"
#include "cyp/typecheck.hpp"

namespace cyp {

enum class RuleOrigin { Def, Axiom, Lemma, Assumption, Hypothesis };

// A rewrite rule: a function equation, an axiom, a proven lemma, a case
// assumption, or an induction hypothesis. Def rules come one per function
// equation, all sharing the head symbol on the left.
struct Rule {
    std::string name;
    RuleOrigin origin;
    Prop prop;
};

// Rules visible at one point of a proof. Def rules live in their own
// namespace (`by def f`); axioms, lemmas, assumptions and hypotheses share
// the other (`by name`).
struct RuleEnv {
    std::map<std::string, std::vector<Rule>> defs;
    std::map<std::string, Rule> named;
};

// First-order matching: sigma with substitute(pattern, sigma) = t, or
// nothing. Repeated schematic variables must match consistently. A hole in
// the pattern matches anything without binding.
inline bool match_into(const TermPtr& pattern, const TermPtr& t, Substitution& sigma) {
    if (!pattern || !t) return pattern == t;
    switch (pattern->kind) {
        case TermKind::Hole:
            return true;
        case TermKind::SchematicVar: {
            auto it = sigma.find(pattern->name);
            if (it != sigma.end()) return term_equal(it->second, t);
            sigma[pattern->name] = t;
            return true;
        }
        case TermKind::App:
            return t->kind == TermKind::App && match_into(pattern->fun, t->fun, sigma) &&
                   match_into(pattern->arg, t->arg, sigma);
        default:
            return t->kind == pattern->kind && t->name == pattern->name;
    }
}

inline std::optional<Substitution> match_pattern(const TermPtr& pattern, const TermPtr& t) {
    Substitution sigma;
    if (!match_into(pattern, t, sigma)) return std::nullopt;
    return sigma;
}

namespace detail {

// Extend sigma by matching the rule's target side against the step's target
// term: variables of the target that the source match left unbound are read
// off `to` (this is how `x .=. y` applied to `False .=. True` binds y to
// True). Holes in `to` excuse whatever they cover.
inline bool extend_with_target(const TermPtr& target, const TermPtr& to, const Position& p,
                               Substitution& sigma) {
    TermPtr sub = to;
    for (int step : p) {
        if (!sub) return true;
        if (sub->kind == TermKind::Hole) return true;  // excused, nothing to learn
        if (sub->kind != TermKind::App) return true;   // shape clash; hole_match decides later
        sub = step == 0 ? sub->fun : sub->arg;
    }
    auto walk = [&](auto&& self, const TermPtr& pat, const TermPtr& t) -> bool {
        if (!pat || !t) return true;
        if (pat->kind == TermKind::Hole || t->kind == TermKind::Hole) return true;
        switch (pat->kind) {
            case TermKind::SchematicVar: {
                auto it = sigma.find(pat->name);
                if (it != sigma.end()) return hole_match(it->second, t);
                sigma[pat->name] = t;
                return true;
            }
            case TermKind::App:
                return t->kind == TermKind::App && self(self, pat->fun, t->fun) &&
                       self(self, pat->arg, t->arg);
            default:
                return t->kind == pat->kind && t->name == pat->name;
        }
    };
    return walk(walk, target, sub);
}

} // namespace detail

// True iff some orientation, position and substitution rewrite `from` into
// `to` with the rule, with the typed-application check applied. Subterms of
// `from` containing holes are not matchable redexes. When a candidate
// produces `to` syntactically but its types do not unify, the diagnostic is
// reported through `type_clash`.
inline bool rule_rewrites(const Rule& rule, const TermPtr& from, const TermPtr& to,
                          const TypeEnv& env, const Assumptions& assumptions,
                          std::optional<Diagnostic>* type_clash = nullptr) {
    const std::pair<TermPtr, TermPtr> orientations[2] = {
        {rule.prop.lhs, rule.prop.rhs},
        {rule.prop.rhs, rule.prop.lhs},
    };
    for (const auto& [pos, sub] : subterm_positions(from)) {
        if (contains_hole(sub)) continue;
        for (const auto& [source, target] : orientations) {
            auto sigma = match_pattern(source, sub);
            if (!sigma) continue;
            if (!detail::extend_with_target(target, to, pos, *sigma)) continue;
            // any variable still unbound is unconstrained; a hole stands in
            std::set<std::string> target_vars;
            collect_schematic_vars(target, target_vars);
            for (const std::string& v : target_vars)
                if (!sigma->count(v)) (*sigma)[v] = hole();
            TermPtr result = replace_at(from, pos, substitute(target, *sigma));
            if (!hole_match(result, to)) continue;
            auto diag = check_rule_application_types(rule.prop, *sigma, env, assumptions);
            if (!diag) return true;
            if (type_clash && !*type_clash) *type_clash = diag;
        }
    }
    return false;
}

// Verdict for a single chain step. ValidIncomplete marks steps that are
// accepted temporarily; the containing proof can then never be Complete.
struct StepVerdict {
    enum class Kind { Valid, ValidIncomplete, Invalid };
    enum class Reason { None, HoleInTerm, HoleLink, Ellipsis };
    Kind kind = Kind::Valid;
    Reason reason = Reason::None;
    std::optional<Diagnostic> diag;

    static StepVerdict valid() { return {Kind::Valid, Reason::None, std::nullopt}; }
    static StepVerdict incomplete(Reason r) { return {Kind::ValidIncomplete, r, std::nullopt}; }
    static StepVerdict invalid(Diagnostic d) {
        return {Kind::Invalid, Reason::None, std::move(d)};
    }
};

// Semantics of one step t1 (by ...) t2:
//   - `...` and `(by _)` are accepted unconditionally, marked incomplete;
//   - anything can be rewritten into a hole, and out of a hole;
//   - `(by def f)` holds if any of the defining equations of f can be used;
//   - `(by name)` holds if the named axiom/lemma/assumption/hypothesis
//     rewrites t1 into t2 somewhere, in either direction.
inline StepVerdict check_step(const RuleEnv& rules, const TermPtr& t1, const Link& link,
                              const TermPtr& t2, const TypeEnv& env,
                              const Assumptions& assumptions) {
    if (link.kind == LinkKind::Ellipsis) return StepVerdict::incomplete(StepVerdict::Reason::Ellipsis);
    if (link.kind == LinkKind::ByHole) return StepVerdict::incomplete(StepVerdict::Reason::HoleLink);
    if (contains_hole(t1) || contains_hole(t2))
        return StepVerdict::incomplete(StepVerdict::Reason::HoleInTerm);

    auto spans = [&]() {
        std::vector<Span> out;
        if (t1->span) out.push_back(*t1->span);
        if (t2->span) out.push_back(*t2->span);
        if (link.span) out.push_back(*link.span);
        return out;
    };

    if (link.kind == LinkKind::ByDef) {
        auto it = rules.defs.find(link.name);
        if (it == rules.defs.end() || it->second.empty())
            return StepVerdict::invalid(Diagnostic{
                Phase::Proof, "unknown rule: no defining equations for '" + link.name + "'",
                link.span ? std::vector<Span>{*link.span} : std::vector<Span>{}});
        std::optional<Diagnostic> clash;
        for (const Rule& r : it->second)
            if (rule_rewrites(r, t1, t2, env, assumptions, &clash)) return StepVerdict::valid();
        if (clash) return StepVerdict::invalid(*clash);
        return StepVerdict::invalid(Diagnostic{
            Phase::Proof, "no defining equation of '" + link.name + "' rewrites one term into the other",
            spans()});
    }

    auto it = rules.named.find(link.name);
    if (it == rules.named.end())
        return StepVerdict::invalid(
            Diagnostic{Phase::Proof, "unknown rule '" + link.name + "'",
                       link.span ? std::vector<Span>{*link.span} : std::vector<Span>{}});
    std::optional<Diagnostic> clash;
    if (rule_rewrites(it->second, t1, t2, env, assumptions, &clash)) return StepVerdict::valid();
    if (clash) return StepVerdict::invalid(*clash);
    return StepVerdict::invalid(Diagnostic{
        Phase::Proof, "rule '" + link.name + "' does not rewrite one term into the other", spans()});
}

} // namespace cyp
