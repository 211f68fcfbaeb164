#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cyp/diagnostics.hpp"
#include "cyp/rewrite.hpp"
#include "cyp/syntax.hpp"
#include "cyp/typecheck.hpp"

namespace cyp {

// Everything a hole can be: an expression `_`, a rule name `(by _)`, a chain
// of steps `...`, a whole proof, missing cases, missing declarations.
enum class HoleKind { Term, RuleName, Steps, Proof, Cases, Decls };

inline const char* hole_kind_name(HoleKind k) {
    switch (k) {
        case HoleKind::Term: return "term";
        case HoleKind::RuleName: return "rule";
        case HoleKind::Steps: return "steps";
        case HoleKind::Proof: return "proof";
        case HoleKind::Cases: return "cases";
        case HoleKind::Decls: return "declarations";
    }
    return "?";
}

struct HoleSite {
    HoleKind kind;
    MaybeSpan span;
};

// Complete: fully checked. Incomplete: checked as far as holes allow, every
// hole listed. Failed: refuted, with the diagnostic.
struct ProofResult {
    enum class Status { Complete, Incomplete, Failed };
    Status status = Status::Complete;
    std::vector<HoleSite> holes;
    std::optional<Diagnostic> diag;

    static ProofResult complete() { return {}; }
    static ProofResult incomplete(std::vector<HoleSite> hs) {
        return {Status::Incomplete, std::move(hs), std::nullopt};
    }
    static ProofResult failed(Diagnostic d) { return {Status::Failed, {}, std::move(d)}; }
    bool failed_p() const { return status == Status::Failed; }
};

struct LemmaVerdict {
    std::string name;
    ProofResult result;
};

struct ModuleReport {
    std::vector<LemmaVerdict> lemmas;
    std::vector<HoleSite> module_holes;  // program holes and declaration gaps

    bool any_failed() const {
        for (const auto& l : lemmas)
            if (l.result.failed_p()) return true;
        return false;
    }
    std::vector<HoleSite> all_holes() const {
        std::vector<HoleSite> out = module_holes;
        for (const auto& l : lemmas)
            out.insert(out.end(), l.result.holes.begin(), l.result.holes.end());
        return out;
    }
};

namespace detail {

inline std::vector<Span> spanlist(std::initializer_list<MaybeSpan> spans) {
    std::vector<Span> out;
    for (const MaybeSpan& s : spans)
        if (s) out.push_back(*s);
    return out;
}

struct CaseShape {
    std::string ctor;
    std::vector<std::string> arg_names;
    std::vector<TypePtr> arg_types;  // instantiated at the scrutinee type
};

// Decompose `C v1 .. vk` and instantiate C's declared argument types at the
// scrutinee type's parameters.
inline CaseShape analyze_case_pattern(const DataInfo& dt, const std::string& data_name,
                                      const TypePtr& ty, const TermPtr& pattern) {
    CaseShape shape;
    TermPtr head = pattern;
    std::vector<TermPtr> args;
    while (head->kind == TermKind::App) {
        args.push_back(head->arg);
        head = head->fun;
    }
    std::reverse(args.begin(), args.end());
    shape.ctor = head->name;
    const ConDecl* decl = nullptr;
    for (const ConDecl& c : dt.ctors)
        if (c.name == shape.ctor) decl = &c;
    if (!decl)
        raise(Phase::Proof,
              "constructor '" + shape.ctor + "' does not belong to type '" + data_name + "'",
              spanlist({pattern->span}));
    if (args.size() != decl->args.size())
        raise(Phase::Proof,
              "constructor '" + shape.ctor + "' expects " + std::to_string(decl->args.size()) +
                  " argument(s), got " + std::to_string(args.size()),
              spanlist({pattern->span}));
    std::map<std::string, TypePtr> params;
    for (size_t i = 0; i < dt.params.size(); ++i) params[dt.params[i]] = ty->args[i];
    for (size_t i = 0; i < args.size(); ++i) {
        shape.arg_names.push_back(args[i]->name);
        shape.arg_types.push_back(map_type_vars(decl->args[i], [&](const Type& v) {
            auto it = params.find(v.name);
            return it == params.end() ? tvar(v.name, v.span) : it->second;
        }));
    }
    return shape;
}

} // namespace detail

// One expected induction hypothesis per constructor argument whose type is
// the induction type itself: the goal at that argument, quantified over the
// generalized variables only (all other binders are already fixed).
inline std::vector<Prop> expected_ihs(const TypeEnv& env, const TypePtr& ty,
                                      const TermPtr& pattern, const Prop& goal,
                                      const std::string& ind_var,
                                      const std::vector<Binder>& generalizing) {
    bool bound = false;
    for (const Binder& b : goal.binders) bound = bound || b.name == ind_var;
    if (!bound)
        raise(Phase::Proof, "induction variable '" + ind_var + "' is not bound by the goal",
              detail::spanlist({goal.span}));
    std::set<std::string> gen_names;
    for (const Binder& g : generalizing) {
        bool is_binder = false;
        for (const Binder& b : goal.binders) is_binder = is_binder || b.name == g.name;
        if (!is_binder || g.name == ind_var)
            raise(Phase::Proof, "only quantified goal variables can be generalized",
                  detail::spanlist({g.span, goal.span}));
        gen_names.insert(g.name);
    }
    if (!ty || ty->kind != TypeKind::Con || !env.datatypes.count(ty->name))
        raise(Phase::Proof, "'" + show_type(ty) + "' is not a datatype",
              detail::spanlist({ty ? ty->span : MaybeSpan{}, goal.span}));
    const DataInfo& dt = env.datatypes.at(ty->name);
    detail::CaseShape shape = detail::analyze_case_pattern(dt, ty->name, ty, pattern);

    Substitution base;
    for (const Binder& b : goal.binders)
        if (b.name != ind_var && !gen_names.count(b.name)) base[b.name] = fixed_var(b.name);

    std::vector<Prop> out;
    for (size_t i = 0; i < shape.arg_types.size(); ++i) {
        if (!type_equal(shape.arg_types[i], ty)) continue;
        Substitution sigma = base;
        sigma[ind_var] = fixed_var(shape.arg_names[i]);
        out.push_back(Prop{generalizing, substitute(goal.lhs, sigma), substitute(goal.rhs, sigma),
                           goal.span});
    }
    return out;
}

namespace detail {

struct Ctx {
    Assumptions fixed;
    RuleEnv rules;
};

class Checker {
public:
    Checker(const Module& m, const TypeEnv& env) : mod_(m), env_(env) {}

    ModuleReport run() {
        ModuleReport report;
        for (const Gap& g : mod_.gaps) report.module_holes.push_back({HoleKind::Decls, g.span});
        for (const Decl& d : mod_.decls) {
            if (const auto* eq = std::get_if<FunEquation>(&d.node)) {
                record_term_holes(eq->rhs, report.module_holes);
                Rule r{eq->fname, RuleOrigin::Def,
                       Prop{equation_binders(env_, *eq),
                            apply(constant(eq->fname, eq->fname_span), eq->patterns), eq->rhs,
                            d.span}};
                globals_.defs[eq->fname].push_back(std::move(r));
            } else if (const auto* ax = std::get_if<AxiomDecl>(&d.node)) {
                record_term_holes(ax->prop.lhs, report.module_holes);
                record_term_holes(ax->prop.rhs, report.module_holes);
                add_named(Rule{ax->name, RuleOrigin::Axiom, ax->prop}, d.span);
            } else if (const auto* lem = std::get_if<LemmaDecl>(&d.node)) {
                record_term_holes(lem->prop.lhs, report.module_holes);
                record_term_holes(lem->prop.rhs, report.module_holes);
                std::string name = lem->name.value_or("lemma");
                ProofResult r = check_lemma(*lem);
                bool failed = r.failed_p();
                report.lemmas.push_back(LemmaVerdict{name, std::move(r)});
                if (failed) return report;  // fail fast, verdicts up to here
                add_named(Rule{name, RuleOrigin::Lemma, lem->prop}, d.span);
            }
        }
        return report;
    }

private:
    const Module& mod_;
    const TypeEnv& env_;
    RuleEnv globals_;

    void add_named(Rule r, const MaybeSpan& at) {
        if (globals_.named.count(r.name))
            raise(Phase::Proof, "duplicate rule name '" + r.name + "'", spanlist({at}));
        globals_.named.emplace(r.name, std::move(r));
    }

    static void record_term_holes(const TermPtr& t, std::vector<HoleSite>& out) {
        std::vector<MaybeSpan> spans;
        hole_spans_into(t, spans);
        for (const MaybeSpan& s : spans) out.push_back({HoleKind::Term, s});
    }

    ProofResult check_lemma(const LemmaDecl& lem) {
        Prop goal = lem.prop;
        for (Binder& b : goal.binders) b.type = rigidify(b.type);
        Ctx ctx{{}, globals_};
        try {
            return check_proof(goal, lem.proof, ctx);
        } catch (const DiagnosticError& e) {
            return ProofResult::failed(e.diag());
        }
    }

    // Binders of the goal become fixed variables of the obligation.
    Prop fix_binders(const Prop& goal, Ctx& ctx) {
        Substitution sigma;
        for (const Binder& b : goal.binders) {
            if (ctx.fixed.count(b.name))
                raise(Phase::Proof, "variable '" + b.name + "' shadows an enclosing variable",
                      spanlist({b.span, goal.span}));
            ctx.fixed[b.name] = b.type;
            sigma[b.name] = fixed_var(b.name);
        }
        return Prop{{}, substitute(goal.lhs, sigma), substitute(goal.rhs, sigma), goal.span};
    }

    ProofResult check_proof(const Prop& goal, const ProofPtr& proof, const Ctx& ctx) {
        if (const auto* h = std::get_if<ProofHole>(&proof->node))
            return ProofResult::incomplete({{HoleKind::Proof, h->dots}});
        if (const auto* ind = std::get_if<ProofInduction>(&proof->node))
            return check_induction(goal, *ind, ctx);
        Ctx inner = ctx;
        Prop obligation = fix_binders(goal, inner);
        if (const auto* rw = std::get_if<ProofRewriting>(&proof->node))
            return check_rewriting(obligation, rw->chain, inner);
        if (const auto* ext = std::get_if<ProofExtensionality>(&proof->node))
            return check_extensionality(obligation, *ext, inner);
        return check_case_analysis(obligation, std::get<ProofCaseAnalysis>(proof->node), inner);
    }

    ProofResult check_rewriting(const Prop& goal, const Chain& chain, const Ctx& ctx) {
        if (auto d = check_chain_types(env_, ctx.fixed, goal, chain))
            return ProofResult::failed(*d);

        const TermPtr& first = chain.first;
        const TermPtr& last = chain.steps.empty() ? chain.first : chain.steps.back().term;
        bool exact = (term_equal(first, goal.lhs) && term_equal(last, goal.rhs)) ||
                     (term_equal(first, goal.rhs) && term_equal(last, goal.lhs));
        bool loose = (hole_match(first, goal.lhs) && hole_match(last, goal.rhs)) ||
                     (hole_match(first, goal.rhs) && hole_match(last, goal.lhs));
        if (!loose)
            return ProofResult::failed(
                Diagnostic{Phase::Proof, "chain endpoints do not match the goal equation",
                           spanlist({goal.span, first->span, last->span})});

        std::vector<HoleSite> holes;
        auto note_term = [&](const TermPtr& t) {
            std::vector<MaybeSpan> spans;
            hole_spans_into(t, spans);
            for (const MaybeSpan& s : spans) holes.push_back({HoleKind::Term, s});
        };
        note_term(chain.first);
        TermPtr prev = chain.first;
        for (const ChainStep& s : chain.steps) {
            note_term(s.term);
            if (s.link.kind == LinkKind::ByHole)
                holes.push_back({HoleKind::RuleName, s.link.hole_span ? s.link.hole_span : s.link.span});
            if (s.link.kind == LinkKind::Ellipsis)
                holes.push_back({HoleKind::Steps, s.link.span});
            StepVerdict v = check_step(ctx.rules, prev, s.link, s.term, env_, ctx.fixed);
            if (v.kind == StepVerdict::Kind::Invalid) return ProofResult::failed(*v.diag);
            prev = s.term;
        }
        if (holes.empty() && exact) return ProofResult::complete();
        return ProofResult::incomplete(std::move(holes));
    }

    ProofResult check_extensionality(const Prop& goal, const ProofExtensionality& ext, Ctx ctx) {
        try {
            InferState st;
            TypePtr ft = infer_type(env_, ctx.fixed, goal.lhs, st);
            TypePtr gt = infer_type(env_, ctx.fixed, goal.rhs, st);
            TypePtr a = st.fresh(), b = st.fresh();
            if (!st.unify(ft, tfun(a, b)) || !st.unify(gt, tfun(a, b)))
                return ProofResult::failed(Diagnostic{
                    Phase::Proof, "goal is not an equation between functions", spanlist({goal.span})});
            TypePtr var_ty = rigidify(ext.type);
            if (!st.unify(a, var_ty))
                return ProofResult::failed(Diagnostic{
                    Phase::Proof,
                    "extensionality variable has type " + show_type(var_ty) +
                        " but the functions take " + show_type(st.zonk(a)),
                    spanlist({ext.type ? ext.type->span : MaybeSpan{}, goal.span})});

            Prop expected{{}, app(goal.lhs, fixed_var(ext.var)), app(goal.rhs, fixed_var(ext.var)),
                          goal.span};
            if (!ext.shown.binders.empty() || !alpha_equal(ext.shown, expected))
                return ProofResult::failed(Diagnostic{
                    Phase::Proof,
                    "Show line does not match; expected '" + show_term(expected.lhs) + " .=. " +
                        show_term(expected.rhs) + "'",
                    spanlist({ext.shown.span, goal.span})});

            if (ctx.fixed.count(ext.var))
                raise(Phase::Proof, "variable '" + ext.var + "' shadows an enclosing variable",
                      spanlist({ext.var_span}));
            ctx.fixed[ext.var] = var_ty;
            return check_proof(ext.shown, ext.sub, ctx);
        } catch (const DiagnosticError& e) {
            return ProofResult::failed(e.diag());
        }
    }

    ProofResult check_case_analysis(const Prop& goal, const ProofCaseAnalysis& pca,
                                    const Ctx& ctx) {
        TypePtr annotated = rigidify(pca.type);
        try {
            InferState st;
            TypePtr scrut_ty = infer_type(env_, ctx.fixed, pca.scrutinee, st);
            if (!st.unify(scrut_ty, annotated))
                return ProofResult::failed(Diagnostic{
                    Phase::Proof,
                    "case analysis is on type " + show_type(annotated) +
                        " but the scrutinee has type " + show_type(st.zonk(scrut_ty)),
                    spanlist({pca.scrutinee->span, annotated->span})});
            annotated = st.zonk(annotated);
        } catch (const DiagnosticError& e) {
            return ProofResult::failed(e.diag());
        }
        if (annotated->kind != TypeKind::Con || !env_.datatypes.count(annotated->name))
            return ProofResult::failed(
                Diagnostic{Phase::Proof, "'" + show_type(annotated) + "' is not a datatype",
                           spanlist({annotated->span, goal.span})});
        const DataInfo& dt = env_.datatypes.at(annotated->name);

        std::vector<HoleSite> holes;
        std::set<std::string> seen;
        for (const CaseEntry& ce : pca.cases) {
            CaseShape shape;
            try {
                shape = analyze_case_pattern(dt, annotated->name, annotated, ce.pattern);
            } catch (const DiagnosticError& e) {
                return ProofResult::failed(e.diag());
            }
            if (!seen.insert(shape.ctor).second)
                return ProofResult::failed(Diagnostic{
                    Phase::Proof, "duplicate case '" + shape.ctor + "'", spanlist({ce.span})});
            Ctx inner = ctx;
            for (size_t i = 0; i < shape.arg_names.size(); ++i)
                inner.fixed[shape.arg_names[i]] = shape.arg_types[i];

            Prop expected{{}, pca.scrutinee, ce.pattern, ce.assumption.span};
            if (!ce.assumption.binders.empty() || !alpha_equal(ce.assumption, expected))
                return ProofResult::failed(Diagnostic{
                    Phase::Proof,
                    "assumption must state '" + show_term(pca.scrutinee) + " .=. " +
                        show_term(ce.pattern) + "'",
                    spanlist({ce.assumption.span, ce.span})});
            if (inner.rules.named.count(ce.assume_name))
                return ProofResult::failed(Diagnostic{
                    Phase::Proof, "duplicate rule name '" + ce.assume_name + "'",
                    spanlist({ce.assume_span})});
            inner.rules.named.emplace(
                ce.assume_name, Rule{ce.assume_name, RuleOrigin::Assumption, ce.assumption});

            ProofResult r = check_proof(goal, ce.sub, inner);
            if (r.failed_p()) return r;
            holes.insert(holes.end(), r.holes.begin(), r.holes.end());
        }
        return finish_cases(dt, seen, pca.gaps, std::move(holes), goal.span);
    }

    ProofResult check_induction(const Prop& goal, const ProofInduction& pi, Ctx ctx) {
        const Binder* ind_binder = nullptr;
        for (const Binder& b : goal.binders)
            if (b.name == pi.var) ind_binder = &b;
        if (!ind_binder)
            return ProofResult::failed(Diagnostic{
                Phase::Proof, "induction variable '" + pi.var + "' is not bound by the goal",
                spanlist({pi.var_span, goal.span})});
        TypePtr ty = rigidify(pi.type);
        if (!type_equal(ty, ind_binder->type))
            return ProofResult::failed(Diagnostic{
                Phase::Proof,
                "induction is on type " + show_type(ty) + " but '" + pi.var +
                    "' is quantified at type " + show_type(ind_binder->type),
                spanlist({ty->span, ind_binder->span, goal.span})});
        if (ty->kind != TypeKind::Con || !env_.datatypes.count(ty->name))
            return ProofResult::failed(
                Diagnostic{Phase::Proof, "'" + show_type(ty) + "' is not a datatype",
                           spanlist({ty->span, goal.span})});
        const DataInfo& dt = env_.datatypes.at(ty->name);

        std::vector<Binder> gen;
        std::set<std::string> gen_names;
        for (const Binder& g : pi.generalizing) {
            const Binder* gb = nullptr;
            for (const Binder& b : goal.binders)
                if (b.name == g.name) gb = &b;
            if (!gb || g.name == pi.var)
                return ProofResult::failed(Diagnostic{
                    Phase::Proof, "only quantified goal variables can be generalized",
                    spanlist({g.span, goal.span})});
            TypePtr gty = rigidify(g.type);
            if (!type_equal(gty, gb->type))
                return ProofResult::failed(Diagnostic{
                    Phase::Proof,
                    "generalized variable '" + g.name + "' is quantified at type " +
                        show_type(gb->type) + ", not " + show_type(gty),
                    spanlist({g.span, goal.span})});
            if (!gen_names.insert(g.name).second)
                return ProofResult::failed(Diagnostic{
                    Phase::Proof, "duplicate generalized variable '" + g.name + "'",
                    spanlist({g.span})});
            gen.push_back(Binder{g.name, gty, g.span});
        }

        // non-generalized binders are fixed for the whole induction
        Substitution others;
        for (const Binder& b : goal.binders) {
            if (b.name == pi.var || gen_names.count(b.name)) continue;
            if (ctx.fixed.count(b.name))
                return ProofResult::failed(Diagnostic{
                    Phase::Proof, "variable '" + b.name + "' shadows an enclosing variable",
                    spanlist({b.span, goal.span})});
            ctx.fixed[b.name] = b.type;
            others[b.name] = fixed_var(b.name);
        }

        std::vector<HoleSite> holes;
        std::set<std::string> seen;
        for (const IndCase& ic : pi.cases) {
            CaseShape shape;
            try {
                shape = analyze_case_pattern(dt, ty->name, ty, ic.pattern);
            } catch (const DiagnosticError& e) {
                return ProofResult::failed(e.diag());
            }
            if (!seen.insert(shape.ctor).second)
                return ProofResult::failed(Diagnostic{
                    Phase::Proof, "duplicate case '" + shape.ctor + "'", spanlist({ic.span})});

            Ctx inner = ctx;
            for (size_t i = 0; i < shape.arg_names.size(); ++i)
                inner.fixed[shape.arg_names[i]] = shape.arg_types[i];

            for (const Binder& f : ic.fixes) {
                bool found = false;
                for (size_t i = 0; i < shape.arg_names.size(); ++i) {
                    if (shape.arg_names[i] != f.name) continue;
                    found = true;
                    if (!type_equal(rigidify(f.type), shape.arg_types[i]))
                        return ProofResult::failed(Diagnostic{
                            Phase::Proof,
                            "Fix clause gives '" + f.name + "' type " + show_type(f.type) +
                                " but the constructor argument has type " +
                                show_type(shape.arg_types[i]),
                            spanlist({f.span, ic.span})});
                }
                if (!found)
                    return ProofResult::failed(Diagnostic{
                        Phase::Proof,
                        "Fix clause names '" + f.name + "', which is not a pattern variable",
                        spanlist({f.span, ic.span})});
            }

            std::vector<Prop> expected;
            try {
                expected = expected_ihs(env_, ty, ic.pattern, goal, pi.var, gen);
            } catch (const DiagnosticError& e) {
                return ProofResult::failed(e.diag());
            }
            std::vector<bool> used(expected.size(), false);
            std::vector<Rule> ih_rules;
            for (size_t h = 0; h < ic.hypotheses.size(); ++h) {
                Prop stated = ic.hypotheses[h].second;
                for (Binder& b : stated.binders) b.type = rigidify(b.type);
                bool matched = false;
                for (size_t i = 0; i < expected.size() && !matched; ++i) {
                    if (used[i] || !alpha_equal(stated, expected[i])) continue;
                    used[i] = true;
                    matched = true;
                }
                if (!matched)
                    return ProofResult::failed(Diagnostic{
                        Phase::Proof,
                        "stated induction hypothesis '" + ic.hypotheses[h].first +
                            "' does not match any expected hypothesis",
                        spanlist({stated.span, goal.span})});
                ih_rules.push_back(Rule{ic.hypotheses[h].first, RuleOrigin::Hypothesis, stated});
            }

            // generalized variables are re-fixed, fresh, for the Show line
            std::vector<std::string> refix_names;
            if (ic.refixed) {
                if (ic.refixed->size() != gen.size())
                    return ProofResult::failed(Diagnostic{
                        Phase::Proof, "'for fixed' must list exactly the generalized variables",
                        spanlist({ic.span, goal.span})});
                for (size_t i = 0; i < gen.size(); ++i) {
                    const Binder& r = (*ic.refixed)[i];
                    if (!type_equal(rigidify(r.type), gen[i].type))
                        return ProofResult::failed(Diagnostic{
                            Phase::Proof,
                            "'for fixed' gives '" + r.name + "' type " + show_type(r.type) +
                                " but the generalized variable has type " + show_type(gen[i].type),
                            spanlist({r.span, ic.span})});
                    refix_names.push_back(r.name);
                }
            } else {
                for (const Binder& g : gen) refix_names.push_back(g.name);
            }

            Substitution sigma = others;
            sigma[pi.var] = ic.pattern;
            for (size_t i = 0; i < gen.size(); ++i) {
                inner.fixed[refix_names[i]] = gen[i].type;
                sigma[gen[i].name] = fixed_var(refix_names[i]);
            }
            Prop expected_shown{{}, substitute(goal.lhs, sigma), substitute(goal.rhs, sigma),
                                goal.span};
            if (!ic.shown.binders.empty() || !alpha_equal(ic.shown, expected_shown))
                return ProofResult::failed(Diagnostic{
                    Phase::Proof,
                    "Show line does not match; expected '" + show_term(expected_shown.lhs) +
                        " .=. " + show_term(expected_shown.rhs) + "'",
                    spanlist({ic.shown.span, goal.span})});

            for (Rule& r : ih_rules) {
                if (inner.rules.named.count(r.name))
                    return ProofResult::failed(Diagnostic{
                        Phase::Proof, "duplicate rule name '" + r.name + "'", spanlist({ic.span})});
                inner.rules.named.emplace(r.name, std::move(r));
            }

            ProofResult r = check_proof(ic.shown, ic.sub, inner);
            if (r.failed_p()) return r;
            holes.insert(holes.end(), r.holes.begin(), r.holes.end());
        }
        return finish_cases(dt, seen, pi.gaps, std::move(holes), goal.span);
    }

    // Case-set completeness: present cases must not repeat (checked above);
    // the set must equal the datatype's constructors unless a `...` stands
    // for the missing ones.
    ProofResult finish_cases(const DataInfo& dt, const std::set<std::string>& seen,
                             const std::vector<Gap>& gaps, std::vector<HoleSite> holes,
                             const MaybeSpan& at) {
        for (const Gap& g : gaps) holes.push_back({HoleKind::Cases, g.span});
        if (gaps.empty()) {
            std::string missing;
            for (const ConDecl& c : dt.ctors)
                if (!seen.count(c.name)) missing += (missing.empty() ? "" : ", ") + c.name;
            if (!missing.empty())
                return ProofResult::failed(
                    Diagnostic{Phase::Proof, "missing cases: " + missing, spanlist({at})});
        }
        if (holes.empty()) return ProofResult::complete();
        return ProofResult::incomplete(std::move(holes));
    }
};

} // namespace detail

// Check every lemma in order; a proven lemma (Complete or Incomplete)
// becomes a rule usable by later lemmas, axioms are rules unconditionally.
// The first Failed lemma aborts checking; verdicts up to and including it
// are returned.
inline ModuleReport check_module(const Module& m, const TypeEnv& env) {
    detail::Checker c(m, env);
    return c.run();
}

} // namespace cyp
