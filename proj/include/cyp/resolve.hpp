#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cyp/diagnostics.hpp"
#include "cyp/syntax.hpp"

namespace cyp {

// Name resolution. Inside a quantified equation, binder-listed names become
// schematic variables and everything else must refer to a declared global:
// a name not declared to be local is a reference to a global name. Inside
// proofs, names bound by the enclosing proof structure (fixed lemma
// variables, case pattern variables, extensionality variables) become fixed
// variables. Unknown names are rejected here, fail-fast.

namespace detail {

struct ResolveGlobals {
    std::map<std::string, std::vector<std::string>> datatypes;  // name -> ctor names
    std::map<std::string, std::string> ctor_to_data;
    std::set<std::string> sigs;            // declared via `f :: T`
    std::set<std::string> implicit_heads;  // equation heads without a signature
    std::map<std::string, Span> sig_spans;

    bool is_value_name(const std::string& n) const {
        return sigs.count(n) || implicit_heads.count(n);
    }
};

class Resolver {
public:
    Module run(const Module& raw) {
        Module out;
        out.file = raw.file;
        out.gaps = raw.gaps;
        size_t lemma_index = 0;
        for (const Decl& d : raw.decls) {
            Decl r{std::visit([&](const auto& node) { return decl(node, d.span, lemma_index); },
                              d.node),
                   d.span};
            out.decls.push_back(std::move(r));
        }
        return out;
    }

private:
    ResolveGlobals g_;

    using NodeVariant = std::variant<DataDecl, SigDecl, FunEquation, AxiomDecl, LemmaDecl>;

    static Span span_or(const MaybeSpan& s, const MaybeSpan& fallback) {
        if (s) return *s;
        if (fallback) return *fallback;
        return Span{};
    }

    NodeVariant decl(const DataDecl& d, const MaybeSpan& span, size_t&) {
        if (g_.datatypes.count(d.name))
            raise(Phase::Resolve, "duplicate data declaration '" + d.name + "'",
                  {span_or(span, {})});
        std::set<std::string> params(d.params.begin(), d.params.end());
        if (params.size() != d.params.size())
            raise(Phase::Resolve, "duplicate type parameter in 'data " + d.name + "'",
                  {span_or(span, {})});
        std::vector<std::string> ctor_names;
        g_.datatypes[d.name] = {};  // visible in its own constructors
        for (const ConDecl& c : d.ctors) {
            if (g_.ctor_to_data.count(c.name))
                raise(Phase::Resolve, "duplicate constructor '" + c.name + "'",
                      {span_or(c.span, span)});
            for (const TypePtr& a : c.args) check_type(a, &params, span_or(c.span, span));
            g_.ctor_to_data[c.name] = d.name;
            ctor_names.push_back(c.name);
        }
        g_.datatypes[d.name] = ctor_names;
        return d;
    }

    NodeVariant decl(const SigDecl& s, const MaybeSpan& span, size_t&) {
        if (g_.sigs.count(s.name))
            raise(Phase::Resolve, "duplicate signature for '" + s.name + "'",
                  {span_or(span, {}), g_.sig_spans[s.name]});
        check_type(s.type, nullptr, span_or(span, {}));
        g_.sigs.insert(s.name);
        g_.implicit_heads.erase(s.name);
        g_.sig_spans[s.name] = span_or(span, {});
        return s;
    }

    NodeVariant decl(const FunEquation& e, const MaybeSpan& span, size_t&) {
        FunEquation out = e;
        if (!g_.sigs.count(e.fname)) g_.implicit_heads.insert(e.fname);  // typecheck reports it
        std::set<std::string> pattern_vars;
        out.patterns.clear();
        for (const TermPtr& p : e.patterns) out.patterns.push_back(pattern(p, pattern_vars, span));
        out.rhs = rule_term(e.rhs, pattern_vars);
        return out;
    }

    NodeVariant decl(const AxiomDecl& a, const MaybeSpan&, size_t&) {
        AxiomDecl out = a;
        out.prop = rule_prop(a.prop);
        return out;
    }

    NodeVariant decl(const LemmaDecl& l, const MaybeSpan&, size_t& lemma_index) {
        LemmaDecl out = l;
        ++lemma_index;
        if (!out.name) out.name = "lemma_" + std::to_string(lemma_index);
        out.prop = rule_prop(l.prop);
        std::set<std::string> binder_names;
        for (const Binder& b : out.prop.binders) binder_names.insert(b.name);
        std::set<std::string> scope;
        out.proof = proof(l.proof, binder_names, scope);
        return out;
    }

    // Types mention only declared datatypes (with the right arity), abstract
    // constructors, and type variables; inside a data declaration the
    // variables must be the declaration's own parameters.
    void check_type(const TypePtr& t, const std::set<std::string>* params, const Span& fallback) {
        if (!t) return;
        switch (t->kind) {
            case TypeKind::Var:
                if (params && !params->count(t->name))
                    raise(Phase::Resolve, "unknown type variable '" + t->name + "'",
                          {span_or(t->span, MaybeSpan{fallback})});
                return;
            case TypeKind::Rigid:
                return;
            case TypeKind::Con:
                // arity against the data declaration is a typing condition
                for (const TypePtr& a : t->args) check_type(a, params, fallback);
                return;
            case TypeKind::Fun:
                check_type(t->from, params, fallback);
                check_type(t->to, params, fallback);
                return;
        }
    }

    static bool is_upper(const std::string& n) {
        return !n.empty() && std::isupper(static_cast<unsigned char>(n[0]));
    }

    TermPtr pattern(const TermPtr& t, std::set<std::string>& vars, const MaybeSpan& eq_span) {
        if (!t) return t;
        switch (t->kind) {
            case TermKind::Free:
                if (is_upper(t->name)) {
                    if (!g_.ctor_to_data.count(t->name))
                        raise(Phase::Resolve, "undefined name '" + t->name + "'",
                              {span_or(t->span, eq_span)});
                    return constant(t->name, t->span);
                }
                vars.insert(t->name);  // linearity is a typing condition
                return schematic_var(t->name, t->span);
            case TermKind::App:
                return app(pattern(t->fun, vars, eq_span), pattern(t->arg, vars, eq_span), t->span);
            default:
                raise(Phase::Resolve, "invalid pattern", {span_or(t->span, eq_span)});
        }
    }

    // Terms of rules: binder names are schematic, everything else global.
    TermPtr rule_term(const TermPtr& t, const std::set<std::string>& binders) {
        return resolve_term(t, &binders, nullptr);
    }

    // Terms of proofs: names come from the fixed scope or from globals.
    TermPtr proof_term(const TermPtr& t, const std::set<std::string>& scope) {
        return resolve_term(t, nullptr, &scope);
    }

    // Props stated inside proofs carry their own binders over a fixed scope.
    Prop proof_prop(const Prop& p, const std::set<std::string>& scope) {
        Prop out = p;
        std::set<std::string> binders = binder_names(p.binders);
        out.lhs = resolve_term(p.lhs, &binders, &scope);
        out.rhs = resolve_term(p.rhs, &binders, &scope);
        return out;
    }

    Prop rule_prop(const Prop& p) {
        Prop out = p;
        std::set<std::string> binders = binder_names(p.binders);
        out.lhs = resolve_term(p.lhs, &binders, nullptr);
        out.rhs = resolve_term(p.rhs, &binders, nullptr);
        return out;
    }

    std::set<std::string> binder_names(const std::vector<Binder>& bs) {
        std::set<std::string> names;
        for (const Binder& b : bs) {
            if (!names.insert(b.name).second)
                raise(Phase::Resolve, "duplicate binder '" + b.name + "'", {span_or(b.span, {})});
            check_type(b.type, nullptr, span_or(b.span, {}));
        }
        return names;
    }

    TermPtr resolve_term(const TermPtr& t, const std::set<std::string>* binders,
                         const std::set<std::string>* scope) {
        if (!t) return t;
        switch (t->kind) {
            case TermKind::Free: {
                if (is_upper(t->name)) {
                    if (g_.ctor_to_data.count(t->name)) return constant(t->name, t->span);
                    raise(Phase::Resolve, "undefined name '" + t->name + "'", {span_or(t->span, {})});
                }
                if (binders && binders->count(t->name)) return schematic_var(t->name, t->span);
                if (scope && scope->count(t->name)) return fixed_var(t->name, t->span);
                if (g_.is_value_name(t->name)) return constant(t->name, t->span);
                raise(Phase::Resolve, "undefined name '" + t->name + "'", {span_or(t->span, {})});
            }
            case TermKind::App:
                return app(resolve_term(t->fun, binders, scope),
                           resolve_term(t->arg, binders, scope), t->span);
            default:
                return t;
        }
    }

    // Case patterns are a constructor applied to fresh variables.
    TermPtr case_pattern(const TermPtr& t, std::vector<std::string>& vars,
                         const std::set<std::string>& scope) {
        TermPtr head = t;
        std::vector<TermPtr> args;
        while (head && head->kind == TermKind::App) {
            args.push_back(head->arg);
            head = head->fun;
        }
        if (!head || head->kind != TermKind::Free || !is_upper(head->name))
            raise(Phase::Resolve, "case pattern must be a constructor applied to variables",
                  {span_or(t ? t->span : MaybeSpan{}, {})});
        if (!g_.ctor_to_data.count(head->name))
            raise(Phase::Resolve, "undefined name '" + head->name + "'", {span_or(head->span, {})});
        TermPtr acc = constant(head->name, head->span);
        std::set<std::string> seen;
        for (auto it = args.rbegin(); it != args.rend(); ++it) {
            const TermPtr& a = *it;
            if (!a || a->kind != TermKind::Free || is_upper(a->name))
                raise(Phase::Resolve, "case pattern must be a constructor applied to variables",
                      {span_or(a ? a->span : MaybeSpan{}, t->span)});
            if (!seen.insert(a->name).second)
                raise(Phase::Resolve, "duplicate pattern variable '" + a->name + "'",
                      {span_or(a->span, t->span)});
            if (scope.count(a->name))
                raise(Phase::Resolve,
                      "pattern variable '" + a->name + "' shadows an enclosing variable",
                      {span_or(a->span, t->span)});
            vars.push_back(a->name);
            acc = app(acc, fixed_var(a->name, a->span), t->span);
        }
        auto out = std::make_shared<Term>(*acc);
        out->span = t->span;
        return out;
    }

    ProofPtr proof(const ProofPtr& p, const std::set<std::string>& goal_binders,
                   const std::set<std::string>& scope) {
        if (!p) return p;
        Proof out = *p;
        if (auto* rw = std::get_if<ProofRewriting>(&out.node)) {
            std::set<std::string> sc = scope;
            sc.insert(goal_binders.begin(), goal_binders.end());
            Chain chain = rw->chain;
            chain.first = proof_term(chain.first, sc);
            for (ChainStep& s : chain.steps) s.term = proof_term(s.term, sc);
            out.node = ProofRewriting{std::move(chain)};
        } else if (auto* ext = std::get_if<ProofExtensionality>(&out.node)) {
            ProofExtensionality e = *ext;
            std::set<std::string> sc = scope;
            sc.insert(goal_binders.begin(), goal_binders.end());
            if (sc.count(e.var))
                raise(Phase::Resolve, "variable '" + e.var + "' shadows an enclosing variable",
                      {span_or(e.var_span, p->span)});
            check_type(e.type, nullptr, span_or(e.var_span, p->span));
            sc.insert(e.var);
            e.shown = proof_prop(e.shown, sc);
            std::set<std::string> shown_binders = binder_names(e.shown.binders);
            e.sub = proof(e.sub, shown_binders, sc);
            out.node = std::move(e);
        } else if (auto* ca = std::get_if<ProofCaseAnalysis>(&out.node)) {
            ProofCaseAnalysis c = *ca;
            std::set<std::string> sc = scope;
            sc.insert(goal_binders.begin(), goal_binders.end());
            c.scrutinee = proof_term(c.scrutinee, sc);
            check_type(c.type, nullptr, span_or(c.scrutinee->span, p->span));
            for (CaseEntry& ce : c.cases) {
                std::vector<std::string> vars;
                ce.pattern = case_pattern(ce.pattern, vars, sc);
                std::set<std::string> sc_case = sc;
                for (const std::string& v : vars) sc_case.insert(v);
                ce.assumption = proof_prop(ce.assumption, sc_case);
                ce.sub = proof(ce.sub, {}, sc_case);
            }
            out.node = std::move(c);
        } else if (auto* ind = std::get_if<ProofInduction>(&out.node)) {
            ProofInduction i = *ind;
            check_type(i.type, nullptr, span_or(i.var_span, p->span));
            std::set<std::string> gen_names;
            for (const Binder& b : i.generalizing) {
                if (!gen_names.insert(b.name).second)
                    raise(Phase::Resolve, "duplicate binder '" + b.name + "'",
                          {span_or(b.span, p->span)});
                check_type(b.type, nullptr, span_or(b.span, p->span));
            }
            std::set<std::string> sc = scope;
            for (const std::string& b : goal_binders)
                if (b != i.var && !gen_names.count(b)) sc.insert(b);
            for (IndCase& ic : i.cases) {
                std::vector<std::string> vars;
                ic.pattern = case_pattern(ic.pattern, vars, sc);
                std::set<std::string> sc_case = sc;
                for (const std::string& v : vars) sc_case.insert(v);
                for (const Binder& b : ic.fixes) check_type(b.type, nullptr, span_or(b.span, p->span));
                for (auto& [name, hprop] : ic.hypotheses) hprop = proof_prop(hprop, sc_case);
                std::set<std::string> sc_shown = sc_case;
                if (ic.refixed) {
                    for (const Binder& b : *ic.refixed) {
                        check_type(b.type, nullptr, span_or(b.span, p->span));
                        if (sc_shown.count(b.name))
                            raise(Phase::Resolve,
                                  "variable '" + b.name + "' shadows an enclosing variable",
                                  {span_or(b.span, p->span)});
                        sc_shown.insert(b.name);
                    }
                } else {
                    for (const std::string& gn : gen_names) sc_shown.insert(gn);
                }
                ic.shown = proof_prop(ic.shown, sc_shown);
                ic.sub = proof(ic.sub, {}, sc_shown);
            }
            out.node = std::move(i);
        }
        return make_proof(std::move(out));
    }
};

} // namespace detail

// Resolve every identifier of a parsed module, auto-naming anonymous lemmas
// lemma_<index>.
inline Module resolve_names(const Module& raw) {
    detail::Resolver r;
    return r.run(raw);
}

} // namespace cyp
