#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cyp/diagnostics.hpp"
#include "cyp/syntax.hpp"
#include "cyp/types.hpp"

namespace cyp {

// Hindley-Milner inference for the language subset: no type classes, no
// kinds beyond arity checking of type constructors. Expression holes have
// type forall a. a. Rigid type variables (a lemma's own variables inside its
// proof) unify only with themselves.

struct DataInfo {
    std::vector<std::string> params;
    std::vector<ConDecl> ctors;
    MaybeSpan span;
};

struct TypeEnv {
    std::map<std::string, Scheme> constructors;
    std::map<std::string, Scheme> functions;  // also uninterpreted constants
    std::map<std::string, DataInfo> datatypes;

    const Scheme* lookup(const std::string& name) const {
        if (auto it = constructors.find(name); it != constructors.end()) return &it->second;
        if (auto it = functions.find(name); it != functions.end()) return &it->second;
        return nullptr;
    }
};

using TypeSubst = std::map<std::string, TypePtr>;

// Recursively resolve bound variables; the result contains only unbound ones.
inline TypePtr apply_subst(const TypeSubst& s, const TypePtr& t) {
    if (!t) return t;
    switch (t->kind) {
        case TypeKind::Var: {
            auto it = s.find(t->name);
            if (it == s.end()) return t;
            return apply_subst(s, it->second);
        }
        case TypeKind::Rigid:
            return t;
        case TypeKind::Con: {
            std::vector<TypePtr> args;
            args.reserve(t->args.size());
            for (const auto& a : t->args) args.push_back(apply_subst(s, a));
            return tcon(t->name, std::move(args), t->span);
        }
        case TypeKind::Fun:
            return tfun(apply_subst(s, t->from), apply_subst(s, t->to), t->span);
    }
    return t;
}

class InferState {
public:
    TypePtr fresh() { return tvar("$" + std::to_string(next_++)); }

    TypePtr shallow(TypePtr t) const {
        while (t && t->kind == TypeKind::Var) {
            auto it = subst_.find(t->name);
            if (it == subst_.end()) break;
            t = it->second;
        }
        return t;
    }

    TypePtr zonk(const TypePtr& t) const { return apply_subst(subst_, t); }

    bool occurs(const std::string& var, const TypePtr& t) const {
        TypePtr r = shallow(t);
        if (!r) return false;
        switch (r->kind) {
            case TypeKind::Var: return r->name == var;
            case TypeKind::Rigid: return false;
            case TypeKind::Con:
                for (const auto& a : r->args)
                    if (occurs(var, a)) return true;
                return false;
            case TypeKind::Fun: return occurs(var, r->from) || occurs(var, r->to);
        }
        return false;
    }

    bool unify(const TypePtr& a, const TypePtr& b) {
        TypePtr x = shallow(a), y = shallow(b);
        if (!x || !y) return x == y;
        if (x->kind == TypeKind::Var) {
            if (y->kind == TypeKind::Var && x->name == y->name) return true;
            if (occurs(x->name, y)) return false;
            subst_[x->name] = y;
            return true;
        }
        if (y->kind == TypeKind::Var) return unify(y, x);
        if (x->kind != y->kind) return false;
        switch (x->kind) {
            case TypeKind::Rigid:
                return x->name == y->name;
            case TypeKind::Con: {
                if (x->name != y->name || x->args.size() != y->args.size()) return false;
                for (size_t i = 0; i < x->args.size(); ++i)
                    if (!unify(x->args[i], y->args[i])) return false;
                return true;
            }
            case TypeKind::Fun:
                return unify(x->from, y->from) && unify(x->to, y->to);
            default:
                return false;
        }
    }

    const TypeSubst& subst() const { return subst_; }

    TypePtr instantiate(const Scheme& s) {
        if (s.vars.empty()) return s.body;
        std::map<std::string, TypePtr> inst;
        for (const std::string& v : s.vars) inst[v] = fresh();
        return map_type_vars(s.body, [&](const Type& v) {
            auto it = inst.find(v.name);
            return it == inst.end() ? tvar(v.name, v.span) : it->second;
        });
    }

    // One shared fresh instantiation for a rule's binder types.
    TypePtr freshen(const TypePtr& t, std::map<std::string, TypePtr>& shared) {
        return map_type_vars(t, [&](const Type& v) {
            auto it = shared.find(v.name);
            if (it != shared.end()) return it->second;
            TypePtr f = fresh();
            shared[v.name] = f;
            return f;
        });
    }

private:
    TypeSubst subst_;
    int next_ = 0;
};

// Most general unifier with occurs check; failure is a value.
inline std::optional<TypeSubst> unify(const TypePtr& a, const TypePtr& b) {
    InferState st;
    if (!st.unify(a, b)) return std::nullopt;
    return st.subst();
}

// Typing assumptions for the free (fixed or schematic) variables in scope.
using Assumptions = std::map<std::string, TypePtr>;

// Principal type of a resolved term. Holes contribute a fresh variable,
// constants are looked up with fresh instantiation. Ill-typed applications
// raise a diagnostic carrying the application node's span and both types.
inline TypePtr infer_type(const TypeEnv& env, const Assumptions& assumptions, const TermPtr& t,
                          InferState& st) {
    switch (t->kind) {
        case TermKind::Hole:
            return st.fresh();
        case TermKind::Const: {
            const Scheme* s = env.lookup(t->name);
            if (!s)
                raise(Phase::Type, "no signature in scope for '" + t->name + "'",
                      t->span ? std::vector<Span>{*t->span} : std::vector<Span>{});
            return st.instantiate(*s);
        }
        case TermKind::FixedVar:
        case TermKind::SchematicVar: {
            auto it = assumptions.find(t->name);
            if (it == assumptions.end())
                raise(Phase::Type, "variable '" + t->name + "' has no typing assumption",
                      t->span ? std::vector<Span>{*t->span} : std::vector<Span>{});
            return it->second;
        }
        case TermKind::Free:
            throw std::logic_error("infer_type: unresolved name '" + t->name + "'");
        case TermKind::App: {
            TypePtr tf = infer_type(env, assumptions, t->fun, st);
            TypePtr ta = infer_type(env, assumptions, t->arg, st);
            TypePtr r = st.fresh();
            if (!st.unify(tf, tfun(ta, r)))
                raise(Phase::Type,
                      "ill-typed application: cannot apply '" + show_term(t->fun) + "' of type " +
                          show_type(st.zonk(tf)) + " to '" + show_term(t->arg) + "' of type " +
                          show_type(st.zonk(ta)),
                      t->span ? std::vector<Span>{*t->span} : std::vector<Span>{});
            return r;
        }
    }
    throw std::logic_error("infer_type: bad term");
}

namespace detail {

inline std::vector<Span> spans_of(std::initializer_list<MaybeSpan> spans) {
    std::vector<Span> out;
    for (const MaybeSpan& s : spans)
        if (s) out.push_back(*s);
    return out;
}

// Type constructor arity must match the declaring data declaration;
// constructors without one are abstract and unconstrained.
inline void check_arity(const TypeEnv& env, const TypePtr& t, const MaybeSpan& at) {
    if (!t) return;
    switch (t->kind) {
        case TypeKind::Con: {
            auto it = env.datatypes.find(t->name);
            if (it != env.datatypes.end() && it->second.params.size() != t->args.size())
                raise(Phase::Type,
                      "type constructor '" + t->name + "' expects " +
                          std::to_string(it->second.params.size()) + " argument(s), got " +
                          std::to_string(t->args.size()),
                      spans_of({t->span, at}));
            for (const auto& a : t->args) check_arity(env, a, at);
            return;
        }
        case TypeKind::Fun:
            check_arity(env, t->from, at);
            check_arity(env, t->to, at);
            return;
        default:
            return;
    }
}

// Check one pattern against its expected argument type; binds pattern
// variables. Patterns are linear and constructors fully applied.
inline void check_pattern(const TypeEnv& env, const TermPtr& pat, const TypePtr& expected,
                          Assumptions& bindings, InferState& st) {
    if (pat->kind == TermKind::SchematicVar) {
        if (bindings.count(pat->name))
            raise(Phase::Type, "non-linear pattern: variable '" + pat->name + "' repeated",
                  spans_of({pat->span}));
        bindings[pat->name] = expected;
        return;
    }
    TermPtr head = pat;
    std::vector<TermPtr> args;
    while (head->kind == TermKind::App) {
        args.push_back(head->arg);
        head = head->fun;
    }
    std::reverse(args.begin(), args.end());
    if (head->kind != TermKind::Const)
        raise(Phase::Type, "invalid pattern", spans_of({pat->span}));
    auto cs = env.constructors.find(head->name);
    if (cs == env.constructors.end())
        raise(Phase::Type, "pattern head '" + head->name + "' is not a constructor",
              spans_of({head->span, pat->span}));
    // count declared arguments
    size_t arity = 0;
    for (TypePtr b = cs->second.body; b && b->kind == TypeKind::Fun; b = b->to) ++arity;
    if (args.size() != arity)
        raise(Phase::Type,
              "constructor '" + head->name + "' expects " + std::to_string(arity) +
                  " argument(s) in pattern, got " + std::to_string(args.size()),
              spans_of({pat->span}));
    TypePtr ct = st.instantiate(cs->second);
    for (const TermPtr& a : args) {
        TypePtr arg_ty = st.shallow(ct)->from;
        check_pattern(env, a, arg_ty, bindings, st);
        ct = st.shallow(ct)->to;
    }
    if (!st.unify(ct, expected))
        raise(Phase::Type,
              "pattern of type " + show_type(st.zonk(ct)) + " where " +
                  show_type(st.zonk(expected)) + " is required",
              spans_of({pat->span}));
}

inline TypePtr equation_result_type(const TypeEnv& env, const FunEquation& eq, InferState& st,
                                    Assumptions& bindings) {
    auto fs = env.functions.find(eq.fname);
    if (fs == env.functions.end())
        raise(Phase::Type, "signature missing for function '" + eq.fname + "'",
              spans_of({eq.fname_span}));
    TypePtr ty = rigidify(fs->second.body);
    for (const TermPtr& pat : eq.patterns) {
        TypePtr r = st.shallow(ty);
        if (!r || r->kind != TypeKind::Fun)
            raise(Phase::Type,
                  "equation for '" + eq.fname + "' has more arguments than its signature",
                  spans_of({pat->span, eq.fname_span}));
        check_pattern(env, pat, r->from, bindings, st);
        ty = r->to;
    }
    return ty;
}

} // namespace detail

// Pattern variable types of one equation, read off the signature's argument
// positions. Used both when checking the module and when the equation is
// turned into a rewrite rule.
inline std::vector<Binder> equation_binders(const TypeEnv& env, const FunEquation& eq) {
    InferState st;
    Assumptions bindings;
    detail::equation_result_type(env, eq, st, bindings);
    std::vector<Binder> out;
    std::set<std::string> seen;
    auto record = [&](const TermPtr& t, auto&& self) -> void {
        if (t->kind == TermKind::SchematicVar && seen.insert(t->name).second)
            out.push_back(Binder{t->name, unrigidify(st.zonk(bindings.at(t->name))), t->span});
        if (t->kind == TermKind::App) {
            self(t->fun, self);
            self(t->arg, self);
        }
    };
    for (const TermPtr& pat : eq.patterns) record(pat, record);
    return out;
}

inline void check_prop_types(const TypeEnv& env, const Prop& p);

// Equation statements and lemma/axiom statements are typed here; proofs are
// typed later, against the environment this returns.
inline TypeEnv check_module_types(const Module& m) {
    TypeEnv env;
    // datatypes first, so type expressions may mention any of them
    for (const Decl& d : m.decls) {
        if (const auto* data = std::get_if<DataDecl>(&d.node)) {
            DataInfo info{data->params, data->ctors, d.span};
            env.datatypes[data->name] = info;
            std::vector<TypePtr> params;
            for (const std::string& p : data->params) params.push_back(tvar(p));
            TypePtr result = tcon(data->name, params);
            for (const ConDecl& c : data->ctors) {
                TypePtr ty = result;
                for (auto it = c.args.rbegin(); it != c.args.rend(); ++it) ty = tfun(*it, ty);
                env.constructors[c.name] = Scheme{data->params, ty};
            }
        }
    }
    for (const Decl& d : m.decls) {
        if (const auto* data = std::get_if<DataDecl>(&d.node)) {
            for (const ConDecl& c : data->ctors)
                for (const TypePtr& a : c.args) detail::check_arity(env, a, c.span);
        } else if (const auto* sig = std::get_if<SigDecl>(&d.node)) {
            detail::check_arity(env, sig->type, d.span);
            std::set<std::string> vars = free_type_vars(sig->type);
            env.functions[sig->name] =
                Scheme{std::vector<std::string>(vars.begin(), vars.end()), sig->type};
        } else if (const auto* eq = std::get_if<FunEquation>(&d.node)) {
            InferState st;
            Assumptions bindings;
            TypePtr result = detail::equation_result_type(env, *eq, st, bindings);
            TypePtr rhs_ty = infer_type(env, bindings, eq->rhs, st);
            if (!st.unify(rhs_ty, result))
                raise(Phase::Type,
                      "equation right-hand side has type " + show_type(st.zonk(rhs_ty)) +
                          " but the signature requires " + show_type(st.zonk(result)),
                      detail::spans_of({eq->rhs->span, eq->fname_span}));
        } else if (const auto* ax = std::get_if<AxiomDecl>(&d.node)) {
            check_prop_types(env, ax->prop);
        } else if (const auto* lem = std::get_if<LemmaDecl>(&d.node)) {
            check_prop_types(env, lem->prop);
        }
    }
    return env;
}

// Both sides of a quantified equation must infer to a common type under the
// binder assumptions; binder type variables are rigid within the statement.
inline void check_prop_types(const TypeEnv& env, const Prop& p) {
    InferState st;
    Assumptions assumptions;
    for (const Binder& b : p.binders) {
        detail::check_arity(env, b.type, b.span);
        assumptions[b.name] = rigidify(b.type);
    }
    TypePtr lt = infer_type(env, assumptions, p.lhs, st);
    TypePtr rt = infer_type(env, assumptions, p.rhs, st);
    if (!st.unify(lt, rt))
        raise(Phase::Type,
              "equation sides have different types: " + show_type(st.zonk(lt)) + " and " +
                  show_type(st.zonk(rt)),
              detail::spans_of({p.span}));
}

// All terms of an equational proof have identical type, under the typing
// assumptions for the free variables of the lemma.
inline std::optional<Diagnostic> check_chain_types(const TypeEnv& env,
                                                   const Assumptions& assumptions,
                                                   const Prop& goal, const Chain& chain) {
    try {
        InferState st;
        TypePtr goal_ty = infer_type(env, assumptions, goal.lhs, st);
        if (!st.unify(goal_ty, infer_type(env, assumptions, goal.rhs, st)))
            return Diagnostic{Phase::Type, "goal equation sides have different types",
                              detail::spans_of({goal.span})};
        auto check_term = [&](const TermPtr& t) -> std::optional<Diagnostic> {
            TypePtr ty = infer_type(env, assumptions, t, st);
            if (!st.unify(ty, goal_ty))
                return Diagnostic{Phase::Type,
                                  "chain term has type " + show_type(st.zonk(ty)) +
                                      " but the chain requires " + show_type(st.zonk(goal_ty)),
                                  detail::spans_of({t->span, chain.first->span})};
            return std::nullopt;
        };
        if (auto d = check_term(chain.first)) return d;
        for (const ChainStep& s : chain.steps)
            if (auto d = check_term(s.term)) return d;
        return std::nullopt;
    } catch (const DiagnosticError& e) {
        return e.diag();
    }
}

// Typed application of a rule under substitution sigma: one consistent fresh
// instantiation of the rule's binder types, each substituted term's type
// unified against its binder's instantiated type, as a single simultaneous
// problem.
inline std::optional<Diagnostic> check_rule_application_types(const Prop& rule,
                                                              const Substitution& sigma,
                                                              const TypeEnv& env,
                                                              const Assumptions& assumptions) {
    try {
        InferState st;
        std::map<std::string, TypePtr> shared;
        for (const Binder& b : rule.binders) {
            auto it = sigma.find(b.name);
            if (it == sigma.end()) continue;
            TypePtr expected = st.freshen(b.type, shared);
            TypePtr actual = infer_type(env, assumptions, it->second, st);
            if (!st.unify(expected, actual)) {
                std::vector<Span> spans;
                if (it->second->span) spans.push_back(*it->second->span);
                if (b.span) spans.push_back(*b.span);
                else if (rule.span) spans.push_back(*rule.span);
                return Diagnostic{Phase::Type,
                                  "types do not unify: rule variable '" + b.name + " :: " +
                                      show_type(b.type) + "' cannot stand for '" +
                                      show_term(it->second) + " :: " + show_type(st.zonk(actual)) +
                                      "'",
                                  std::move(spans)};
            }
        }
        return std::nullopt;
    } catch (const DiagnosticError& e) {
        return e.diag();
    }
}

} // namespace cyp
