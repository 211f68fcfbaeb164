#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cyp/span.hpp"
#include "cyp/types.hpp"

namespace cyp {

// Applicative first-order terms. Application is curried: `f a b` is
// App(App(Const f, a), b). Free is the parser's unresolved identifier;
// name resolution turns every Free leaf into Const, FixedVar or
// SchematicVar. SchematicVar occurs only inside rules (axioms, lemma
// statements, function equations, hypotheses); proof obligation terms
// contain only FixedVar, Const, App and Hole.
struct Term;
using TermPtr = std::shared_ptr<const Term>;

enum class TermKind { Hole, Const, FixedVar, SchematicVar, Free, App };

struct Term {
    TermKind kind;
    std::string name;   // leaf kinds
    TermPtr fun, arg;   // App
    MaybeSpan span;
};

inline TermPtr hole(MaybeSpan span = {}) {
    return std::make_shared<Term>(Term{TermKind::Hole, {}, nullptr, nullptr, span});
}
inline TermPtr constant(std::string name, MaybeSpan span = {}) {
    return std::make_shared<Term>(Term{TermKind::Const, std::move(name), nullptr, nullptr, span});
}
inline TermPtr fixed_var(std::string name, MaybeSpan span = {}) {
    return std::make_shared<Term>(Term{TermKind::FixedVar, std::move(name), nullptr, nullptr, span});
}
inline TermPtr schematic_var(std::string name, MaybeSpan span = {}) {
    return std::make_shared<Term>(Term{TermKind::SchematicVar, std::move(name), nullptr, nullptr, span});
}
inline TermPtr free_name(std::string name, MaybeSpan span = {}) {
    return std::make_shared<Term>(Term{TermKind::Free, std::move(name), nullptr, nullptr, span});
}
inline TermPtr app(TermPtr fun, TermPtr arg, MaybeSpan span = {}) {
    if (!span) span = join(fun ? fun->span : MaybeSpan{}, arg ? arg->span : MaybeSpan{});
    return std::make_shared<Term>(Term{TermKind::App, {}, std::move(fun), std::move(arg), span});
}

// Convenience for building saturated calls in tests and synthesized goals.
inline TermPtr apply(TermPtr head, const std::vector<TermPtr>& args) {
    TermPtr t = std::move(head);
    for (const auto& a : args) t = app(t, a);
    return t;
}

inline bool term_equal(const TermPtr& a, const TermPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    if (a->kind == TermKind::App)
        return term_equal(a->fun, b->fun) && term_equal(a->arg, b->arg);
    return a->name == b->name;
}

// Path of child indices from the root; 0 steps into the function side of an
// application, 1 into the argument side.
using Position = std::vector<int>;

// Preorder enumeration of every position, root included.
inline void subterm_positions_into(const TermPtr& t, Position& here,
                                   std::vector<std::pair<Position, TermPtr>>& out) {
    out.emplace_back(here, t);
    if (t && t->kind == TermKind::App) {
        here.push_back(0);
        subterm_positions_into(t->fun, here, out);
        here.back() = 1;
        subterm_positions_into(t->arg, here, out);
        here.pop_back();
    }
}

inline std::vector<std::pair<Position, TermPtr>> subterm_positions(const TermPtr& t) {
    std::vector<std::pair<Position, TermPtr>> out;
    Position here;
    subterm_positions_into(t, here, out);
    return out;
}

inline TermPtr subterm_at(const TermPtr& t, const Position& p, size_t from = 0) {
    if (from == p.size()) return t;
    if (!t || t->kind != TermKind::App)
        throw std::logic_error("subterm_at: invalid position");
    return subterm_at(p[from] == 0 ? t->fun : t->arg, p, from + 1);
}

// Result equals t except the subterm at p is s; untouched nodes keep their
// spans, s keeps its own. Invalid positions are caller bugs.
inline TermPtr replace_at(const TermPtr& t, const Position& p, const TermPtr& s, size_t from = 0) {
    if (from == p.size()) return s;
    if (!t || t->kind != TermKind::App)
        throw std::logic_error("replace_at: invalid position");
    if (p[from] == 0) return app(replace_at(t->fun, p, s, from + 1), t->arg, t->span);
    return app(t->fun, replace_at(t->arg, p, s, from + 1), t->span);
}

// Finite map from schematic variable names to terms, applied simultaneously.
using Substitution = std::map<std::string, TermPtr>;

inline TermPtr substitute(const TermPtr& t, const Substitution& sub) {
    if (!t || sub.empty()) return t;
    switch (t->kind) {
        case TermKind::SchematicVar: {
            auto it = sub.find(t->name);
            return it == sub.end() ? t : it->second;
        }
        case TermKind::App: {
            TermPtr f = substitute(t->fun, sub);
            TermPtr a = substitute(t->arg, sub);
            if (f == t->fun && a == t->arg) return t;
            return app(std::move(f), std::move(a), t->span);
        }
        default:
            return t;
    }
}

inline bool contains_hole(const TermPtr& t) {
    if (!t) return false;
    if (t->kind == TermKind::Hole) return true;
    if (t->kind == TermKind::App) return contains_hole(t->fun) || contains_hole(t->arg);
    return false;
}

inline void hole_spans_into(const TermPtr& t, std::vector<MaybeSpan>& out) {
    if (!t) return;
    if (t->kind == TermKind::Hole) out.push_back(t->span);
    if (t->kind == TermKind::App) {
        hole_spans_into(t->fun, out);
        hole_spans_into(t->arg, out);
    }
}

inline void collect_schematic_vars(const TermPtr& t, std::set<std::string>& out) {
    if (!t) return;
    if (t->kind == TermKind::SchematicVar) out.insert(t->name);
    if (t->kind == TermKind::App) {
        collect_schematic_vars(t->fun, out);
        collect_schematic_vars(t->arg, out);
    }
}

// Terms agree wherever neither carries a hole; a hole in either term excuses
// its entire subtree.
inline bool hole_match(const TermPtr& a, const TermPtr& b) {
    if (!a || !b) return a == b;
    if (a->kind == TermKind::Hole || b->kind == TermKind::Hole) return true;
    if (a->kind != b->kind) return false;
    if (a->kind == TermKind::App)
        return hole_match(a->fun, b->fun) && hole_match(a->arg, b->arg);
    return a->name == b->name;
}

inline std::string show_term(const TermPtr& t);

namespace detail {
inline std::string show_term_atom(const TermPtr& t) {
    if (t && t->kind == TermKind::App) return "(" + show_term(t) + ")";
    return show_term(t);
}
} // namespace detail

// Message-text rendering only; diagnostics quote source slices via spans.
inline std::string show_term(const TermPtr& t) {
    if (!t) return "?";
    switch (t->kind) {
        case TermKind::Hole: return "_";
        case TermKind::App: return show_term(t->fun) + " " + detail::show_term_atom(t->arg);
        default: return t->name;
    }
}

struct Binder {
    std::string name;
    TypePtr type;
    MaybeSpan span;
};

// An equation with an explicitly typed universal quantifier prefix. Every
// schematic variable of lhs/rhs is listed in binders; names of lhs/rhs not
// bound here are Const references to globals.
struct Prop {
    std::vector<Binder> binders;
    TermPtr lhs, rhs;
    MaybeSpan span;
};

// Equality up to binder renaming: the correspondence between the two binder
// lists is read off the term structure, so independently typed binders may
// be permuted. Binder types compare up to a consistent renaming of type
// variables; fixed variables and constants compare literally.
inline bool alpha_equal(const Prop& a, const Prop& b) {
    if (a.binders.size() != b.binders.size()) return false;

    std::map<std::string, std::string> fwd, bwd;
    auto walk = [&](auto&& self, const TermPtr& x, const TermPtr& y) -> bool {
        if (!x || !y) return x == y;
        if (x->kind != y->kind) return false;
        switch (x->kind) {
            case TermKind::App:
                return self(self, x->fun, y->fun) && self(self, x->arg, y->arg);
            case TermKind::SchematicVar: {
                auto f = fwd.find(x->name);
                auto g = bwd.find(y->name);
                if (f == fwd.end() && g == bwd.end()) {
                    fwd[x->name] = y->name;
                    bwd[y->name] = x->name;
                    return true;
                }
                return f != fwd.end() && g != bwd.end() && f->second == y->name;
            }
            case TermKind::Hole:
                return true;
            default:
                return x->name == y->name;
        }
    };
    if (!walk(walk, a.lhs, b.lhs) || !walk(walk, a.rhs, b.rhs)) return false;

    // Pair binders via the occurrence bijection; binders that never occur are
    // paired in declaration order.
    std::set<std::string> taken;
    for (const auto& [from, to] : fwd) {
        (void)from;
        taken.insert(to);
    }
    std::map<std::string, const Binder*> b_byname;
    for (const auto& bb : b.binders) b_byname[bb.name] = &bb;
    std::vector<const Binder*> b_unused;
    for (const auto& bb : b.binders)
        if (!taken.count(bb.name)) b_unused.push_back(&bb);

    std::map<std::string, std::string> tfwd, tbwd;
    size_t next_unused = 0;
    for (const auto& ab : a.binders) {
        const Binder* partner = nullptr;
        auto f = fwd.find(ab.name);
        if (f != fwd.end()) {
            auto it = b_byname.find(f->second);
            if (it == b_byname.end()) return false;
            partner = it->second;
        } else {
            if (next_unused >= b_unused.size()) return false;
            partner = b_unused[next_unused++];
        }
        if (!type_alpha_equal(ab.type, partner->type, tfwd, tbwd)) return false;
    }
    return next_unused == b_unused.size();
}

// ---- declarations ----

struct ConDecl {
    std::string name;
    std::vector<TypePtr> args;
    MaybeSpan span;
};

struct DataDecl {
    std::string name;
    std::vector<std::string> params;
    std::vector<ConDecl> ctors;
};

struct SigDecl {
    std::string name;
    TypePtr type;
};

struct FunEquation {
    std::string fname;
    MaybeSpan fname_span;
    std::vector<TermPtr> patterns;
    TermPtr rhs;
};

struct AxiomDecl {
    std::string name;
    Prop prop;
};

struct Proof;
using ProofPtr = std::shared_ptr<const Proof>;

struct LemmaDecl {
    std::optional<std::string> name;  // anonymous lemmas get lemma_<k> at resolution
    Prop prop;
    ProofPtr proof;
};

struct Decl {
    std::variant<DataDecl, SigDecl, FunEquation, AxiomDecl, LemmaDecl> node;
    MaybeSpan span;
};

// A `...` marker in a list of declarations or cases: `index` entries of the
// surrounding list precede it.
struct Gap {
    size_t index = 0;
    Span span;
};

struct Module {
    std::string file;
    std::vector<Decl> decls;
    std::vector<Gap> gaps;  // declaration-level `...`
};

// Pre-resolution module: identifier leaves are still Free.
using RawModule = Module;

// ---- proofs ----

enum class LinkKind { ByDef, ByRule, ByHole, Ellipsis };

struct Link {
    LinkKind kind;
    std::string name;     // ByDef, ByRule
    MaybeSpan span;       // whole link
    MaybeSpan hole_span;  // the `_` of (by _)
};

struct ChainStep {
    Link link;
    TermPtr term;
};

struct Chain {
    TermPtr first;
    std::vector<ChainStep> steps;
};

struct ProofRewriting {
    Chain chain;
};

struct ProofExtensionality {
    std::string var;
    MaybeSpan var_span;
    TypePtr type;
    Prop shown;
    ProofPtr sub;
};

struct CaseEntry {
    TermPtr pattern;
    std::string assume_name;
    MaybeSpan assume_span;
    Prop assumption;
    ProofPtr sub;
    MaybeSpan span;
};

struct ProofCaseAnalysis {
    TermPtr scrutinee;
    TypePtr type;
    std::vector<CaseEntry> cases;
    std::vector<Gap> gaps;
};

struct IndCase {
    TermPtr pattern;
    std::vector<Binder> fixes;
    std::vector<std::pair<std::string, Prop>> hypotheses;  // stated IHs
    std::vector<MaybeSpan> hypothesis_spans;               // name spans, parallel
    std::optional<std::vector<Binder>> refixed;            // For fixed ...
    Prop shown;
    ProofPtr sub;
    MaybeSpan span;
};

struct ProofInduction {
    std::string var;
    MaybeSpan var_span;
    TypePtr type;
    std::vector<Binder> generalizing;
    std::vector<IndCase> cases;
    std::vector<Gap> gaps;
};

struct ProofHole {
    Span dots;
};

struct Proof {
    std::variant<ProofRewriting, ProofExtensionality, ProofCaseAnalysis, ProofInduction, ProofHole> node;
    MaybeSpan span;
};

inline ProofPtr make_proof(Proof p) { return std::make_shared<Proof>(std::move(p)); }

} // namespace cyp
