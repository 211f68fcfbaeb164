#pragma once

#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "cyp/diagnostics.hpp"
#include "cyp/syntax.hpp"

namespace cyp {

// Structural matching of a solution module against an instructor blueprint.
// If the blueprint node is a hole, accept; if not, the roots of both nodes
// must be identical and the children are matched pairwise. Failure is final;
// declining moves on to the next alternative. Matching runs on raw
// (pre-resolution) ASTs and ignores spans entirely; names compare literally.
//
// Multi-holes (`...` in a chain, a case list, or a declaration list) may
// occur at most once per list. The single hole splits the solution list
// positionally: blueprint entries before it match from the front, entries
// after it from the back, the hole absorbs the middle.

struct MatchOutcome {
    enum class Kind { Succeed, Decline, Fail };
    Kind kind = Kind::Succeed;
    std::optional<Diagnostic> diag;

    static MatchOutcome ok() { return {Kind::Succeed, std::nullopt}; }
    static MatchOutcome decline() { return {Kind::Decline, std::nullopt}; }
    static MatchOutcome fail(Diagnostic d) { return {Kind::Fail, std::move(d)}; }
    bool succeeded() const { return kind == Kind::Succeed; }
    bool failed() const { return kind == Kind::Fail; }
};

// The pair of last locations seen from the root; nodes without location
// information report the span of the nearest spanned ancestor.
struct SpanPair {
    MaybeSpan blueprint;
    MaybeSpan solution;

    SpanPair at(const MaybeSpan& b, const MaybeSpan& s) const {
        return SpanPair{b ? b : blueprint, s ? s : solution};
    }
    std::vector<Span> spans() const {
        std::vector<Span> out;
        if (blueprint) out.push_back(*blueprint);
        if (solution) out.push_back(*solution);
        return out;
    }
};

namespace detail {

inline MatchOutcome fail_roots(const SpanPair& st, const std::string& type_name,
                               const std::string& rb, const std::string& rs) {
    return MatchOutcome::fail(Diagnostic{
        Phase::Match,
        "abstract syntax sub-trees of type " + type_name + " have different roots: " + rb + ", " + rs,
        st.spans()});
}

inline MatchOutcome fail_msg(const SpanPair& st, std::string msg) {
    return MatchOutcome::fail(Diagnostic{Phase::Match, std::move(msg), st.spans()});
}

// Alternative composition: the first alternative that does not decline wins.
inline MatchOutcome first_of(std::initializer_list<std::function<MatchOutcome()>> alts) {
    for (const auto& alt : alts) {
        MatchOutcome r = alt();
        if (r.kind != MatchOutcome::Kind::Decline) return r;
    }
    return MatchOutcome::decline();
}

inline std::string term_root(const TermPtr& t) {
    if (!t) return "?";
    switch (t->kind) {
        case TermKind::App: return "Application";
        case TermKind::Hole: return "_";
        default: return "'" + t->name + "'";
    }
}

} // namespace detail

inline MatchOutcome match_term(const TermPtr& b, const TermPtr& s, SpanPair st) {
    st = st.at(b ? b->span : MaybeSpan{}, s ? s->span : MaybeSpan{});
    return detail::first_of({
        [&]() -> MatchOutcome {
            // a term hole matches any term, including a remaining hole
            if (b && b->kind == TermKind::Hole) return MatchOutcome::ok();
            return MatchOutcome::decline();
        },
        [&]() -> MatchOutcome {
            if (!b || !s || b->kind != s->kind) return MatchOutcome::decline();
            if (b->kind == TermKind::App) {
                MatchOutcome r = match_term(b->fun, s->fun, st);
                if (!r.succeeded()) return r;
                return match_term(b->arg, s->arg, st);
            }
            if (b->name == s->name) return MatchOutcome::ok();
            return detail::fail_roots(st, "Name", "'" + b->name + "'", "'" + s->name + "'");
        },
        [&]() -> MatchOutcome {
            return detail::fail_roots(st, "Term", detail::term_root(b), detail::term_root(s));
        },
    });
}

inline MatchOutcome match_type(const TypePtr& b, const TypePtr& s, SpanPair st) {
    st = st.at(b ? b->span : MaybeSpan{}, s ? s->span : MaybeSpan{});
    if (!b || !s || b->kind != s->kind)
        return detail::fail_roots(st, "Type", show_type(b), show_type(s));
    switch (b->kind) {
        case TypeKind::Var:
        case TypeKind::Rigid:
            if (b->name == s->name) return MatchOutcome::ok();
            return detail::fail_roots(st, "Type", "'" + b->name + "'", "'" + s->name + "'");
        case TypeKind::Con: {
            if (b->name != s->name || b->args.size() != s->args.size())
                return detail::fail_roots(st, "Type", show_type(b), show_type(s));
            for (size_t i = 0; i < b->args.size(); ++i) {
                MatchOutcome r = match_type(b->args[i], s->args[i], st);
                if (!r.succeeded()) return r;
            }
            return MatchOutcome::ok();
        }
        case TypeKind::Fun: {
            MatchOutcome r = match_type(b->from, s->from, st);
            if (!r.succeeded()) return r;
            return match_type(b->to, s->to, st);
        }
    }
    return MatchOutcome::ok();
}

inline MatchOutcome match_binders(const std::vector<Binder>& b, const std::vector<Binder>& s,
                                  SpanPair st) {
    if (b.size() != s.size())
        return detail::fail_msg(st, "binder lists have different lengths: " +
                                        std::to_string(b.size()) + ", " + std::to_string(s.size()));
    for (size_t i = 0; i < b.size(); ++i) {
        SpanPair here = st.at(b[i].span, s[i].span);
        if (b[i].name != s[i].name)
            return detail::fail_roots(here, "Name", "'" + b[i].name + "'", "'" + s[i].name + "'");
        MatchOutcome r = match_type(b[i].type, s[i].type, here);
        if (!r.succeeded()) return r;
    }
    return MatchOutcome::ok();
}

inline MatchOutcome match_prop(const Prop& b, const Prop& s, SpanPair st) {
    st = st.at(b.span, s.span);
    MatchOutcome r = match_binders(b.binders, s.binders, st);
    if (!r.succeeded()) return r;
    r = match_term(b.lhs, s.lhs, st);
    if (!r.succeeded()) return r;
    return match_term(b.rhs, s.rhs, st);
}

namespace detail {

inline std::string link_root(const Link& l) {
    switch (l.kind) {
        case LinkKind::ByDef: return "'by def " + l.name + "'";
        case LinkKind::ByRule: return "'by " + l.name + "'";
        case LinkKind::ByHole: return "'by _'";
        case LinkKind::Ellipsis: return "'...'";
    }
    return "?";
}

} // namespace detail

inline MatchOutcome match_link(const Link& b, const Link& s, SpanPair st) {
    st = st.at(b.span, s.span);
    return detail::first_of({
        [&]() -> MatchOutcome {
            // (by _) stands for any link
            if (b.kind == LinkKind::ByHole) return MatchOutcome::ok();
            return MatchOutcome::decline();
        },
        [&]() -> MatchOutcome {
            if (b.kind != s.kind) return MatchOutcome::decline();
            if (b.kind == LinkKind::ByDef || b.kind == LinkKind::ByRule) {
                if (b.name != s.name)
                    return detail::fail_roots(st, "Name", "'" + b.name + "'", "'" + s.name + "'");
            }
            return MatchOutcome::ok();
        },
        [&]() -> MatchOutcome {
            return detail::fail_roots(st, "Link", detail::link_root(b), detail::link_root(s));
        },
    });
}

// A chain's `...` step absorbs any run of solution steps; the term it is
// written against pins the term the run must reach.
inline MatchOutcome match_chain(const Chain& b, const Chain& s, SpanPair st) {
    MatchOutcome r = match_term(b.first, s.first, st);
    if (!r.succeeded()) return r;

    size_t hole = b.steps.size();
    for (size_t i = 0; i < b.steps.size(); ++i) {
        if (b.steps[i].link.kind != LinkKind::Ellipsis) continue;
        if (hole != b.steps.size())
            return detail::fail_msg(st.at(b.steps[i].link.span, {}),
                                    "ambiguous blueprint: more than one '...' in one chain");
        hole = i;
    }

    auto step = [&](const ChainStep& bs, const ChainStep& ss) -> MatchOutcome {
        MatchOutcome r2 = match_link(bs.link, ss.link, st);
        if (!r2.succeeded()) return r2;
        return match_term(bs.term, ss.term, st);
    };

    if (hole == b.steps.size()) {
        if (b.steps.size() != s.steps.size())
            return detail::fail_msg(st, "chains have different lengths: " +
                                            std::to_string(b.steps.size()) + " and " +
                                            std::to_string(s.steps.size()) + " steps");
        for (size_t i = 0; i < b.steps.size(); ++i) {
            MatchOutcome r2 = step(b.steps[i], s.steps[i]);
            if (!r2.succeeded()) return r2;
        }
        return MatchOutcome::ok();
    }

    size_t post = b.steps.size() - hole - 1;
    if (s.steps.size() + 1 < hole + post + 1)
        return detail::fail_msg(st, "solution chain has fewer steps than the blueprint requires");
    for (size_t i = 0; i < hole; ++i) {
        MatchOutcome r2 = step(b.steps[i], s.steps[i]);
        if (!r2.succeeded()) return r2;
    }
    for (size_t i = 0; i < post; ++i) {
        MatchOutcome r2 = step(b.steps[hole + 1 + i], s.steps[s.steps.size() - post + i]);
        if (!r2.succeeded()) return r2;
    }
    size_t before_suffix = s.steps.size() - post;  // count of solution steps up to the pin
    const TermPtr& pinned = before_suffix == 0 ? s.first : s.steps[before_suffix - 1].term;
    return match_term(b.steps[hole].term, pinned, st.at(b.steps[hole].link.span, pinned->span));
}

inline MatchOutcome match_proof(const ProofPtr& b, const ProofPtr& s, SpanPair st);

namespace detail {

// Interleaved view of a case/declaration list with its `...` markers.
template <typename T>
struct SeqItem {
    const T* elem = nullptr;  // null means a `...` marker
    const Gap* gap = nullptr;
};

template <typename T>
std::vector<SeqItem<T>> interleave(const std::vector<T>& elems, const std::vector<Gap>& gaps) {
    std::vector<SeqItem<T>> out;
    size_t g = 0;
    for (size_t i = 0; i <= elems.size(); ++i) {
        while (g < gaps.size() && gaps[g].index == i) out.push_back(SeqItem<T>{nullptr, &gaps[g++]});
        if (i < elems.size()) out.push_back(SeqItem<T>{&elems[i], nullptr});
    }
    return out;
}

inline std::string proof_root(const ProofPtr& p) {
    if (!p) return "?";
    if (std::holds_alternative<ProofRewriting>(p->node)) return "Rewriting";
    if (std::holds_alternative<ProofExtensionality>(p->node)) return "Extensionality";
    if (std::holds_alternative<ProofCaseAnalysis>(p->node)) return "CaseAnalysis";
    if (std::holds_alternative<ProofInduction>(p->node)) return "Induction";
    return "ProofHole";
}

// Positional list matching with at most one multi-hole: lengths must agree
// without one; with one at index k the blueprint prefix matches the solution
// front, the suffix matches the back, and the hole absorbs the middle.
template <typename T, typename F>
MatchOutcome match_list(const std::vector<SeqItem<T>>& bs, const std::vector<SeqItem<T>>& ss,
                        SpanPair st, const std::string& what, F&& match_elem) {
    size_t hole = bs.size();
    for (size_t i = 0; i < bs.size(); ++i) {
        if (!bs[i].gap) continue;
        if (hole != bs.size())
            return fail_msg(st.at(MaybeSpan{bs[i].gap->span}, {}),
                            "ambiguous blueprint: more than one '...' in one " + what + " list");
        hole = i;
    }
    auto item = [&](const SeqItem<T>& b, const SeqItem<T>& s) -> MatchOutcome {
        if (b.gap && s.gap) return MatchOutcome::ok();  // the hole was kept
        if (b.gap || s.gap)
            return fail_roots(st.at(b.gap ? MaybeSpan{b.gap->span} : MaybeSpan{},
                                    s.gap ? MaybeSpan{s.gap->span} : MaybeSpan{}),
                              what, b.gap ? "'...'" : "an entry", s.gap ? "'...'" : "an entry");
        return match_elem(*b.elem, *s.elem);
    };
    if (hole == bs.size()) {
        if (bs.size() != ss.size())
            return fail_msg(st, what + " lists have different lengths: " +
                                    std::to_string(bs.size()) + ", " + std::to_string(ss.size()));
        for (size_t i = 0; i < bs.size(); ++i) {
            MatchOutcome r = item(bs[i], ss[i]);
            if (!r.succeeded()) return r;
        }
        return MatchOutcome::ok();
    }
    size_t post = bs.size() - hole - 1;
    if (ss.size() < hole + post)
        return fail_msg(st, "solution " + what + " list is shorter than the blueprint requires");
    for (size_t i = 0; i < hole; ++i) {
        MatchOutcome r = item(bs[i], ss[i]);
        if (!r.succeeded()) return r;
    }
    for (size_t i = 0; i < post; ++i) {
        MatchOutcome r = item(bs[hole + 1 + i], ss[ss.size() - post + i]);
        if (!r.succeeded()) return r;
    }
    return MatchOutcome::ok();
}

} // namespace detail

inline MatchOutcome match_case(const CaseEntry& b, const CaseEntry& s, SpanPair st) {
    st = st.at(b.span, s.span);
    MatchOutcome r = match_term(b.pattern, s.pattern, st);
    if (!r.succeeded()) return r;
    if (b.assume_name != s.assume_name)
        return detail::fail_roots(st.at(b.assume_span, s.assume_span), "Name",
                                  "'" + b.assume_name + "'", "'" + s.assume_name + "'");
    r = match_prop(b.assumption, s.assumption, st);
    if (!r.succeeded()) return r;
    return match_proof(b.sub, s.sub, st);
}

inline MatchOutcome match_ind_case(const IndCase& b, const IndCase& s, SpanPair st) {
    st = st.at(b.span, s.span);
    MatchOutcome r = match_term(b.pattern, s.pattern, st);
    if (!r.succeeded()) return r;
    r = match_binders(b.fixes, s.fixes, st);
    if (!r.succeeded()) return r;
    if (b.hypotheses.size() != s.hypotheses.size())
        return detail::fail_msg(st, "hypothesis lists have different lengths");
    for (size_t i = 0; i < b.hypotheses.size(); ++i) {
        if (b.hypotheses[i].first != s.hypotheses[i].first)
            return detail::fail_roots(st.at(b.hypothesis_spans[i], s.hypothesis_spans[i]), "Name",
                                      "'" + b.hypotheses[i].first + "'",
                                      "'" + s.hypotheses[i].first + "'");
        r = match_prop(b.hypotheses[i].second, s.hypotheses[i].second, st);
        if (!r.succeeded()) return r;
    }
    if (b.refixed.has_value() != s.refixed.has_value())
        return detail::fail_msg(st, "one case has a 'for fixed' clause and the other does not");
    if (b.refixed) {
        r = match_binders(*b.refixed, *s.refixed, st);
        if (!r.succeeded()) return r;
    }
    r = match_prop(b.shown, s.shown, st);
    if (!r.succeeded()) return r;
    return match_proof(b.sub, s.sub, st);
}

inline MatchOutcome match_proof(const ProofPtr& b, const ProofPtr& s, SpanPair st) {
    st = st.at(b ? b->span : MaybeSpan{}, s ? s->span : MaybeSpan{});
    return detail::first_of({
        [&]() -> MatchOutcome {
            // `Proof ... QED` stands for any proof
            if (b && std::holds_alternative<ProofHole>(b->node)) return MatchOutcome::ok();
            return MatchOutcome::decline();
        },
        [&]() -> MatchOutcome {
            if (!b || !s || b->node.index() != s->node.index()) return MatchOutcome::decline();
            if (const auto* rw = std::get_if<ProofRewriting>(&b->node))
                return match_chain(rw->chain, std::get<ProofRewriting>(s->node).chain, st);
            if (const auto* ext = std::get_if<ProofExtensionality>(&b->node)) {
                const auto& se = std::get<ProofExtensionality>(s->node);
                if (ext->var != se.var)
                    return detail::fail_roots(st.at(ext->var_span, se.var_span), "Name",
                                              "'" + ext->var + "'", "'" + se.var + "'");
                MatchOutcome r = match_type(ext->type, se.type, st);
                if (!r.succeeded()) return r;
                r = match_prop(ext->shown, se.shown, st);
                if (!r.succeeded()) return r;
                return match_proof(ext->sub, se.sub, st);
            }
            if (const auto* ca = std::get_if<ProofCaseAnalysis>(&b->node)) {
                const auto& sc = std::get<ProofCaseAnalysis>(s->node);
                MatchOutcome r = match_term(ca->scrutinee, sc.scrutinee, st);
                if (!r.succeeded()) return r;
                r = match_type(ca->type, sc.type, st);
                if (!r.succeeded()) return r;
                return detail::match_list(detail::interleave(ca->cases, ca->gaps),
                                          detail::interleave(sc.cases, sc.gaps), st, "case",
                                          [&](const CaseEntry& x, const CaseEntry& y) {
                                              return match_case(x, y, st);
                                          });
            }
            const auto* ind = std::get_if<ProofInduction>(&b->node);
            if (!ind) return MatchOutcome::ok();  // two proof holes
            const auto& si = std::get<ProofInduction>(s->node);
            if (ind->var != si.var)
                return detail::fail_roots(st.at(ind->var_span, si.var_span), "Name",
                                          "'" + ind->var + "'", "'" + si.var + "'");
            MatchOutcome r = match_type(ind->type, si.type, st);
            if (!r.succeeded()) return r;
            r = match_binders(ind->generalizing, si.generalizing, st);
            if (!r.succeeded()) return r;
            return detail::match_list(detail::interleave(ind->cases, ind->gaps),
                                      detail::interleave(si.cases, si.gaps), st, "case",
                                      [&](const IndCase& x, const IndCase& y) {
                                          return match_ind_case(x, y, st);
                                      });
        },
        [&]() -> MatchOutcome {
            return detail::fail_roots(st, "Proof", detail::proof_root(b), detail::proof_root(s));
        },
    });
}

namespace detail {

inline std::string decl_root(const Decl& d) {
    if (std::holds_alternative<DataDecl>(d.node)) return "DataDecl";
    if (std::holds_alternative<SigDecl>(d.node)) return "SigDecl";
    if (std::holds_alternative<FunEquation>(d.node)) return "FunEquation";
    if (std::holds_alternative<AxiomDecl>(d.node)) return "Axiom";
    return "Lemma";
}

} // namespace detail

inline MatchOutcome match_decl(const Decl& b, const Decl& s, SpanPair st) {
    st = st.at(b.span, s.span);
    if (b.node.index() != s.node.index())
        return detail::fail_roots(st, "Declaration", detail::decl_root(b), detail::decl_root(s));
    if (const auto* data = std::get_if<DataDecl>(&b.node)) {
        const auto& sd = std::get<DataDecl>(s.node);
        if (data->name != sd.name)
            return detail::fail_roots(st, "Name", "'" + data->name + "'", "'" + sd.name + "'");
        if (data->params != sd.params || data->ctors.size() != sd.ctors.size())
            return detail::fail_msg(st, "data declarations for '" + data->name + "' differ");
        for (size_t i = 0; i < data->ctors.size(); ++i) {
            SpanPair here = st.at(data->ctors[i].span, sd.ctors[i].span);
            if (data->ctors[i].name != sd.ctors[i].name)
                return detail::fail_roots(here, "Name", "'" + data->ctors[i].name + "'",
                                          "'" + sd.ctors[i].name + "'");
            if (data->ctors[i].args.size() != sd.ctors[i].args.size())
                return detail::fail_msg(here, "constructor '" + data->ctors[i].name +
                                                  "' has different arities");
            for (size_t j = 0; j < data->ctors[i].args.size(); ++j) {
                MatchOutcome r = match_type(data->ctors[i].args[j], sd.ctors[i].args[j], here);
                if (!r.succeeded()) return r;
            }
        }
        return MatchOutcome::ok();
    }
    if (const auto* sig = std::get_if<SigDecl>(&b.node)) {
        const auto& ss = std::get<SigDecl>(s.node);
        if (sig->name != ss.name)
            return detail::fail_roots(st, "Name", "'" + sig->name + "'", "'" + ss.name + "'");
        return match_type(sig->type, ss.type, st);
    }
    if (const auto* eq = std::get_if<FunEquation>(&b.node)) {
        const auto& se = std::get<FunEquation>(s.node);
        if (eq->fname != se.fname)
            return detail::fail_roots(st.at(eq->fname_span, se.fname_span), "Name",
                                      "'" + eq->fname + "'", "'" + se.fname + "'");
        if (eq->patterns.size() != se.patterns.size())
            return detail::fail_msg(st, "equations for '" + eq->fname + "' have different arities");
        for (size_t i = 0; i < eq->patterns.size(); ++i) {
            MatchOutcome r = match_term(eq->patterns[i], se.patterns[i], st);
            if (!r.succeeded()) return r;
        }
        return match_term(eq->rhs, se.rhs, st);
    }
    if (const auto* ax = std::get_if<AxiomDecl>(&b.node)) {
        const auto& sa = std::get<AxiomDecl>(s.node);
        if (ax->name != sa.name)
            return detail::fail_roots(st, "Name", "'" + ax->name + "'", "'" + sa.name + "'");
        return match_prop(ax->prop, sa.prop, st);
    }
    const auto& lb = std::get<LemmaDecl>(b.node);
    const auto& ls = std::get<LemmaDecl>(s.node);
    if (lb.name != ls.name)
        return detail::fail_roots(st, "Name", "'" + lb.name.value_or("<anonymous>") + "'",
                                  "'" + ls.name.value_or("<anonymous>") + "'");
    MatchOutcome r = match_prop(lb.prop, ls.prop, st);
    if (!r.succeeded()) return r;
    return match_proof(lb.proof, ls.proof, st);
}

// Succeeds iff the solution is obtainable from the blueprint by replacing
// holes; returns the solution for downstream checking, raises the match
// diagnostic otherwise.
inline Module match_module(const Module& blueprint, const Module& solution) {
    SpanPair st;
    MatchOutcome r = detail::match_list(
        detail::interleave(blueprint.decls, blueprint.gaps),
        detail::interleave(solution.decls, solution.gaps), st, "declaration",
        [&](const Decl& b, const Decl& s) { return match_decl(b, s, st); });
    if (r.failed()) throw DiagnosticError(*r.diag);
    if (!r.succeeded())
        throw DiagnosticError(Diagnostic{Phase::Match, "blueprint matching declined", {}});
    return solution;
}

} // namespace cyp
