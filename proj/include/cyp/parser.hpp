#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "cyp/diagnostics.hpp"
#include "cyp/syntax.hpp"

namespace cyp {

// Hand-written parser for .cyp/.byp modules. The grammar is layout
// insensitive except for one rule inherited from the file format: a term
// (and a type) never crosses the line it starts on. `--` comments to end of
// line, `;` separates declarations within a line. The first syntax error
// aborts the parse.

namespace lex {

enum class Tok {
    LIdent, UIdent, Hole, Ellipsis,
    Equals, PropEq, DblColon, Colon, Arrow, Pipe,
    LParen, RParen, Comma, Semi,
    KwData, KwAxiom, KwForall, KwBy, KwDef,
    KwRewriting, KwExtensionality, KwWith,
    KwCase, KwAnalysis, KwOn, KwInduction, KwGeneralizing,
    KwForLower, KwFixed,
    KwLemma, KwProof, KwQed, KwCaseU, KwAssume, KwThen, KwShow, KwFix, KwForUpper,
    End
};

struct Token {
    Tok kind;
    std::string text;
    Span span;
};

inline const char* tok_label(Tok k) {
    switch (k) {
        case Tok::LIdent: return "identifier";
        case Tok::UIdent: return "constructor name";
        case Tok::Hole: return "'_'";
        case Tok::Ellipsis: return "'...'";
        case Tok::Equals: return "'='";
        case Tok::PropEq: return "'.=.'";
        case Tok::DblColon: return "'::'";
        case Tok::Colon: return "':'";
        case Tok::Arrow: return "'->'";
        case Tok::Pipe: return "'|'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Comma: return "','";
        case Tok::Semi: return "';'";
        case Tok::KwData: return "'data'";
        case Tok::KwAxiom: return "'axiom'";
        case Tok::KwForall: return "'forall'";
        case Tok::KwBy: return "'by'";
        case Tok::KwDef: return "'def'";
        case Tok::KwRewriting: return "'rewriting'";
        case Tok::KwExtensionality: return "'extensionality'";
        case Tok::KwWith: return "'with'";
        case Tok::KwCase: return "'case'";
        case Tok::KwAnalysis: return "'analysis'";
        case Tok::KwOn: return "'on'";
        case Tok::KwInduction: return "'induction'";
        case Tok::KwGeneralizing: return "'generalizing'";
        case Tok::KwForLower: return "'for'";
        case Tok::KwFixed: return "'fixed'";
        case Tok::KwLemma: return "'Lemma'";
        case Tok::KwProof: return "'Proof'";
        case Tok::KwQed: return "'QED'";
        case Tok::KwCaseU: return "'Case'";
        case Tok::KwAssume: return "'Assume'";
        case Tok::KwThen: return "'Then'";
        case Tok::KwShow: return "'Show'";
        case Tok::KwFix: return "'Fix'";
        case Tok::KwForUpper: return "'For'";
        case Tok::End: return "end of input";
    }
    return "?";
}

inline Tok keyword_kind(const std::string& word, bool upper) {
    if (upper) {
        if (word == "Lemma") return Tok::KwLemma;
        if (word == "Proof") return Tok::KwProof;
        if (word == "QED") return Tok::KwQed;
        if (word == "Case") return Tok::KwCaseU;
        if (word == "Assume") return Tok::KwAssume;
        if (word == "Then") return Tok::KwThen;
        if (word == "Show") return Tok::KwShow;
        if (word == "Fix") return Tok::KwFix;
        if (word == "For") return Tok::KwForUpper;
        return Tok::UIdent;
    }
    if (word == "data") return Tok::KwData;
    if (word == "axiom") return Tok::KwAxiom;
    if (word == "forall") return Tok::KwForall;
    if (word == "by") return Tok::KwBy;
    if (word == "def") return Tok::KwDef;
    if (word == "rewriting") return Tok::KwRewriting;
    if (word == "extensionality") return Tok::KwExtensionality;
    if (word == "with") return Tok::KwWith;
    if (word == "case") return Tok::KwCase;
    if (word == "analysis") return Tok::KwAnalysis;
    if (word == "on") return Tok::KwOn;
    if (word == "induction") return Tok::KwInduction;
    if (word == "generalizing") return Tok::KwGeneralizing;
    if (word == "for") return Tok::KwForLower;
    if (word == "fixed") return Tok::KwFixed;
    return Tok::LIdent;
}

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
inline bool ident_cont(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

inline std::vector<Token> tokenize(std::string_view src, const std::string& file) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto pos = [&]() { return SourcePos{line, col}; };
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto push = [&](Tok kind, size_t len) {
        SourcePos b = pos();
        std::string text(src.substr(i, len));
        advance(len);
        out.push_back(Token{kind, std::move(text), Span{file, b, pos()}});
    };

    while (i < src.size()) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (src.substr(i, 3) == ".=.") {
            push(Tok::PropEq, 3);
            continue;
        }
        if (src.substr(i, 3) == "...") {
            push(Tok::Ellipsis, 3);
            continue;
        }
        if (src.substr(i, 2) == "::") {
            push(Tok::DblColon, 2);
            continue;
        }
        if (src.substr(i, 2) == "->") {
            push(Tok::Arrow, 2);
            continue;
        }
        switch (c) {
            case ':': push(Tok::Colon, 1); continue;
            case '=': push(Tok::Equals, 1); continue;
            case '|': push(Tok::Pipe, 1); continue;
            case '(': push(Tok::LParen, 1); continue;
            case ')': push(Tok::RParen, 1); continue;
            case ',': push(Tok::Comma, 1); continue;
            case ';': push(Tok::Semi, 1); continue;
            default: break;
        }
        if (c == '_') {
            if (i + 1 < src.size() && ident_cont(src[i + 1])) {
                SourcePos b = pos();
                raise(Phase::Parse, "identifiers must start with a letter",
                      {Span{file, b, SourcePos{b.line, b.column + 1}}});
            }
            push(Tok::Hole, 1);
            continue;
        }
        if (ident_start(c)) {
            size_t len = 1;
            while (i + len < src.size() && ident_cont(src[i + len])) ++len;
            std::string word(src.substr(i, len));
            bool upper = std::isupper(static_cast<unsigned char>(c)) != 0;
            push(keyword_kind(word, upper), len);
            continue;
        }
        SourcePos b = pos();
        raise(Phase::Parse, std::string("unexpected character '") + c + "'",
              {Span{file, b, SourcePos{b.line, b.column + 1}}});
    }
    SourcePos e = pos();
    out.push_back(Token{Tok::End, "", Span{file, e, e}});
    return out;
}

} // namespace lex

namespace detail {

class Parser {
public:
    Parser(std::string_view src, std::string file)
        : file_(std::move(file)), toks_(lex::tokenize(src, file_)) {}

    Module module() {
        Module m;
        m.file = file_;
        while (!at(lex::Tok::End)) {
            if (accept(lex::Tok::Semi)) continue;
            if (at(lex::Tok::Ellipsis)) {
                m.gaps.push_back(Gap{m.decls.size(), peek().span});
                next();
                continue;
            }
            m.decls.push_back(decl());
        }
        return m;
    }

    TermPtr single_term() {
        TermPtr t = term_to_eol();
        if (!at(lex::Tok::End))
            raise(Phase::Parse, "dangling tokens after the expression", {peek().span});
        return t;
    }

private:
    std::string file_;
    std::vector<lex::Token> toks_;
    size_t pos_ = 0;

    const lex::Token& peek(size_t ahead = 0) const {
        size_t k = pos_ + ahead;
        return k < toks_.size() ? toks_[k] : toks_.back();
    }
    bool at(lex::Tok k) const { return peek().kind == k; }
    const lex::Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool accept(lex::Tok k) {
        if (!at(k)) return false;
        next();
        return true;
    }
    const lex::Token& expect(lex::Tok k, const char* where) {
        if (!at(k)) err(std::string("expected ") + lex::tok_label(k) + " in " + where);
        return next();
    }
    [[noreturn]] void err(std::string msg) const { raise(Phase::Parse, std::move(msg), {peek().span}); }

    static bool atom_start(lex::Tok k) {
        return k == lex::Tok::LIdent || k == lex::Tok::UIdent || k == lex::Tok::Hole ||
               k == lex::Tok::LParen;
    }

    // ---- terms: all tokens of a term sit on the line it starts on ----

    TermPtr term_to_eol() {
        if (!atom_start(peek().kind)) err("expected expression");
        int line = peek().span.begin.line;
        TermPtr acc = atom(line);
        while (atom_start(peek().kind) && peek().span.begin.line == line)
            acc = app(acc, atom(line));
        return acc;
    }

    TermPtr atom(int line) {
        const lex::Token& t = peek();
        if (t.span.begin.line != line) err("expression continues past end of line");
        switch (t.kind) {
            case lex::Tok::LIdent:
            case lex::Tok::UIdent: {
                next();
                return free_name(t.text, t.span);
            }
            case lex::Tok::Hole: {
                next();
                return hole(t.span);
            }
            case lex::Tok::LParen: {
                Span open = t.span;
                next();
                if (!atom_start(peek().kind)) err("expected expression after '('");
                TermPtr inner = atom(line);
                while (atom_start(peek().kind) && peek().span.begin.line == line)
                    inner = app(inner, atom(line));
                if (!at(lex::Tok::RParen) || peek().span.begin.line != line)
                    err("expected ')' before end of line");
                Span close = next().span;
                auto t2 = std::make_shared<Term>(*inner);
                t2->span = join(open, close);
                return t2;
            }
            default:
                err("expected expression");
        }
    }

    // ---- types: same one-line discipline ----

    static bool type_atom_start(lex::Tok k) {
        return k == lex::Tok::LIdent || k == lex::Tok::UIdent || k == lex::Tok::LParen;
    }

    TypePtr type_to_eol() {
        if (!type_atom_start(peek().kind)) err("expected type");
        return type(peek().span.begin.line);
    }

    TypePtr type(int line) {
        TypePtr lhs = type_app(line);
        if (at(lex::Tok::Arrow) && peek().span.begin.line == line) {
            Span arrow = next().span;
            TypePtr rhs = type(line);
            return tfun(lhs, rhs, join(join(lhs->span, rhs->span), MaybeSpan{arrow}));
        }
        return lhs;
    }

    TypePtr type_app(int line) {
        const lex::Token& t = peek();
        if (t.span.begin.line != line) err("type continues past end of line");
        if (t.kind == lex::Tok::UIdent) {
            next();
            std::vector<TypePtr> args;
            MaybeSpan span{t.span};
            while (type_atom_start(peek().kind) && peek().span.begin.line == line) {
                TypePtr a = type_atom(line);
                span = join(span, a->span);
                args.push_back(std::move(a));
            }
            return tcon(t.text, std::move(args), span);
        }
        return type_atom(line);
    }

    TypePtr type_atom(int line) {
        const lex::Token& t = peek();
        if (t.span.begin.line != line) err("type continues past end of line");
        switch (t.kind) {
            case lex::Tok::UIdent:
                next();
                return tcon(t.text, {}, t.span);
            case lex::Tok::LIdent:
                next();
                return tvar(t.text, t.span);
            case lex::Tok::LParen: {
                Span open = next().span;
                TypePtr inner = type(line);
                if (!at(lex::Tok::RParen) || peek().span.begin.line != line)
                    err("expected ')' in type before end of line");
                Span close = next().span;
                auto t2 = std::make_shared<Type>(*inner);
                t2->span = join(open, close);
                return t2;
            }
            default:
                err("expected type");
        }
    }

    // ---- declarations ----

    Decl decl() {
        switch (peek().kind) {
            case lex::Tok::KwData: return data_decl();
            case lex::Tok::KwAxiom: return axiom_decl();
            case lex::Tok::KwLemma: return lemma_decl();
            case lex::Tok::LIdent:
                if (peek(1).kind == lex::Tok::DblColon) return sig_decl();
                return fun_equation();
            default:
                err("expected declaration");
        }
    }

    Decl data_decl() {
        Span start = expect(lex::Tok::KwData, "data declaration").span;
        const lex::Token& name = expect(lex::Tok::UIdent, "data declaration");
        std::vector<std::string> params;
        while (at(lex::Tok::LIdent)) params.push_back(next().text);
        expect(lex::Tok::Equals, "data declaration");
        std::vector<ConDecl> ctors;
        Span end = name.span;
        while (true) {
            const lex::Token& cname = expect(lex::Tok::UIdent, "constructor declaration");
            int line = cname.span.begin.line;
            std::vector<TypePtr> args;
            Span cend = cname.span;
            while (type_atom_start(peek().kind) && peek().span.begin.line == line) {
                TypePtr a = type_atom(line);
                if (a->span) cend = *a->span;
                args.push_back(std::move(a));
            }
            ctors.push_back(ConDecl{cname.text, std::move(args), join(cname.span, cend)});
            end = cend;
            if (!accept(lex::Tok::Pipe)) break;
        }
        return Decl{DataDecl{name.text, std::move(params), std::move(ctors)}, join(start, end)};
    }

    Decl sig_decl() {
        const lex::Token& name = expect(lex::Tok::LIdent, "signature");
        expect(lex::Tok::DblColon, "signature");
        TypePtr ty = type_to_eol();
        MaybeSpan span = join(MaybeSpan{name.span}, ty->span);
        return Decl{SigDecl{name.text, std::move(ty)}, span};
    }

    Decl fun_equation() {
        const lex::Token& head = expect(lex::Tok::LIdent, "function equation");
        int line = head.span.begin.line;
        std::vector<TermPtr> patterns;
        while (!at(lex::Tok::Equals)) {
            if (peek().span.begin.line != line)
                err("expected '=' in function equation before end of line");
            patterns.push_back(pattern_atom(line));
        }
        expect(lex::Tok::Equals, "function equation");
        TermPtr rhs = term_to_eol();
        MaybeSpan span = join(MaybeSpan{head.span}, rhs->span);
        return Decl{FunEquation{head.text, head.span, std::move(patterns), std::move(rhs)}, span};
    }

    TermPtr pattern_atom(int line) {
        const lex::Token& t = peek();
        if (t.span.begin.line != line) err("pattern continues past end of line");
        switch (t.kind) {
            case lex::Tok::LIdent:
            case lex::Tok::UIdent:
                next();
                return free_name(t.text, t.span);
            case lex::Tok::LParen: {
                Span open = next().span;
                const lex::Token& head = peek();
                if (head.kind != lex::Tok::UIdent)
                    err("expected constructor inside pattern parentheses");
                next();
                TermPtr acc = free_name(head.text, head.span);
                while (!at(lex::Tok::RParen)) {
                    if (peek().span.begin.line != line) err("expected ')' in pattern");
                    acc = app(acc, pattern_atom(line));
                }
                Span close = next().span;
                auto t2 = std::make_shared<Term>(*acc);
                t2->span = join(open, close);
                return t2;
            }
            default:
                err("expected pattern");
        }
    }

    std::vector<Binder> binder_list(const char* where) {
        std::vector<Binder> out;
        do {
            const lex::Token& name = expect(lex::Tok::LIdent, where);
            expect(lex::Tok::DblColon, where);
            TypePtr ty = type_to_eol();
            MaybeSpan span = join(MaybeSpan{name.span}, ty->span);
            out.push_back(Binder{name.text, std::move(ty), span});
        } while (accept(lex::Tok::Comma));
        return out;
    }

    Prop prop(const char* where) {
        std::vector<Binder> binders;
        MaybeSpan start;
        if (at(lex::Tok::KwForall)) {
            start = peek().span;
            next();
            binders = binder_list(where);
            expect(lex::Tok::Colon, where);
        }
        TermPtr lhs = term_to_eol();
        expect(lex::Tok::PropEq, where);
        TermPtr rhs = term_to_eol();
        MaybeSpan span = join(join(start, lhs->span), rhs->span);
        return Prop{std::move(binders), std::move(lhs), std::move(rhs), span};
    }

    Decl axiom_decl() {
        Span start = expect(lex::Tok::KwAxiom, "axiom").span;
        const lex::Token& name = peek();
        if (name.kind != lex::Tok::LIdent && name.kind != lex::Tok::UIdent)
            err("expected axiom name");
        next();
        expect(lex::Tok::Colon, "axiom");
        Prop p = prop("axiom");
        MaybeSpan span = join(MaybeSpan{start}, p.span);
        return Decl{AxiomDecl{name.text, std::move(p)}, span};
    }

    Decl lemma_decl() {
        Span start = expect(lex::Tok::KwLemma, "lemma").span;
        std::optional<std::string> name;
        if (at(lex::Tok::LIdent) || at(lex::Tok::UIdent)) name = next().text;
        expect(lex::Tok::Colon, "lemma");
        Prop p = prop("lemma");
        ProofPtr pf = proof();
        MaybeSpan span = join(MaybeSpan{start}, pf->span);
        return Decl{LemmaDecl{std::move(name), std::move(p), std::move(pf)}, span};
    }

    // ---- proofs ----

    ProofPtr proof() {
        Span start = expect(lex::Tok::KwProof, "proof").span;
        if (at(lex::Tok::Ellipsis)) {
            Span dots = next().span;
            Span end = expect_qed();
            return make_proof(Proof{ProofHole{dots}, join(start, end)});
        }
        expect(lex::Tok::KwBy, "proof");
        switch (peek().kind) {
            case lex::Tok::KwRewriting: {
                next();
                Chain chain;
                chain.first = term_to_eol();
                while (at(lex::Tok::LParen) || at(lex::Tok::Ellipsis)) {
                    Link l = link();
                    expect(lex::Tok::PropEq, "rewrite step");
                    TermPtr t = term_to_eol();
                    chain.steps.push_back(ChainStep{std::move(l), std::move(t)});
                }
                Span end = expect_qed();
                return make_proof(Proof{ProofRewriting{std::move(chain)}, join(start, end)});
            }
            case lex::Tok::KwExtensionality: {
                next();
                expect(lex::Tok::KwWith, "extensionality proof");
                const lex::Token& var = expect(lex::Tok::LIdent, "extensionality proof");
                expect(lex::Tok::DblColon, "extensionality proof");
                TypePtr ty = type_to_eol();
                expect(lex::Tok::KwShow, "extensionality proof");
                expect(lex::Tok::Colon, "extensionality proof");
                Prop shown = prop("Show line");
                ProofPtr sub = proof();
                Span end = expect_qed();
                return make_proof(Proof{
                    ProofExtensionality{var.text, var.span, std::move(ty), std::move(shown), std::move(sub)},
                    join(start, end)});
            }
            case lex::Tok::KwCase: {
                next();
                expect(lex::Tok::KwAnalysis, "case analysis proof");
                expect(lex::Tok::KwOn, "case analysis proof");
                TermPtr scrut = term_to_eol();
                expect(lex::Tok::DblColon, "case analysis proof");
                TypePtr ty = type_to_eol();
                ProofCaseAnalysis pca{std::move(scrut), std::move(ty), {}, {}};
                while (!at(lex::Tok::KwQed)) {
                    if (at(lex::Tok::Ellipsis)) {
                        pca.gaps.push_back(Gap{pca.cases.size(), next().span});
                        continue;
                    }
                    pca.cases.push_back(case_entry());
                }
                Span end = expect_qed();
                return make_proof(Proof{std::move(pca), join(start, end)});
            }
            case lex::Tok::KwInduction: {
                next();
                expect(lex::Tok::KwOn, "induction proof");
                const lex::Token& var = expect(lex::Tok::LIdent, "induction proof");
                expect(lex::Tok::DblColon, "induction proof");
                TypePtr ty = type_to_eol();
                std::vector<Binder> gen;
                if (accept(lex::Tok::KwGeneralizing)) gen = binder_list("generalizing clause");
                ProofInduction pi{var.text, var.span, std::move(ty), std::move(gen), {}, {}};
                while (!at(lex::Tok::KwQed)) {
                    if (at(lex::Tok::Ellipsis)) {
                        pi.gaps.push_back(Gap{pi.cases.size(), next().span});
                        continue;
                    }
                    pi.cases.push_back(ind_case());
                }
                Span end = expect_qed();
                return make_proof(Proof{std::move(pi), join(start, end)});
            }
            default:
                err("expected a proof method (rewriting, extensionality, case analysis, induction)");
        }
    }

    Span expect_qed() {
        if (!at(lex::Tok::KwQed))
            raise(Phase::Parse, "unterminated proof: expected 'QED'", {peek().span});
        return next().span;
    }

    Link link() {
        if (at(lex::Tok::Ellipsis)) {
            Span s = next().span;
            return Link{LinkKind::Ellipsis, {}, s, {}};
        }
        Span open = expect(lex::Tok::LParen, "rewrite step").span;
        expect(lex::Tok::KwBy, "rewrite step");
        Link l;
        if (accept(lex::Tok::KwDef)) {
            const lex::Token& name = peek();
            if (name.kind != lex::Tok::LIdent && name.kind != lex::Tok::UIdent)
                err("expected function name after 'by def'");
            next();
            l = Link{LinkKind::ByDef, name.text, {}, {}};
        } else if (at(lex::Tok::Hole)) {
            Span hs = next().span;
            l = Link{LinkKind::ByHole, {}, {}, hs};
        } else {
            const lex::Token& name = peek();
            if (name.kind != lex::Tok::LIdent && name.kind != lex::Tok::UIdent)
                err("expected rule name after 'by'");
            next();
            l = Link{LinkKind::ByRule, name.text, {}, {}};
        }
        Span close = expect(lex::Tok::RParen, "rewrite step").span;
        l.span = join(open, close);
        return l;
    }

    CaseEntry case_entry() {
        Span start = expect(lex::Tok::KwCaseU, "case").span;
        TermPtr pattern = term_to_eol();
        expect(lex::Tok::KwAssume, "case");
        const lex::Token& name = peek();
        if (name.kind != lex::Tok::LIdent && name.kind != lex::Tok::UIdent)
            err("expected assumption name after 'Assume'");
        next();
        expect(lex::Tok::Colon, "assumption");
        Prop assumption = prop("assumption");
        expect(lex::Tok::KwThen, "case");
        ProofPtr sub = proof();
        MaybeSpan span = join(MaybeSpan{start}, sub->span);
        return CaseEntry{std::move(pattern), name.text, name.span, std::move(assumption),
                         std::move(sub), span};
    }

    IndCase ind_case() {
        Span start = expect(lex::Tok::KwCaseU, "case").span;
        IndCase c;
        c.pattern = term_to_eol();
        if (accept(lex::Tok::KwFix)) c.fixes = binder_list("Fix clause");
        while (at(lex::Tok::KwAssume)) {
            next();
            const lex::Token& name = peek();
            if (name.kind != lex::Tok::LIdent && name.kind != lex::Tok::UIdent)
                err("expected hypothesis name after 'Assume'");
            next();
            expect(lex::Tok::Colon, "hypothesis");
            Prop h = prop("hypothesis");
            c.hypotheses.emplace_back(name.text, std::move(h));
            c.hypothesis_spans.push_back(name.span);
        }
        accept(lex::Tok::KwThen);
        if (at(lex::Tok::KwForUpper) || at(lex::Tok::KwForLower)) {
            next();
            expect(lex::Tok::KwFixed, "for fixed clause");
            c.refixed = binder_list("for fixed clause");
        }
        expect(lex::Tok::KwShow, "induction case");
        expect(lex::Tok::Colon, "induction case");
        c.shown = prop("Show line");
        c.sub = proof();
        c.span = join(MaybeSpan{start}, c.sub->span);
        return c;
    }
};

} // namespace detail

// Parse a whole module. Every node carries the span of its source slice.
inline Module parse_module(std::string_view source, const std::string& filename) {
    detail::Parser p(source, filename);
    return p.module();
}

// Parse one expression; trailing tokens are an error.
inline TermPtr parse_term(std::string_view source, const std::string& filename = "<term>") {
    detail::Parser p(source, filename);
    return p.single_term();
}

} // namespace cyp
