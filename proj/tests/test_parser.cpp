#include <catch2/catch_amalgamated.hpp>

#include "testutil.hpp"

using namespace cyp;
using testutil::Rng;

namespace {

template <typename T>
size_t count_decls(const Module& m) {
    size_t n = 0;
    for (const Decl& d : m.decls)
        if (std::holds_alternative<T>(d.node)) ++n;
    return n;
}

const char* kIntroProgram =
    "data N = Z | S N\n"
    "\n"
    "doubleN :: N -> N\n"
    "doubleN Z = Z\n"
    "doubleN (S x) = S (S (doubleN x))\n"
    "\n"
    "data B = Zero | Even B | Odd B\n"
    "\n"
    "value :: B -> N\n"
    "value Zero = Z\n"
    "value (Even x) = doubleN (value x)\n"
    "value (Odd x) = S (doubleN (value x))  -- P\n"
    "\n"
    "succB :: B -> B\n";

} // namespace

TEST_CASE("parse_module splits the intro program into its declarations") {
    Module m = parse_module(kIntroProgram, "intro.cyp");
    CHECK(count_decls<DataDecl>(m) == 2);
    CHECK(count_decls<SigDecl>(m) == 3);
    CHECK(count_decls<FunEquation>(m) == 5);
}

TEST_CASE("parse_module accepts empty input") {
    Module m = parse_module("", "empty.cyp");
    CHECK(m.decls.empty());
    CHECK(m.gaps.empty());
}

TEST_CASE("semicolons separate equations on one line") {
    Module m = parse_module("xor :: Bool -> Bool -> Bool\n"
                            "xor False False = False  ; xor False True  = True\n",
                            "xor.cyp");
    REQUIRE(count_decls<FunEquation>(m) == 2);
    const auto& second = std::get<FunEquation>(m.decls[2].node);
    CHECK(second.patterns.size() == 2);
    CHECK(term_equal(second.rhs, free_name("True")));
}

TEST_CASE("parse_term builds curried application trees") {
    TermPtr t = parse_term("S (S (doubleN x))");
    // App(S, App(S, App(doubleN, x)))
    REQUIRE(t->kind == TermKind::App);
    CHECK(t->fun->name == "S");
    REQUIRE(t->arg->kind == TermKind::App);
    CHECK(t->arg->fun->name == "S");
    REQUIRE(t->arg->arg->kind == TermKind::App);
    CHECK(t->arg->arg->fun->name == "doubleN");
    CHECK(t->arg->arg->arg->name == "x");

    CHECK(parse_term("_")->kind == TermKind::Hole);

    // left spine of depth 4 from the group example
    TermPtr big = parse_term("times (times x (times (times y y) x)) (times y x)");
    int depth = 0;
    for (TermPtr walk = big; walk->kind == TermKind::App; walk = walk->arg) ++depth;
    CHECK(depth == 4);
    CHECK(testutil::term_size(big) == 15);
}

TEST_CASE("parse_term rejects dangling tokens") {
    CHECK_THROWS_AS(parse_term("S x ("), DiagnosticError);
    try {
        parse_term("x .=. y");
    } catch (const DiagnosticError& e) {
        CHECK(e.diag().message.find("dangling") != std::string::npos);
        REQUIRE_FALSE(e.diag().spans.empty());
    }
}

TEST_CASE("terms stop at end of line") {
    // the second line is a new declaration, not an argument of the first rhs
    Module m = parse_module("f :: N -> N\ng :: N\nf x = g\ng = Z\n", "eol.cyp");
    CHECK(count_decls<FunEquation>(m) == 2);
    CHECK_THROWS_AS(parse_module("f :: N -> N\nf x = (g\n      h)\n", "eol2.cyp"),
                    DiagnosticError);
}

TEST_CASE("missing QED is reported at the end of the proof") {
    try {
        parse_module("Lemma l: forall x :: N: x .=. x\nProof by rewriting\n  x\n", "noqed.cyp");
        FAIL("expected a diagnostic");
    } catch (const DiagnosticError& e) {
        CHECK(e.diag().message.find("QED") != std::string::npos);
        REQUIRE_FALSE(e.diag().spans.empty());
    }
}

TEST_CASE("resolve_names distinguishes globals from binders") {
    // e is global (declared), x is a binder
    Module m = resolve_names(parse_module("e :: T\n"
                                          "times :: T -> T -> T\n"
                                          "axiom neutral_right: forall x :: T : times x e .=. x\n",
                                          "ax.cyp"));
    const auto& ax = std::get<AxiomDecl>(m.decls[2].node);
    const TermPtr& lhs = ax.prop.lhs;  // times x e
    CHECK(lhs->fun->arg->kind == TermKind::SchematicVar);
    CHECK(lhs->arg->kind == TermKind::Const);
    CHECK(lhs->arg->name == "e");
    CHECK(ax.prop.rhs->kind == TermKind::SchematicVar);
}

TEST_CASE("resolve_names makes both binder occurrences schematic") {
    Module m = resolve_names(parse_module("data N = Z | S N\n"
                                          "plus :: N -> N -> N\n"
                                          "axiom a1: forall x :: N: plus x Z .=. x\n",
                                          "b.cyp"));
    const auto& ax = std::get<AxiomDecl>(m.decls[2].node);
    CHECK(ax.prop.lhs->fun->arg->kind == TermKind::SchematicVar);
    CHECK(ax.prop.rhs->kind == TermKind::SchematicVar);
}

TEST_CASE("resolve_names rejects unknown names") {
    CHECK_THROWS_AS(resolve_names(parse_module("data N = Z | S N\n"
                                               "f :: N\n"
                                               "f = q\n",
                                               "u.cyp")),
                    DiagnosticError);
    try {
        resolve_names(parse_module("Lemma l: forall x :: N: x .=. q\nProof ... QED\n", "u2.cyp"));
        FAIL("expected a diagnostic");
    } catch (const DiagnosticError& e) {
        CHECK(e.diag().message.find("undefined name 'q'") != std::string::npos);
        REQUIRE_FALSE(e.diag().spans.empty());
    }
}

TEST_CASE("resolve_names rejects duplicate binders and signatures") {
    CHECK_THROWS_AS(
        resolve_names(parse_module("data N = Z\naxiom a: forall x :: N, x :: N: x .=. x\n", "d.cyp")),
        DiagnosticError);
    CHECK_THROWS_AS(resolve_names(parse_module("f :: N\nf :: N\n", "d2.cyp")), DiagnosticError);
}

TEST_CASE("anonymous lemmas are auto-named in order") {
    Module m = resolve_names(parse_module("data N = Z\n"
                                          "Lemma : forall x :: N: x .=. x\nProof ... QED\n"
                                          "Lemma : forall x :: N: x .=. x\nProof ... QED\n",
                                          "anon.cyp"));
    CHECK(std::get<LemmaDecl>(m.decls[1].node).name == "lemma_1");
    CHECK(std::get<LemmaDecl>(m.decls[2].node).name == "lemma_2");
}

TEST_CASE("declaration spans re-lex to the original token stream") {
    for (const char* name :
         {"succ_solved.cyp", "xor_sym.cyp", "group_chain.cyp", "symdiff_sym.cyp", "succ.byp"}) {
        std::string text = testutil::read_corpus(name);
        Module m = parse_module(text, name);

        auto texts = [](const std::vector<lex::Token>& ts) {
            std::vector<std::string> out;
            for (const auto& t : ts)
                if (t.kind != lex::Tok::End) out.push_back(t.text);
            return out;
        };
        std::vector<std::string> whole = texts(lex::tokenize(text, name));

        std::vector<std::string> stitched;
        size_t g = 0;
        for (size_t i = 0; i <= m.decls.size(); ++i) {
            while (g < m.gaps.size() && m.gaps[g].index == i) {
                stitched.push_back("...");
                ++g;
            }
            if (i == m.decls.size()) break;
            REQUIRE(m.decls[i].span.has_value());
            for (auto& tok : texts(lex::tokenize(source_slice(text, *m.decls[i].span), name)))
                stitched.push_back(tok);
        }
        CHECK(stitched == whole);
    }
}

namespace {

// Random module generator covering the grammar; names avoid keywords.
Module gen_module(Rng& rng) {
    Module m;
    auto ty = [&](auto&& self, int depth) -> TypePtr {
        switch (rng.below(depth <= 0 ? 2 : 4)) {
            case 0: return tcon("N");
            case 1: return tvar("a");
            case 2: return tfun(self(self, depth - 1), self(self, depth - 1));
            default: return tcon("Box", {self(self, depth - 1)});
        }
    };
    auto term = [&](int budget) { return testutil::gen_rule_side(rng, budget, {"x", "y"}); };
    auto prop = [&]() {
        Prop p;
        if (rng.chance(70)) {
            p.binders.push_back(Binder{"x", ty(ty, 1), {}});
            if (rng.chance(40)) p.binders.push_back(Binder{"y", ty(ty, 1), {}});
        }
        p.lhs = term(7);
        p.rhs = term(7);
        return p;
    };
    auto chain = [&]() {
        Chain c;
        c.first = term(7);
        int steps = rng.below(4);
        for (int i = 0; i < steps; ++i) {
            Link l;
            switch (rng.below(4)) {
                case 0: l = Link{LinkKind::ByDef, "f1", {}, {}}; break;
                case 1: l = Link{LinkKind::ByRule, "ax1", {}, {}}; break;
                case 2: l = Link{LinkKind::ByHole, {}, {}, {}}; break;
                default: l = Link{LinkKind::Ellipsis, {}, {}, {}}; break;
            }
            c.steps.push_back(ChainStep{l, term(7)});
        }
        return c;
    };
    auto proof = [&](auto&& self, int depth) -> ProofPtr {
        int pick = depth <= 0 ? (rng.chance(60) ? 0 : 1) : rng.below(5);
        switch (pick) {
            case 1:
                return make_proof(Proof{ProofRewriting{chain()}, {}});
            case 2: {
                ProofExtensionality e{"w", {}, ty(ty, 1), prop(), self(self, depth - 1)};
                return make_proof(Proof{std::move(e), {}});
            }
            case 3: {
                ProofCaseAnalysis c{term(3), tcon("N"), {}, {}};
                int cases = rng.below(3);
                for (int i = 0; i < cases; ++i)
                    c.cases.push_back(CaseEntry{app(constant("C"), free_name("v" + std::to_string(i))),
                                                "AS" + std::to_string(i),
                                                {},
                                                prop(),
                                                self(self, depth - 1),
                                                {}});
                if (rng.chance(40)) c.gaps.push_back(Gap{c.cases.size(), Span{}});
                return make_proof(Proof{std::move(c), {}});
            }
            case 4: {
                ProofInduction ind{"x", {}, tcon("N"), {}, {}, {}};
                if (rng.chance(40)) ind.generalizing.push_back(Binder{"y", tcon("N"), {}});
                int cases = rng.below(3);
                for (int i = 0; i < cases; ++i) {
                    IndCase ic;
                    ic.pattern = app(constant("C"), free_name("v" + std::to_string(i)));
                    if (rng.chance(50))
                        ic.fixes.push_back(Binder{"v" + std::to_string(i), tcon("N"), {}});
                    if (rng.chance(50)) {
                        ic.hypotheses.emplace_back("IH", prop());
                        ic.hypothesis_spans.push_back(MaybeSpan{});
                    }
                    if (rng.chance(40)) ic.refixed = std::vector<Binder>{Binder{"y", tcon("N"), {}}};
                    ic.shown = prop();
                    ic.sub = self(self, depth - 1);
                    ind.cases.push_back(std::move(ic));
                }
                if (rng.chance(40)) ind.gaps.push_back(Gap{ind.cases.size(), Span{}});
                return make_proof(Proof{std::move(ind), {}});
            }
            default:
                return make_proof(Proof{ProofHole{Span{}}, {}});
        }
    };

    int decls = 1 + rng.below(6);
    for (int i = 0; i < decls; ++i) {
        Decl d;
        switch (rng.below(5)) {
            case 0: {
                DataDecl data{"D" + std::to_string(i), {}, {}};
                if (rng.chance(40)) data.params.push_back("a");
                data.ctors.push_back(ConDecl{"K" + std::to_string(i), {}, {}});
                if (rng.chance(60))
                    data.ctors.push_back(
                        ConDecl{"L" + std::to_string(i), {tcon("N"), ty(ty, 1)}, {}});
                d.node = std::move(data);
                break;
            }
            case 1:
                d.node = SigDecl{"f" + std::to_string(i), ty(ty, 2)};
                break;
            case 2: {
                FunEquation eq{"f" + std::to_string(i), {}, {}, term(6)};
                if (rng.chance(70)) eq.patterns.push_back(free_name("x"));
                if (rng.chance(40))
                    eq.patterns.push_back(app(free_name("K0"), free_name("y")));
                d.node = std::move(eq);
                break;
            }
            case 3:
                d.node = AxiomDecl{"ax" + std::to_string(i), prop()};
                break;
            default: {
                LemmaDecl lem;
                if (rng.chance(60)) lem.name = "lem" + std::to_string(i);
                lem.prop = prop();
                lem.proof = proof(proof, 2);
                d.node = std::move(lem);
                break;
            }
        }
        m.decls.push_back(std::move(d));
        if (rng.chance(15)) m.gaps.push_back(Gap{m.decls.size(), Span{}});
    }
    return m;
}

} // namespace

TEST_CASE("rendered generated modules parse back to the same tree") {
    Rng rng(2024);
    for (int i = 0; i < 150; ++i) {
        Module gen = gen_module(rng);
        std::string text = testutil::render_module(gen);
        INFO(text);
        Module parsed = parse_module(text, "gen.cyp");
        CHECK(testutil::render_module(parsed) == text);
    }
}

TEST_CASE("every parse diagnostic points into the input") {
    const char* bad[] = {
        "data n = Z\n",                         // lowercase datatype name
        "f x = \n",                             // missing rhs
        "axiom a: x .=. \n",                    // missing rhs term
        "Lemma l: forall x :: N x .=. x\n",     // missing colon
        "Lemma l: x .=. x\nProof by magic\nQED\n",
        "f :: N -> \n",
        "data N = Z |\n",
        "_f :: N\n",
        "Lemma l: x .=. x\nProof by rewriting\n x\n (by def) .=. x\nQED\n",
    };
    for (const char* src : bad) {
        try {
            parse_module(src, "bad.cyp");
            FAIL_CHECK("accepted: " << src);
        } catch (const DiagnosticError& e) {
            REQUIRE_FALSE(e.diag().spans.empty());
            const Span& s = e.diag().spans.front();
            CHECK(s.begin.line >= 1);
            CHECK(s.begin.column >= 1);
        }
    }
}
