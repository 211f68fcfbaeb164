#include <catch2/catch_amalgamated.hpp>

#include "testutil.hpp"

using namespace cyp;
using testutil::Rng;

namespace {

TermPtr t_Z() { return constant("Z"); }
TermPtr t_S(TermPtr x) { return app(constant("S"), std::move(x)); }

Prop quantified(std::vector<std::pair<std::string, TypePtr>> binders, TermPtr lhs, TermPtr rhs) {
    Prop p;
    for (auto& [n, t] : binders) p.binders.push_back(Binder{n, t, {}});
    p.lhs = std::move(lhs);
    p.rhs = std::move(rhs);
    return p;
}

} // namespace

TEST_CASE("subterm_positions enumerates preorder, root first") {
    auto leaf = subterm_positions(t_Z());
    REQUIRE(leaf.size() == 1);
    CHECK(leaf[0].first.empty());

    // S a
    TermPtr sa = t_S(fixed_var("a"));
    auto ps = subterm_positions(sa);
    REQUIRE(ps.size() == 3);
    CHECK(ps[0].first == Position{});
    CHECK(ps[1].first == Position{0});
    CHECK(ps[1].second->name == "S");
    CHECK(ps[2].first == Position{1});
    CHECK(ps[2].second->name == "a");

    // plus Z y: root, plus Z, plus, Z, y
    TermPtr pzy = app(app(constant("plus"), t_Z()), fixed_var("y"));
    CHECK(subterm_positions(pzy).size() == 5);
}

TEST_CASE("replace_at swaps exactly the addressed subterm") {
    // S a with [1] := plus Z a, the step target of a def-plus rewrite
    TermPtr sa = t_S(fixed_var("a"));
    TermPtr pza = app(app(constant("plus"), t_Z()), fixed_var("a"));
    TermPtr replaced = replace_at(sa, {1}, pza);
    CHECK(term_equal(replaced, t_S(pza)));

    // root replacement
    CHECK(term_equal(replace_at(sa, {}, t_Z()), t_Z()));

    // path into the curried spine: plus Z y -> plus x y
    TermPtr pzy = app(app(constant("plus"), t_Z()), fixed_var("y"));
    TermPtr pxy = app(app(constant("plus"), fixed_var("x")), fixed_var("y"));
    CHECK(term_equal(replace_at(pzy, {0, 1}, fixed_var("x")), pxy));
}

TEST_CASE("replace_at round trip over random terms") {
    Rng rng(101);
    for (int i = 0; i < 200; ++i) {
        TermPtr t = testutil::gen_ground(rng, 11);
        auto positions = subterm_positions(t);
        const Position p = positions[static_cast<size_t>(rng.below(static_cast<int>(positions.size())))].first;
        TermPtr s = testutil::gen_ground(rng, 5);
        TermPtr r = replace_at(t, p, s);
        CHECK(term_equal(subterm_at(r, p), s));
        // outside the subtree at p (and off p's spine) nothing changed
        for (const auto& [q, sub] : subterm_positions(t)) {
            bool under_p = q.size() >= p.size() && std::equal(p.begin(), p.end(), q.begin());
            bool on_spine = q.size() < p.size() && std::equal(q.begin(), q.end(), p.begin());
            if (under_p || on_spine) continue;
            CHECK(term_equal(subterm_at(r, q), sub));
        }
    }
}

TEST_CASE("substitute replaces schematic variables simultaneously") {
    // times x x under {x -> e}
    TermPtr txx = app(app(constant("times"), schematic_var("x")), schematic_var("x"));
    TermPtr e = constant("e");
    TermPtr r = substitute(txx, {{"x", e}});
    CHECK(term_equal(r, app(app(constant("times"), e), e)));

    TermPtr t = app(constant("S"), schematic_var("q"));
    CHECK(substitute(t, {}) == t);

    // plus x (S y) under {x -> Z, y -> x}: the x in the result is the image
    TermPtr body =
        app(app(constant("plus"), schematic_var("x")), app(constant("S"), schematic_var("y")));
    TermPtr image_x = fixed_var("x");
    TermPtr out = substitute(body, {{"x", t_Z()}, {"y", image_x}});
    TermPtr expect = app(app(constant("plus"), t_Z()), app(constant("S"), image_x));
    CHECK(term_equal(out, expect));

    // fixed variables are never substituted
    TermPtr fx = fixed_var("x");
    CHECK(term_equal(substitute(fx, {{"x", t_Z()}}), fx));
}

TEST_CASE("substitute is a homomorphism over application") {
    Rng rng(77);
    for (int i = 0; i < 100; ++i) {
        TermPtr f = testutil::gen_rule_side(rng, 7, {"x", "y"});
        TermPtr a = testutil::gen_rule_side(rng, 7, {"x", "y"});
        Substitution sigma{{"x", testutil::gen_ground(rng, 5)},
                           {"y", testutil::gen_ground(rng, 5)}};
        CHECK(term_equal(substitute(app(f, a), sigma),
                         app(substitute(f, sigma), substitute(a, sigma))));
    }
}

TEST_CASE("hole_match excuses whole subtrees under a hole") {
    TermPtr yx = app(app(constant("times"), fixed_var("y")), fixed_var("x"));
    TermPtr big = app(app(constant("times"), yx), yx);
    CHECK(hole_match(hole(), big));
    CHECK(hole_match(big, big));
    CHECK_FALSE(hole_match(app(constant("S"), hole()), constant("Z")));
}

TEST_CASE("hole_match is reflexive and symmetric; a hole matches everything") {
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        TermPtr a = testutil::gen_ground(rng, 9);
        TermPtr b = testutil::gen_ground(rng, 9);
        CHECK(hole_match(a, a));
        CHECK(hole_match(a, b) == hole_match(b, a));
        CHECK(hole_match(hole(), a));
        // poke a hole somewhere in a; the holey term still matches a
        auto ps = subterm_positions(a);
        TermPtr holey = replace_at(
            a, ps[static_cast<size_t>(rng.below(static_cast<int>(ps.size())))].first, hole());
        CHECK(hole_match(holey, a));
    }
}

TEST_CASE("alpha_equal renames binders but not fixed names or mono types") {
    TypePtr N = tcon("N");
    auto sym = [&](const std::string& v) {
        return quantified({{v, N}},
                          app(app(constant("symdiff"), fixed_var("x")), schematic_var(v)),
                          app(app(constant("symdiff"), schematic_var(v)), fixed_var("x")));
    };
    CHECK(alpha_equal(sym("y"), sym("z")));

    Prop p = sym("y");
    CHECK(alpha_equal(p, p));

    // monomorphic U vs polymorphic a
    auto eek = [&](TypePtr ty) {
        return quantified({{"x", ty}, {"y", ty}}, schematic_var("x"), schematic_var("y"));
    };
    CHECK_FALSE(alpha_equal(eek(tcon("U")), eek(tvar("a"))));

    // fixed variables compare literally
    Prop fixed_x = quantified({}, fixed_var("x"), fixed_var("x"));
    Prop fixed_y = quantified({}, fixed_var("y"), fixed_var("y"));
    CHECK_FALSE(alpha_equal(fixed_x, fixed_y));

    // independent binders may be permuted when the terms pair them up
    Prop ab = quantified({{"a", N}, {"b", N}},
                         app(app(constant("plus"), schematic_var("a")), schematic_var("b")),
                         schematic_var("a"));
    Prop ba = quantified({{"q", N}, {"p", N}},
                         app(app(constant("plus"), schematic_var("p")), schematic_var("q")),
                         schematic_var("p"));
    CHECK(alpha_equal(ab, ba));
}

TEST_CASE("alpha_equal is an equivalence relation") {
    Rng rng(13);
    TypePtr N = tcon("N");
    auto gen_prop = [&](const std::string& v1, const std::string& v2) {
        return quantified({{v1, N}, {v2, N}}, testutil::gen_rule_side(rng, 7, {v1, v2}),
                          testutil::gen_rule_side(rng, 7, {v1, v2}));
    };
    for (int i = 0; i < 100; ++i) {
        auto save = rng.gen;
        Prop a = gen_prop("x", "y");
        rng.gen = save;
        Prop b = gen_prop("u", "v");
        rng.gen = save;
        Prop c = gen_prop("y", "x");
        CHECK(alpha_equal(a, a));
        REQUIRE(alpha_equal(a, b));
        CHECK(alpha_equal(b, a));
        REQUIRE(alpha_equal(b, c));
        CHECK(alpha_equal(a, c));
    }
}

TEST_CASE("verdicts do not depend on spans") {
    for (const char* name : {"succ_eq_plus_one.cyp", "xor_sym.cyp", "plus_Z.cyp", "eek_mono.cyp",
                             "symdiff_sym_solved.cyp"}) {
        std::string text = testutil::read_corpus(name);
        Module resolved = resolve_names(parse_module(text, name));
        Module stripped = testutil::strip(resolved);

        auto statuses = [](const ModuleReport& r) {
            std::vector<int> out;
            for (const auto& l : r.lemmas) out.push_back(static_cast<int>(l.result.status));
            return out;
        };
        ModuleReport a = check_module(resolved, check_module_types(resolved));
        ModuleReport b = check_module(stripped, check_module_types(stripped));
        CHECK(statuses(a) == statuses(b));
        CHECK(a.all_holes().size() == b.all_holes().size());
    }
}
