#include <catch2/catch_amalgamated.hpp>

#include "testutil.hpp"

using namespace cyp;
using testutil::Rng;

namespace {

TermPtr tt(const std::string& src) {
    // parse, resolving known function symbols as constants and other
    // lowercase leaves as fixed variables
    static const std::set<std::string> known{"plus", "times", "value", "doubleN", "succB",
                                             "xor",  "e",     "not",   "id",      "comp"};
    TermPtr raw = parse_term(src);
    auto fix = [](auto&& self, const TermPtr& t) -> TermPtr {
        if (t->kind == TermKind::App) return app(self(self, t->fun), self(self, t->arg), t->span);
        if (t->kind != TermKind::Free) return t;
        if (std::isupper(static_cast<unsigned char>(t->name[0])) || known.count(t->name))
            return constant(t->name, t->span);
        return fixed_var(t->name, t->span);
    };
    return fix(fix, raw);
}

TermPtr pat(const std::string& src, const std::set<std::string>& vars) {
    TermPtr raw = parse_term(src);
    auto fix = [&](auto&& self, const TermPtr& t) -> TermPtr {
        if (t->kind == TermKind::App) return app(self(self, t->fun), self(self, t->arg), t->span);
        if (t->kind == TermKind::Free)
            return vars.count(t->name) ? schematic_var(t->name, t->span) : constant(t->name, t->span);
        return t;
    };
    return fix(fix, raw);
}

Rule rule_of(const std::string& name, const std::string& lhs, const std::string& rhs,
             const std::set<std::string>& vars, RuleOrigin origin = RuleOrigin::Axiom,
             TypePtr binder_ty = tcon("N")) {
    std::vector<Binder> binders;
    for (const std::string& v : vars) binders.push_back(Binder{v, binder_ty, {}});
    return Rule{name, origin, Prop{std::move(binders), pat(lhs, vars), pat(rhs, vars), {}}};
}

} // namespace

TEST_CASE("match_pattern binds consistently") {
    // times x e against times (times x0 y0) e
    TermPtr p = pat("times x e", {"x"});
    TermPtr t = tt("times (times x0 y0) e");
    auto sigma = match_pattern(p, t);
    REQUIRE(sigma.has_value());
    CHECK(term_equal(sigma->at("x"), tt("times x0 y0")));

    // a bare variable matches anything
    auto all = match_pattern(schematic_var("x"), t);
    REQUIRE(all.has_value());
    CHECK(term_equal(all->at("x"), t));

    // nonlinear patterns need equal arguments
    TermPtr nl = pat("times x x", {"x"});
    CHECK_FALSE(match_pattern(nl, tt("times a b")).has_value());
    CHECK(match_pattern(nl, tt("times a a")).has_value());
}

TEST_CASE("rule_rewrites finds position and direction on its own") {
    TypeEnv env = check_module_types(resolve_names(parse_module(
        "data N = Z | S N\nplus :: N -> N -> N\nplus Z y = y\nplus (S x) y = S (plus x y)\n",
        "p.cyp")));
    // def-plus first equation used right-to-left below the S
    Rule plus1 = rule_of("plus", "plus Z y", "y", {"y"}, RuleOrigin::Def);
    Assumptions assum{{"a", tcon("N")}};
    CHECK(rule_rewrites(plus1, tt("S a"), tt("S (plus Z a)"), env, assum));

    // no occurrence of the pattern: Z cannot be rewritten
    CHECK_FALSE(rule_rewrites(plus1, tt("Z"), tt("Z"), env, assum));

    // rewriting into a hole: the square axiom fires even though the target
    // is unconstrained
    TypeEnv group = check_module_types(
        resolve_names(parse_module("e :: T\ntimes :: T -> T -> T\n", "g.cyp")));
    Rule square = rule_of("square", "times x x", "e", {"x"}, RuleOrigin::Axiom, tcon("T"));
    CHECK(rule_rewrites(square, tt("times (times x0 y0) e"), hole(), group,
                        Assumptions{{"x0", tcon("T")}, {"y0", tcon("T")}}));
}

TEST_CASE("rule_rewrites reads target-only variables off the target term") {
    TypeEnv env = check_module_types(
        resolve_names(parse_module("data Bool = False | True\n", "b.cyp")));
    Rule eek = rule_of("eek", "x", "y", {"x", "y"}, RuleOrigin::Axiom, tvar("a"));
    CHECK(rule_rewrites(eek, tt("False"), tt("True"), env, {}));
}

TEST_CASE("check_step validates the intro doubleN step right-to-left") {
    TypeEnv env = check_module_types(
        resolve_names(parse_module(testutil::read_corpus("succ_solved.cyp"), "s.cyp")));
    RuleEnv rules;
    rules.defs["doubleN"].push_back(rule_of("doubleN", "doubleN Z", "Z", {}, RuleOrigin::Def));
    rules.defs["doubleN"].push_back(
        rule_of("doubleN", "doubleN (S x)", "S (S (doubleN x))", {"x"}, RuleOrigin::Def));
    Assumptions assum{{"x", tcon("B")}};

    Link link{LinkKind::ByDef, "doubleN", {}, {}};
    StepVerdict v = check_step(rules, tt("S (S (doubleN (value x)))"), link,
                               tt("doubleN (S (value x))"), env, assum);
    CHECK(v.kind == StepVerdict::Kind::Valid);
}

TEST_CASE("check_step accepts (by _) and hole terms only as incomplete") {
    TypeEnv env = testutil::nat_env();
    RuleEnv rules;
    Link by_hole{LinkKind::ByHole, {}, {}, {}};
    StepVerdict v = check_step(rules, tt("Z"), by_hole, tt("S Z"), env, {});
    CHECK(v.kind == StepVerdict::Kind::ValidIncomplete);
    CHECK(v.reason == StepVerdict::Reason::HoleLink);

    Link ellipsis{LinkKind::Ellipsis, {}, {}, {}};
    CHECK(check_step(rules, tt("Z"), ellipsis, tt("S Z"), env, {}).reason ==
          StepVerdict::Reason::Ellipsis);

    rules.named.emplace("r", rule_of("r", "x", "x", {"x"}));
    Link by_r{LinkKind::ByRule, "r", {}, {}};
    StepVerdict h = check_step(rules, app(constant("S"), hole()), by_r,
                               app(constant("S"), hole()), env, {});
    CHECK(h.kind == StepVerdict::Kind::ValidIncomplete);
    CHECK(h.reason == StepVerdict::Reason::HoleInTerm);
}

TEST_CASE("check_step rejects unknown rules") {
    TypeEnv env = testutil::nat_env();
    RuleEnv rules;
    Link link{LinkKind::ByDef, "f", {}, {}};
    StepVerdict v = check_step(rules, tt("False"), link, tt("True"), env, {});
    CHECK(v.kind == StepVerdict::Kind::Invalid);
    REQUIRE(v.diag.has_value());
    CHECK(v.diag->message.find("unknown rule") != std::string::npos);

    Link named{LinkKind::ByRule, "nope", {}, {}};
    StepVerdict w = check_step(rules, tt("Z"), named, tt("Z"), env, {});
    CHECK(w.kind == StepVerdict::Kind::Invalid);
}

TEST_CASE("check_step agrees with the brute-force oracle on hole-free inputs") {
    TypeEnv env = testutil::nat_env();
    Rng rng(7);
    int agreements = 0;
    for (int i = 0; i < 400; ++i) {
        Rule r = testutil::gen_rule(rng);
        TermPtr from = testutil::gen_ground(rng, 12);
        // half the time aim for a genuine rewrite so true cases are frequent
        TermPtr to;
        if (rng.chance(50)) {
            to = testutil::gen_ground(rng, 12);
        } else {
            auto ps = subterm_positions(from);
            const Position& p =
                ps[static_cast<size_t>(rng.below(static_cast<int>(ps.size())))].first;
            auto sigma = match_pattern(r.prop.lhs, subterm_at(from, p));
            if (sigma) {
                Substitution full = *sigma;
                std::set<std::string> vs;
                collect_schematic_vars(r.prop.rhs, vs);
                for (const std::string& v : vs)
                    if (!full.count(v)) full[v] = testutil::gen_ground(rng, 3);
                to = replace_at(from, p, substitute(r.prop.rhs, full));
            } else {
                to = testutil::gen_ground(rng, 12);
            }
        }
        RuleEnv rules;
        rules.named.emplace("r", r);
        StepVerdict v = check_step(rules, from, Link{LinkKind::ByRule, "r", {}, {}}, to, env, {});
        bool expected = testutil::oracle::rewrites(r, from, to);
        INFO("rule: " << show_term(r.prop.lhs) << " .=. " << show_term(r.prop.rhs));
        INFO("from: " << show_term(from) << "   to: " << show_term(to));
        REQUIRE((v.kind == StepVerdict::Kind::Valid) == expected);
        if (expected) ++agreements;
    }
    CHECK(agreements > 50);
}

TEST_CASE("check_step is never Valid when a hole is anywhere in the step") {
    Rng rng(19);
    TypeEnv env = testutil::nat_env();
    for (int i = 0; i < 200; ++i) {
        Rule r = testutil::gen_rule(rng);
        TermPtr from = testutil::gen_ground(rng, 10);
        TermPtr to = testutil::gen_ground(rng, 10);
        auto ps = subterm_positions(from);
        from = replace_at(from, ps[static_cast<size_t>(rng.below(static_cast<int>(ps.size())))].first,
                          hole());
        RuleEnv rules;
        rules.named.emplace("r", r);
        StepVerdict v = check_step(rules, from, Link{LinkKind::ByRule, "r", {}, {}}, to, env, {});
        CHECK(v.kind == StepVerdict::Kind::ValidIncomplete);
    }
}

TEST_CASE("step validity is direction-agnostic on hole-free terms") {
    Rng rng(23);
    TypeEnv env = testutil::nat_env();
    for (int i = 0; i < 300; ++i) {
        Rule r = testutil::gen_rule(rng);
        TermPtr a = testutil::gen_ground(rng, 10);
        TermPtr b = testutil::gen_ground(rng, 10);
        RuleEnv rules;
        rules.named.emplace("r", r);
        Link link{LinkKind::ByRule, "r", {}, {}};
        StepVerdict ab = check_step(rules, a, link, b, env, {});
        StepVerdict ba = check_step(rules, b, link, a, env, {});
        CHECK((ab.kind == StepVerdict::Kind::Valid) == (ba.kind == StepVerdict::Kind::Valid));
    }
}
