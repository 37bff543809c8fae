#include <valdef/recipe.hpp>

#include <doctest.h>

#include <set>
#include <string>
#include <vector>

using namespace valdef;
namespace F = fol;
namespace R = recipe;

TEST_CASE("pfister equation shapes") {
    auto p0 = R::emit_pfister_eq({}, 0);
    CHECK(F::print_formula(p0) == "(exists (x1) (and (not (= x1 0)) (= (* x1 x1) 0)))");

    auto p1 = R::emit_pfister_eq({F::t_var("a")}, 1);
    CHECK(F::print_formula(p1) ==
          "(exists (x1 x2) (and (not (and (= x1 0) (= x2 0))) "
          "(= (+ (* x1 x1) (* (- a) (* x2 x2))) 0)))");
    CHECK(F::free_vars(p1) == std::set<std::string>{"a"});

    // the solution pool renames away from colliding coefficient variables
    auto pc = R::emit_pfister_eq({F::t_var("x2")}, 1);
    CHECK(F::print_formula(pc).find("x1'") != std::string::npos);
    CHECK(F::free_vars(pc) == std::set<std::string>{"x2"});

    auto p2 = R::emit_pfister_eq({F::t_var("a"), F::t_var("b")}, 2);
    CHECK(F::free_vars(p2) == std::set<std::string>({"a", "b"}));
    CHECK(F::stats(p2).quantifier_depth == 1);  // one binder carrying all four unknowns

    CHECK_THROWS_AS(R::emit_pfister_eq({}, -1), precondition_error);
    CHECK_THROWS_AS(R::emit_pfister_eq({F::t_var("a")}, 2), precondition_error);
}

TEST_CASE("quadratic-extension relativization") {
    auto triv = R::relativize_to_quadratic_ext(F::f_eq(F::t_zero(), F::t_zero()), F::t_var("e"));
    CHECK(F::print_formula(triv) == "(and (= 0 0) (= 0 0))");

    auto sq = F::parse_formula("(exists (x) (= (* x x) c))");
    auto rel = R::relativize_to_quadratic_ext(sq, F::t_var("e"));
    CHECK(F::print_formula(rel) ==
          "(exists (x'1 x'2) (and (= (+ (* x'1 x'1) (* e (* x'2 x'2))) c) "
          "(= (+ (* x'1 x'2) (* x'2 x'1)) 0)))");
    CHECK(F::free_vars(rel) == std::set<std::string>({"c", "e"}));

    // a binder colliding with the component suffixes is renamed first
    auto shadow = F::parse_formula("(exists (w) (= (* w w) c))");
    auto rel_shadow = R::relativize_to_quadratic_ext(shadow, F::t_var("w"));
    CHECK(F::free_vars(rel_shadow) == std::set<std::string>({"c", "w"}));
}

TEST_CASE("relativized truth equals truth in the quadratic extension") {
    auto f3 = algebra::make_fp(3);
    auto f9 = algebra::make_fq(3, {Int(1), Int(0), Int(1)});

    auto want_i = F::parse_formula("(exists (x) (= (* x x) (- 1)))");
    auto rel_i = R::relativize_to_quadratic_ext(want_i, F::t_neg(F::t_one()));
    CHECK(!F::eval_sentence(want_i, f3));
    CHECK(F::eval_sentence(rel_i, f3));
    CHECK(F::eval_sentence(want_i, f9));

    const char* sentences[] = {
        "(forall (x) (exists (y) (or (= (* y y) x) (= (* y y) (- x)))))",
        "(exists (x y) (and (not (= x 0)) (= (+ (* x x) (* y y)) (- 1))))",
        "(forall (x) (imp (not (= x 0)) (exists (y) (= (* x y) 1))))",
        "(exists (x) (and (not (= x 1)) (= (* x (* x x)) 1)))",
    };
    for (const char* txt : sentences) {
        CAPTURE(txt);
        auto sigma = F::parse_formula(txt);
        auto rels = R::relativize_to_quadratic_ext(sigma, F::t_neg(F::t_one()));
        CHECK(F::eval_sentence(rels, f3) == F::eval_sentence(sigma, f9));
    }
}

TEST_CASE("small-dimension sentences hold over prime fields") {
    auto d0 = R::emit_phi_d(0);
    auto d1 = R::emit_phi_d(1);
    CHECK(F::free_vars(d0).empty());
    CHECK(F::stats(R::emit_phi_d(2)).macro_names.empty());

    // finite fields are the dimension-0 case; larger q values run in the
    // acceptance binary where the runtime budget is tracked
    for (const auto& k : {algebra::make_fp(3), algebra::make_fp(5)}) {
        CAPTURE(algebra::field_str(k));
        CHECK(F::eval_sentence(d0, k));
        CHECK(!F::eval_sentence(d1, k));
    }
}

TEST_CASE("valuation-theoretic core formula structure") {
    auto p0 = R::emit_phi_ft(0);
    CHECK(F::free_vars(p0) == std::set<std::string>{"f"});
    auto p1 = R::emit_phi_ft(1);
    CHECK(F::free_vars(p1) == std::set<std::string>({"f", "t1"}));
    CHECK(F::stats(R::emit_phi_ft(2)).alternation_count == 5);

    // set-parameter variables keep single binders under relativization
    auto relp = R::relativize_to_quadratic_ext(p0, F::t_neg(F::t_one()));
    std::string rp = F::print_formula(relp);
    CHECK(rp.find("(forall (d0)") != std::string::npos);
    CHECK(rp.find("ubullet d0") != std::string::npos);
    CHECK(F::free_vars(relp) == std::set<std::string>{"f"});
    CHECK(F::formula_eq(F::parse_formula(rp), relp));
}

TEST_CASE("valuation ring membership sentences") {
    auto v2 = R::emit_val_d(2);
    CHECK(F::free_vars(v2) == std::set<std::string>({"x", "f"}));
    auto v3 = R::emit_val_d(3);
    CHECK(F::free_vars(v3) == std::set<std::string>({"x", "f", "t1"}));
    auto st3 = F::stats(v3);
    CHECK(st3.macro_names == std::set<std::string>({"poonen_psi", "poonen_constants"}));
    CHECK(F::stats(v2).node_count < st3.node_count);

    std::string s2 = F::print_formula(v2);
    CHECK(F::formula_eq(F::parse_formula(s2), v2));

    CHECK_THROWS_AS(R::emit_val_d(1), precondition_error);
    CHECK_THROWS_AS(R::emit_val_d(9), precondition_error);
}

TEST_CASE("degree sentences") {
    auto g1 = R::emit_deg_N(1);
    CHECK(F::free_vars(g1) == std::set<std::string>{"u"});
    CHECK_THROWS_AS(R::emit_deg_N(0), precondition_error);
    CHECK_THROWS_AS(R::emit_deg_N(9), precondition_error);
}

TEST_CASE("isomorphy sentences") {
    R::IsoData data;
    data.characteristic = 3;
    data.e = 1;
    data.N = 1;
    data.fk = {{Int(1), 2, {0}}, {Int(-1), 0, {1}}};  // u^2 - t1
    auto iso = R::emit_iso_sentence(data);
    CHECK(F::free_vars(iso).empty());
    auto st = F::stats(iso);
    CHECK(st.macro_names.count("rumely_iso") == 1);
    CHECK(st.macro_names.count("poonen_psi") == 1);
    CHECK(st.macro_names.count("poonen_constants") == 1);

    R::IsoData bad = data;
    bad.fk = {{Int(2), 2, {0}}, {Int(-1), 0, {1}}};  // leading coefficient 2
    CHECK_THROWS_AS(R::emit_iso_sentence(bad), precondition_error);

    R::IsoData insep = data;
    insep.fk = {{Int(1), 3, {0}}, {Int(-1), 0, {1}}};  // u^3 - t1, derivative 0 mod 3
    CHECK_THROWS_AS(R::emit_iso_sentence(insep), precondition_error);

    R::IsoData comp = data;
    comp.characteristic = 15;
    CHECK_THROWS_AS(R::emit_iso_sentence(comp), precondition_error);
}

TEST_CASE("emitter configuration guard rails") {
    auto cfg = R::make_config(4, Int(5));
    CHECK(cfg.e == 2);
    CHECK_THROWS_AS(R::make_config(1, Int(0)), precondition_error);
    CHECK_THROWS_AS(R::make_config(3, Int(2)), precondition_error);
}
