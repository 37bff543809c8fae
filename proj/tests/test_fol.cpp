#include <valdef/fol.hpp>

#include <doctest.h>

#include <map>
#include <string>
#include <vector>

using namespace valdef;
using namespace valdef::fol;

TEST_CASE("parse then print is bit-exact on canonical input") {
    const char* samples[] = {
        "(exists (x) (= (* x x) (- 1)))",
        "(and (= 0 1) (or (= x y) (not (= x 0))))",
        "(forall-rel (sigma d) (a) (= a a))",
        "(exists-rel (ubullet (+ d 1)) (u v) (= u v))",
        "(macro rumely_iso x (+ x 1))",
        "(macro poonen_constants)",
        "(imp (exists (x y) (= x y)) (= 0 0))",
        "(forall-rel (delta-u0 std_u0) (a) (= a a))",
    };
    for (const char* s : samples) {
        CAPTURE(s);
        auto f = parse_formula(s);
        auto printed = print_formula(f);
        CHECK(printed == s);
        CHECK(formula_eq(parse_formula(printed), f));
    }
}

TEST_CASE("malformed input raises parse_error") {
    const char* bad[] = {
        "(and 0 1)",                            // terms where formulas belong
        "(exists x (= x 0))",                   // binder list must be parenthesized
        "(exists-rel (sigma d) (u v) (= u v))", // arity 1 set, 2 binders
        "(foo (= 0 0) (= 0 0))",                // unknown head
        "(= 0 0) junk",                         // trailing garbage
        "(sigma x)",                            // a set is not a formula
    };
    for (const char* s : bad) {
        CAPTURE(s);
        CHECK_THROWS_AS(parse_formula(s), parse_error);
    }
    CHECK_THROWS_WITH(parse_formula("(and 0 1)"),
                      doctest::Contains("terms are not formulas"));
    CHECK_THROWS_WITH(parse_formula("(foo (= 0 0) (= 0 0))"),
                      doctest::Contains("unknown formula head"));
}

TEST_CASE("unicode rendering") {
    CHECK(print_formula(parse_formula("(exists (x) (= (* x x) (- 1)))"),
                        PrintFormat::unicode) == "∃x. x·x = −1");
    CHECK(print_formula(parse_formula("(forall (x) (exists (y) (= (* y y) x)))"),
                        PrintFormat::unicode) == "∀x. ∃y. y·y = x");
}

TEST_CASE("substitution is capture avoiding") {
    auto g = parse_formula("(exists (x) (= x y))");
    CHECK(print_formula(substitute(g, "y", t_one())) == "(exists (x) (= x 1))");
    CHECK(print_formula(substitute(g, "y", t_var("x"))) == "(exists (x') (= x' x))");
    CHECK(print_formula(substitute(parse_formula("(= x x)"), "x", t_zero())) == "(= 0 0)");

    // the set parameter is an ordinary free position; the binder variable is not
    auto h = parse_formula("(forall-rel (sigma y) (y) (= y y))");
    CHECK(print_formula(substitute(h, "y", t_add(t_var("z"), t_one()))) ==
          "(forall-rel (sigma (+ z 1)) (y) (= y y))");
}

TEST_CASE("normalize splits binders and renames shadowed variables") {
    auto n = parse_formula("(exists (x y) (exists (x) (= x y)))");
    CHECK(print_formula(normalize(n)) ==
          "(exists (x) (exists (y) (exists (x') (= x' y))))");
}

TEST_CASE("free variables") {
    CHECK(free_vars(parse_formula("(exists (x) (= x y))")) == std::set<std::string>{"y"});
    CHECK(free_vars(parse_formula("(forall-rel (sigma d) (a) (= a z))")) ==
          std::set<std::string>({"d", "z"}));
    CHECK(free_vars(parse_formula("(forall (x) (exists (y) (= (* y y) x)))")).empty());
}

TEST_CASE("formula statistics") {
    auto s1 = stats(parse_formula("(= 0 0)"));
    CHECK(s1.node_count == 3);
    CHECK(s1.quantifier_depth == 0);
    CHECK(s1.alternation_count == 0);

    auto s2 = stats(parse_formula("(exists (x) (forall (y) (exists (z) (= (+ x y) z))))"));
    CHECK(s2.quantifier_depth == 3);
    CHECK(s2.alternation_count == 2);

    // negation flips effective polarity, so E notE notE alternates twice
    auto s3 = stats(parse_formula("(exists (x) (not (exists (y) (not (exists (z) (= x z))))))"));
    CHECK(s3.quantifier_depth == 3);
    CHECK(s3.alternation_count == 2);

    // left of an implication dualizes, but disjoint subtrees never alternate
    auto s4 = stats(parse_formula("(imp (exists (x) (= x 0)) (exists (y) (= y 0)))"));
    CHECK(s4.alternation_count == 0);
    auto s5 = stats(parse_formula("(exists (q) (imp (exists (x) (= x q)) (= q 0)))"));
    CHECK(s5.alternation_count == 1);

    auto s6 = stats(parse_formula("(macro rumely_iso (+ x 1))"));
    CHECK(s6.node_count == 4);
    CHECK(s6.macro_names == std::set<std::string>{"rumely_iso"});

    // one binder node regardless of how many variables it carries
    auto s7 = stats(parse_formula("(exists (x y z) (= x y))"));
    CHECK(s7.quantifier_depth == 1);
}

TEST_CASE("sentence evaluation over finite fields") {
    using namespace valdef::algebra;
    Field f5 = make_fp(5), f7 = make_fp(7);

    auto has_i = parse_formula("(exists (x) (= (* x x) (- 1)))");
    CHECK(eval_sentence(has_i, f5));
    CHECK(!eval_sentence(has_i, f7));

    auto every_square = parse_formula("(forall (x) (exists (y) (= (* y y) x)))");
    CHECK(eval_sentence(every_square, make_fp(2)));
    CHECK(eval_sentence(every_square, make_fq(2, {Int(1), Int(1), Int(1)})));
    CHECK(!eval_sentence(every_square, f5));

    auto is_sq = parse_formula("(exists (x) (= (* x x) c))");
    std::map<std::string, Elem> asg{{"c", from_int(f5, 2)}};
    CHECK(!eval_sentence(is_sq, f5, asg));
    asg["c"] = from_int(f5, 4);
    CHECK(eval_sentence(is_sq, f5, asg));

    CHECK_THROWS_WITH_AS(eval_sentence(parse_formula("(= x 0)"), f5),
                         "unbound free variable: x", precondition_error);
    CHECK_THROWS_AS(eval_sentence(parse_formula("(macro m x)"), f5), precondition_error);
    CHECK_THROWS_AS(eval_sentence(has_i, make_q()), precondition_error);

    // integer literals reduce modulo the characteristic
    CHECK(eval_sentence(f_eq(t_int(7), t_int(2)), f5));
    CHECK(!eval_sentence(f_eq(t_int(7), t_int(3)), f5));
    CHECK(eval_sentence(f_eq(t_int(-1), t_neg(t_one())), f5));
}

TEST_CASE("field identities verified by evaluation") {
    using namespace valdef::algebra;
    const char* props[] = {
        "(forall (x y) (= (+ x y) (+ y x)))",
        "(forall (x) (exists (y) (= (+ x y) 0)))",
        "(exists (x) (and (not (= x 0)) (= (* x x) 1)))",
    };
    Field f9 = make_fq(3, {Int(2), Int(2), Int(1)});
    for (const char* s : props) {
        CAPTURE(s);
        CHECK(eval_sentence(parse_formula(s), f9));
    }
}

namespace {

// small random formula generator used only for round-trip coverage
TermPtr rand_term(Rng& rng, const std::vector<std::string>& vars, int depth) {
    if (depth == 0) {
        switch (rng.below(3)) {
            case 0: return t_zero();
            case 1: return t_one();
            default: return t_var(vars[rng.below(vars.size())]);
        }
    }
    switch (rng.below(4)) {
        case 0: return t_add(rand_term(rng, vars, depth - 1), rand_term(rng, vars, depth - 1));
        case 1: return t_mul(rand_term(rng, vars, depth - 1), rand_term(rng, vars, depth - 1));
        case 2: return t_neg(rand_term(rng, vars, depth - 1));
        default: return t_var(vars[rng.below(vars.size())]);
    }
}

FormulaPtr rand_formula(Rng& rng, std::vector<std::string> vars, int depth) {
    if (depth == 0)
        return f_eq(rand_term(rng, vars, 1), rand_term(rng, vars, 1));
    switch (rng.below(6)) {
        case 0: return f_and(rand_formula(rng, vars, depth - 1), rand_formula(rng, vars, depth - 1));
        case 1: return f_or(rand_formula(rng, vars, depth - 1), rand_formula(rng, vars, depth - 1));
        case 2: return f_not(rand_formula(rng, vars, depth - 1));
        case 3: return f_imp(rand_formula(rng, vars, depth - 1), rand_formula(rng, vars, depth - 1));
        case 4: {
            std::string v = "q" + std::to_string(rng.below(4));
            vars.push_back(v);
            return f_exists({v}, rand_formula(rng, vars, depth - 1));
        }
        default: {
            std::string v = "q" + std::to_string(rng.below(4));
            SetRef set{SetRef::Tag::sigma, rand_term(rng, vars, 1), ""};
            vars.push_back(v);
            return f_forall_rel(set, {v}, rand_formula(rng, vars, depth - 1));
        }
    }
}

}  // namespace

TEST_CASE("random formulas round-trip through text") {
    Rng rng(424242);
    for (int i = 0; i < 200; ++i) {
        auto f = rand_formula(rng, {"x", "y"}, 3);
        auto printed = print_formula(f);
        auto back = parse_formula(printed);
        CHECK(formula_eq(back, f));
        CHECK(print_formula(back) == printed);
    }
}
