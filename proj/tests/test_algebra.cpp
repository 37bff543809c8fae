#include <valdef/algebra.hpp>

#include <doctest.h>

using namespace valdef;
using namespace valdef::algebra;

TEST_CASE("prime field inverse") {
    Field f7 = make_fp(7);
    CHECK(elem_str(inv(from_int(f7, 3))) == "5");
    CHECK(elem_eq(mul(from_int(f7, 3), from_int(f7, 5)), one(f7)));
}

TEST_CASE("polynomial factorization over F_5") {
    Field f5 = make_fp(5);
    Poly p = poly_from_ints(f5, {1, 0, 1});
    auto fac = factor_poly(p);
    CHECK(elem_str(fac.unit) == "1");
    REQUIRE(fac.factors.size() == 2);
    CHECK(poly_str(fac.factors[0].first, "u") == "u+2");
    CHECK(poly_str(fac.factors[1].first, "u") == "u+3");
    CHECK(fac.factors[0].second == 1);
    CHECK(fac.factors[1].second == 1);
}

TEST_CASE("irreducibility over F_3") {
    Field f3 = make_fp(3);
    CHECK(poly_irreducible(poly_from_ints(f3, {1, 0, 1})));
    CHECK(!poly_irreducible(poly_from_ints(f3, {2, 0, 1})));  // t^2 - 1
}

TEST_CASE("extension field enumeration and descriptor round trip") {
    Field f4 = make_fq(2, {Int(1), Int(1), Int(1)});
    CHECK(elem_str(enum_elem(f4, 0)) == "[0,0]");
    CHECK(elem_str(enum_elem(f4, 1)) == "[1,0]");
    CHECK(elem_str(enum_elem(f4, 2)) == "[0,1]");
    CHECK(elem_str(enum_elem(f4, 3)) == "[1,1]");
    CHECK(field_str(f4) == "Fq:2^2/[1,1,1]");
    CHECK(field_eq(parse_field(field_str(f4)), f4));

    Field f9 = make_fq(3, {Int(2), Int(2), Int(1)});
    CHECK(field_str(f9) == "Fq:3^2/[2,2,1]");
}

TEST_CASE("log-table arithmetic agrees with polynomial arithmetic") {
    for (Field ff : {make_fq(3, {Int(2), Int(2), Int(1)}), make_fq(2, {Int(1), Int(1), Int(0), Int(1)})}) {
        auto z = ZechField::get(ff);
        Int q = field_card(ff);
        for (Int a = 0; a < q; ++a) {
            for (Int b = 0; b < q; ++b) {
                Elem ea = enum_elem(ff, a), eb = enum_elem(ff, b);
                auto ra = static_cast<uint32_t>(elem_rank(ea).get_ui());
                auto rb = static_cast<uint32_t>(elem_rank(eb).get_ui());
                CHECK(elem_rank(add(ea, eb)).get_ui() == z->add(ra, rb));
                CHECK(elem_rank(mul(ea, eb)).get_ui() == z->mul(ra, rb));
                CHECK(elem_rank(neg(ea)).get_ui() == z->neg(ra));
                if (!is_zero(eb)) CHECK(elem_rank(div(ea, eb)).get_ui() == z->mul(ra, z->inv(rb)));
                if (!is_zero(ea)) CHECK(is_square(ea) == z->is_square(ra));
            }
        }
    }
}

TEST_CASE("rational function arithmetic and canonical text") {
    Field rf = make_ratfunc(make_fp(5), "t");
    Elem e = parse_elem(rf, "(t^2+1)/(t+2)");
    // (t+2)(t+3) = t^2+1 over F_5, so the quotient reduces to a polynomial
    CHECK(elem_str(e) == "t+3");
    CHECK(elem_eq(parse_elem(rf, elem_str(e)), e));
    Elem esum = add(e, parse_elem(rf, "1/(t+2)"));
    CHECK(elem_str(esum) == "(t^2+2)/(t+2)");
}

TEST_CASE("factorization over Q") {
    Field Q = make_q();
    auto fac = factor_poly(parse_poly(Q, "t", "t^4-1"));
    REQUIRE(fac.factors.size() == 3);
    CHECK(poly_str(fac.factors[0].first, "t") == "t+(-1)");
    CHECK(poly_str(fac.factors[1].first, "t") == "t+1");
    CHECK(poly_str(fac.factors[2].first, "t") == "t^2+1");

    auto big = factor_poly(parse_poly(Q, "t", "(t^2+1)*(t^2+1)*(t^2-2)*(6*t-3)"));
    CHECK(elem_str(big.unit) == "6");
    REQUIRE(big.factors.size() == 3);
    CHECK(poly_str(big.factors[0].first, "t") == "t+(-1/2)");
    CHECK(big.factors[0].second == 1);
    CHECK(poly_str(big.factors[1].first, "t") == "t^2+(-2)");
    CHECK(poly_str(big.factors[2].first, "t") == "t^2+1");
    CHECK(big.factors[2].second == 2);
}

TEST_CASE("quadratic extension arithmetic") {
    Field Q = make_q();
    Field qe = make_quadext(Q, from_int(Q, -1));
    Elem i1 = make_quad(qe, from_int(Q, 0), from_int(Q, 1));
    CHECK(elem_str(mul(i1, i1)) == "-1");
    CHECK(elem_str(i1) == "(1)*sqrt");
    CHECK(field_str(qe) == "QuadExt(Q,-1)");
    CHECK(field_eq(parse_field(field_str(qe)), qe));
}

TEST_CASE("squares in F_q(t)") {
    Field rf = make_ratfunc(make_fp(5), "t");
    CHECK(is_square(parse_elem(rf, "(t^2+2*t+1)/(t^2)")));
    CHECK(!is_square(parse_elem(rf, "t")));
    CHECK(!is_square(parse_elem(rf, "2")));  // 2 is not a square mod 5
}

TEST_CASE("irreducible enumeration is ordered and deterministic") {
    Field f3 = make_fp(3);
    CHECK(poly_str(nth_irreducible(f3, 1, 0), "t") == "t");
    CHECK(poly_str(nth_irreducible(f3, 1, 1), "t") == "t+1");
    CHECK(poly_str(nth_irreducible(f3, 1, 2), "t") == "t+2");
    Field f4 = make_fq(2, {Int(1), Int(1), Int(1)});
    CHECK(poly_str(nth_irreducible(f4, 2, 0), "x") == "x^2+x+([0,1])");
}

TEST_CASE("field axioms hold on sampled elements") {
    Rng rng(11);
    for (Field k : {make_fp(7), make_fq(3, {Int(2), Int(2), Int(1)}),
                    make_ratfunc(make_fp(3), "t"), make_q()}) {
        Int q = is_finite(k) ? field_card(k) : Int(0);
        auto pick = [&]() -> Elem {
            if (is_finite(k)) return enum_elem(k, Int(static_cast<long>(rng.below(q.get_ui()))));
            if (field_str(k) == "Q")
                return from_rat(k, rat(Int(static_cast<long>(rng.range(-9, 9))),
                                       Int(static_cast<long>(rng.range(1, 9)))));
            // small rational functions
            auto base = k->base;
            Poly num{base, {}};
            for (int i = 0; i <= static_cast<int>(rng.below(3)); ++i)
                num.c.push_back(enum_elem(base, Int(static_cast<long>(rng.below(3)))));
            while (!num.c.empty() && is_zero(num.c.back())) num.c.pop_back();
            if (num.c.empty()) return zero(k);
            return poly_to_elem(k, num);
        };
        for (int i = 0; i < 60; ++i) {
            Elem a = pick(), b = pick(), c = pick();
            CHECK(elem_eq(add(a, b), add(b, a)));
            CHECK(elem_eq(mul(a, mul(b, c)), mul(mul(a, b), c)));
            CHECK(elem_eq(mul(a, add(b, c)), add(mul(a, b), mul(a, c))));
            CHECK(elem_eq(add(a, neg(a)), zero(k)));
            if (!is_zero(a)) CHECK(elem_eq(mul(a, inv(a)), one(k)));
            CHECK(elem_eq(sub(a, b), add(a, neg(b))));
        }
    }
}

TEST_CASE("factor product reassembles the input") {
    Rng rng(5);
    for (Field k : {make_fp(3), make_fp(5)}) {
        for (int trial = 0; trial < 40; ++trial) {
            Poly p{k, {}};
            int deg = 1 + static_cast<int>(rng.below(5));
            for (int i = 0; i < deg; ++i)
                p.c.push_back(enum_elem(k, Int(static_cast<long>(rng.below(field_card(k).get_ui())))));
            p.c.push_back(one(k));
            auto fac = factor_poly(p);
            Poly prod = poly_from(k, {fac.unit});
            for (const auto& [g, m] : fac.factors) {
                CHECK(poly_irreducible(g));
                for (int j = 0; j < m; ++j) prod = poly_mul(prod, g);
            }
            CHECK(poly_eq(prod, p));
        }
    }
}

TEST_CASE("square decision matches exhaustive squaring") {
    Field f9 = make_fq(3, {Int(2), Int(2), Int(1)});
    for (Int a = 1; a < 9; ++a) {
        Elem x = enum_elem(f9, a);
        bool found = false;
        for (Int b = 0; b < 9; ++b) {
            Elem y = enum_elem(f9, b);
            if (elem_eq(mul(y, y), x)) found = true;
        }
        CHECK(is_square(x) == found);
    }
}
