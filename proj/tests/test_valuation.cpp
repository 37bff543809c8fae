#include <valdef/valuation.hpp>

#include <doctest.h>

#include <string>
#include <utility>
#include <vector>

using namespace valdef;
using namespace valdef::valuation;
namespace A = valdef::algebra;

namespace {

A::Field Q() { return A::make_q(); }
A::Field F3t() { return A::make_ratfunc(A::make_fp(3), "t"); }
A::Field F5u() { return A::make_ratfunc(A::make_fp(5), "u"); }
A::Field Qt() { return A::make_ratfunc(A::make_q(), "t"); }

}  // namespace

TEST_CASE("discrete orders") {
    CHECK(order(place_qprime(3), A::from_rat(Q(), Rat(9) / 2)) == 2);
    auto pt1 = place_func_irred(F3t(), A::poly_from_ints(A::make_fp(3), {-1, 1}));
    CHECK(order(pt1, A::parse_elem(F3t(), "(t-1)^2/t")) == 2);
    CHECK(order(place_func_infty(F3t()), A::parse_elem(F3t(), "t")) == -1);
}

TEST_CASE("residue maps") {
    CHECK(A::elem_str(residue(place_qprime(5), A::from_rat(Q(), Rat(7) / 3))) == "4");

    auto pt0 = place_func_irred(F3t(), A::poly_from_ints(A::make_fp(3), {0, 1}));
    CHECK(A::elem_str(residue(pt0, A::parse_elem(F3t(), "t+2"))) == "2");

    // residue field of a degree-2 place over Q is the quadratic extension
    auto pquad = place_func_irred(Qt(), A::poly_from_ints(Q(), {1, 0, 1}));
    CHECK(A::field_str(residue_field(pquad)) == "QuadExt(Q,-1)");
    auto r = residue(pquad, A::parse_elem(Qt(), "t"));
    CHECK(A::is_zero(A::quad_x(r)));
    CHECK(A::elem_str(A::quad_y(r)) == "1");
    CHECK(A::elem_str(r) == "(1)*sqrt");
}

TEST_CASE("support is sorted and complete") {
    auto sup = support(A::parse_elem(F3t(), "t/(t+1)^2"));
    REQUIRE(sup.size() == 3);
    CHECK(place_str(sup[0].first) == "irr:[0,1]");
    CHECK(sup[0].second == 1);
    CHECK(place_str(sup[1].first) == "irr:[1,1]");
    CHECK(sup[1].second == -2);
    CHECK(place_str(sup[2].first) == "finf");
    CHECK(sup[2].second == 1);

    auto sup2 = support(A::parse_elem(F5u(), "u^2+1"));
    REQUIRE(sup2.size() == 3);
    CHECK(place_str(sup2[0].first) == "irr:[2,1]");
    CHECK(sup2[0].second == 1);
    CHECK(place_str(sup2[1].first) == "irr:[3,1]");
    CHECK(sup2[1].second == 1);
    CHECK(place_str(sup2[2].first) == "finf");
    CHECK(sup2[2].second == -2);
}

TEST_CASE("place text round trips") {
    for (std::string s : {"p:7", "inf"}) CHECK(place_str(parse_place(Q(), s)) == s);
    for (std::string s : {"irr:[0,1]", "finf"}) CHECK(place_str(parse_place(F3t(), s)) == s);
}

TEST_CASE("splitting above a square root") {
    auto f3 = A::make_fp(3);
    auto pt0 = place_func_irred(F3t(), A::poly_from_ints(f3, {0, 1}));
    auto e1 = extend_to_sqrt(pt0, A::parse_elem(F3t(), "t"));
    REQUIRE(e1.size() == 1);  // ramified: sqrt of a uniformizer
    CHECK(e1[0].e == 2);
    CHECK(e1[0].f == 1);

    auto f5 = A::make_fp(5);
    auto pt1 = place_func_irred(F5u(), A::poly_from_ints(f5, {-1, 1}));
    auto e2 = extend_to_sqrt(pt1, A::parse_elem(F5u(), "2"));
    REQUIRE(e2.size() == 1);  // inert: 2 is a nonsquare in the residue field F_5
    CHECK(e2[0].e == 1);
    CHECK(e2[0].f == 2);

    auto e3 = extend_to_sqrt(pt1, A::parse_elem(F5u(), "4*u"));
    REQUIRE(e3.size() == 2);  // split: residue 4 is a square
    CHECK(e3[0].e == 1);
    CHECK(e3[0].f == 1);

    CHECK(extend_to_sqrt(place_qprime(7), A::from_int(Q(), 2)).size() == 2);
    auto e5 = extend_to_sqrt(place_qprime(5), A::from_int(Q(), 2));
    REQUIRE(e5.size() == 1);
    CHECK(e5[0].e == 1);
    CHECK(e5[0].f == 2);

    // the real place: complex above -1, still real (two orderings) above 2
    auto e6 = extend_to_sqrt(place_qinfty(), A::from_int(Q(), -1));
    REQUIRE(e6.size() == 1);
    CHECK(e6[0].f == 2);
    CHECK(extend_to_sqrt(place_qinfty(), A::from_int(Q(), 2)).size() == 2);
}

TEST_CASE("weak approximation hits every target order") {
    auto f3 = A::make_fp(3);
    CHECK(A::elem_eq(weak_approx(F3t(), {}), A::one(F3t())));

    auto pt0 = place_func_irred(F3t(), A::poly_from_ints(f3, {0, 1}));
    std::vector<std::pair<Place, long>> tg = {
        {pt0, 2},
        {place_func_irred(F3t(), A::poly_from_ints(f3, {1, 1})), -1},
        {place_func_infty(F3t()), 3}};
    auto w = weak_approx(F3t(), tg);
    for (auto& [p, m] : tg) CHECK(order(p, w) == m);
    CHECK(A::elem_eq(weak_approx(F3t(), tg), w));  // deterministic

    std::vector<std::pair<Place, long>> tg2 = {
        {place_func_irred(Qt(), A::poly_from_ints(Q(), {0, 1})), -3},
        {place_func_infty(Qt()), 5}};
    auto w2 = weak_approx(Qt(), tg2);
    for (auto& [p, m] : tg2) CHECK(order(p, w2) == m);
}

TEST_CASE("primes in Q(i)") {
    auto Qi = A::make_quadext(Q(), A::from_int(Q(), -1));
    CHECK(qf_splitting(Qi, 2) == QfSplitKind::ramified);
    CHECK(qf_splitting(Qi, 5) == QfSplitKind::split);
    CHECK(qf_splitting(Qi, 3) == QfSplitKind::inert);

    auto onePlusI = A::make_quad(Qi, A::from_int(Q(), 1), A::from_int(Q(), 1));
    CHECK(qf_order(qf_place(Qi, 2), onePlusI) == 1);
    auto twoPlusI = A::make_quad(Qi, A::from_int(Q(), 2), A::from_int(Q(), 1));
    CHECK(qf_order(qf_place(Qi, 5, 0), twoPlusI) == 0);
    CHECK(qf_order(qf_place(Qi, 5, 1), twoPlusI) == 1);
    auto three = A::make_quad(Qi, A::from_int(Q(), 3), A::from_int(Q(), 0));
    CHECK(qf_order(qf_place(Qi, 3), three) == 1);
}

TEST_CASE("rank-2 composite orders") {
    auto c1 = make_composite(place_func_irred(Qt(), A::poly_from_ints(Q(), {-1, 1})), 2);
    auto co1 = composite_order(c1, A::parse_elem(Qt(), "t/2"));
    CHECK(co1.first == 0);
    CHECK(co1.second == -1);

    auto pquad = place_func_irred(Qt(), A::poly_from_ints(Q(), {1, 0, 1}));
    auto c2 = make_composite(pquad, 2);
    auto co2 = composite_order(c2, A::parse_elem(Qt(), "(t^2-t)/2"));
    CHECK(co2.first == 0);
    CHECK(co2.second == -1);

    CHECK(composite_str(c2) == "comp(irr:[1,0,1], p:2)");
    CHECK(composite_str(parse_composite(Qt(), composite_str(c2))) == composite_str(c2));

    // branch split above 5 in Q(i): exactly one branch sees (t+2)
    auto c4 = make_composite(pquad, 5, 0);
    CHECK(composite_str(c4) == "comp(irr:[1,0,1], p:5#0)");
    auto c5 = make_composite(pquad, 5, 1);
    long b0 = composite_order(c4, A::parse_elem(Qt(), "t+2")).second;
    long b1 = composite_order(c5, A::parse_elem(Qt(), "t+2")).second;
    CHECK(b0 == 0);
    CHECK(b1 == 1);
}

TEST_CASE("orders are valuations and supports sum to zero") {
    Rng rng(97);
    auto f5 = A::make_fp(5);
    auto K = A::make_ratfunc(f5, "t");
    auto rand_elem = [&]() -> A::Elem {
        A::Poly num{f5, {}}, den{f5, {}};
        int dn = static_cast<int>(rng.below(3)), dd = static_cast<int>(rng.below(2));
        for (int i = 0; i <= dn; ++i) num.c.push_back(A::enum_elem(f5, Int(static_cast<long>(rng.below(5)))));
        for (int i = 0; i < dd; ++i) den.c.push_back(A::enum_elem(f5, Int(static_cast<long>(rng.below(5)))));
        den.c.push_back(A::one(f5));
        while (!num.c.empty() && A::is_zero(num.c.back())) num.c.pop_back();
        if (num.c.empty()) num.c.push_back(A::one(f5));
        return A::make_frac(K, num, den);
    };
    auto pt0 = place_func_irred(K, A::poly_from_ints(f5, {0, 1}));
    auto pinf = place_func_infty(K);
    for (int trial = 0; trial < 60; ++trial) {
        A::Elem x = rand_elem(), y = rand_elem();
        for (const Place& v : {pt0, pinf}) {
            long vx = order(v, x), vy = order(v, y);
            CHECK(order(v, A::mul(x, y)) == vx + vy);
            A::Elem s = A::add(x, y);
            if (!A::is_zero(s)) CHECK(order(v, s) >= std::min(vx, vy));
        }
        // the degree-weighted order sum over all places vanishes
        long total = 0;
        for (auto& [p, m] : support(x)) total += static_cast<long>(residue_degree(p)) * m;
        CHECK(total == 0);
    }
}
