#include <valdef/quadform.hpp>

#include <doctest.h>

#include <vector>

using namespace valdef;
using namespace valdef::quadform;
namespace A = valdef::algebra;
namespace V = valdef::valuation;

namespace {

QForm mk_q(const std::vector<long>& cs) {
    auto Q = A::make_q();
    std::vector<Elem> es;
    for (long c : cs) es.push_back(A::from_int(Q, c));
    return make_form(Q, es);
}

}  // namespace

TEST_CASE("pfister coefficient layout") {
    auto Q = A::make_q();
    CHECK(form_str(pfister(Q, {A::from_int(Q, 5)})) == "<1,-5>");
    CHECK(form_str(pfister(Q, {A::from_int(Q, 2), A::from_int(Q, 3)})) == "<1,-2,-3,6>");
    CHECK(form_str(pfister(Q, {})) == "<1>");
}

TEST_CASE("form evaluation") {
    auto Q = A::make_q();
    auto h = make_form(Q, {A::from_int(Q, 1), A::from_int(Q, -1)});
    CHECK(A::is_zero(evaluate(h, {A::from_int(Q, 1), A::from_int(Q, 1)})));
    auto F7 = A::make_fp(7);
    auto f7_111 = make_form(F7, {A::one(F7), A::one(F7), A::one(F7)});
    CHECK(A::is_zero(evaluate(f7_111, {A::from_int(F7, 1), A::from_int(F7, 2), A::from_int(F7, 3)})));
}

TEST_CASE("isotropy over finite fields: decider vs exhaustive search") {
    auto F3 = A::make_fp(3);
    CHECK(isotropic_fq(make_form(F3, {A::one(F3), A::from_int(F3, -1)})));
    CHECK(!isotropic_fq(make_form(F3, {A::one(F3), A::one(F3)})));
    auto F7 = A::make_fp(7);
    CHECK(isotropic_fq(make_form(F7, {A::one(F7), A::one(F7), A::one(F7)})));

    for (Int p : {Int(3), Int(5), Int(7)}) {
        auto F = A::make_fp(p);
        unsigned long card = p.get_ui();
        for (int dim = 1; dim <= 3; ++dim) {
            std::vector<unsigned long> idx(dim, 0);
            while (true) {
                std::vector<Elem> cs;
                for (int i = 0; i < dim; ++i) cs.push_back(A::enum_elem(F, Int(idx[i])));
                auto q = make_form(F, cs);
                CAPTURE(form_str(q));
                CHECK(isotropic_fq(q) == isotropic_bruteforce_fq(q));
                int pos = 0;
                while (pos < dim && idx[pos] + 1 == card) idx[pos++] = 0;
                if (pos == dim) break;
                ++idx[pos];
            }
        }
    }

    auto F9 = A::make_fq(3, {Int(1), Int(0), Int(1)});
    for (int dim = 1; dim <= 2; ++dim) {
        std::vector<unsigned long> idx(dim, 0);
        while (true) {
            std::vector<Elem> cs;
            for (int i = 0; i < dim; ++i) cs.push_back(A::enum_elem(F9, Int(idx[i])));
            auto q = make_form(F9, cs);
            CHECK(isotropic_fq(q) == isotropic_bruteforce_fq(q));
            int pos = 0;
            while (pos < dim && idx[pos] + 1 == 9) idx[pos++] = 0;
            if (pos == dim) break;
            ++idx[pos];
        }
    }
}

TEST_CASE("hilbert symbols at small places") {
    auto vinf = V::place_qinfty();
    auto v2 = V::place_qprime(2);
    auto v5 = V::place_qprime(5);
    CHECK(hilbert_symbol(Rat(-1), Rat(-1), vinf) == -1);
    CHECK(hilbert_symbol(Rat(-1), Rat(-1), v2) == -1);
    CHECK(hilbert_symbol(Rat(-1), Rat(-1), v5) == 1);
    CHECK(hilbert_symbol(Rat(2), Rat(7), V::place_qprime(7)) == 1);
    CHECK(hilbert_symbol(Rat(3), Rat(7), V::place_qprime(7)) == -1);
    CHECK(hilbert_symbol(Rat(5), Rat(5), v5) == 1);
    CHECK(hilbert_symbol(Rat(2), Rat(5), v5) == -1);
}

TEST_CASE("hilbert symbol product formula on random integer pairs") {
    Rng rng(7);
    auto vinf = V::place_qinfty();
    auto v2 = V::place_qprime(2);
    for (int trial = 0; trial < 500; ++trial) {
        long an = static_cast<long>(rng.range(1, 51)) * (rng.coin() ? 1 : -1);
        long bn = static_cast<long>(rng.range(1, 51)) * (rng.coin() ? 1 : -1);
        Rat a(an), b(bn);
        int prod = hilbert_symbol(a, b, vinf) * hilbert_symbol(a, b, v2);
        // odd primes up to 53 cover every divisor of |a|, |b| <= 50
        for (Int p = 3; p <= 53; p = p + 2) {
            if (mpz_probab_prime_p(p.get_mpz_t(), 30) == 0) continue;
            prod *= hilbert_symbol(a, b, V::place_qprime(p));
        }
        CAPTURE(an);
        CAPTURE(bn);
        CHECK(prod == 1);
    }
}

TEST_CASE("isotropy over Q") {
    CHECK(!isotropic_q(mk_q({1, 1, 1})));
    CHECK(isotropic_q(mk_q({1, 1, -2})));
    CHECK(isotropic_q(mk_q({1, 1, 1, 1, -7})));
    CHECK(!isotropic_q(mk_q({1, 1})));
    CHECK(isotropic_q(mk_q({1, -4})));
    CHECK(!isotropic_q(mk_q({1})));
    CHECK(isotropic_q(mk_q({0, 3})));
    CHECK(!isotropic_q(mk_q({1, 1, 1, 1})));  // positive definite
    CHECK(isotropic_q(mk_q({1, 1, -1, 1})));
    CHECK(!isotropic_q(mk_q({2, 3, 5})));    // definite at infinity
    CHECK(!isotropic_q(mk_q({1, -2, -3})));  // x^2 = 2y^2 + 3z^2 has no 2-adic solution
    CHECK(isotropic_q(mk_q({1, 1, 1, 1, 1, -7})));
}

TEST_CASE("height-bounded search never contradicts the local decider") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        int dim = 1 + static_cast<int>(rng.below(4));
        std::vector<Elem> cs;
        auto Q = A::make_q();
        for (int i = 0; i < dim; ++i) {
            long c = static_cast<long>(rng.range(1, 10)) * (rng.coin() ? 1 : -1);
            cs.push_back(A::from_int(Q, c));
        }
        auto q = make_form(Q, cs);
        bool dec = isotropic_q(q);
        bool brute = isotropic_bruteforce_q(q, 25);
        CAPTURE(form_str(q));
        CHECK(!(brute && !dec));
    }

    // ternary forms with small coefficients: height 40 finds the zero whenever one exists
    std::vector<std::vector<long>> cases = {
        {1, 1, -1}, {1, 1, -2}, {1, 1, -3}, {1, 2, -3}, {1, 1, 1},   {1, 2, 3},
        {1, -2, 5}, {2, 3, -5}, {1, 3, -5}, {1, 1, -7}, {2, -3, -5}, {3, 5, -7}};
    for (auto& cs : cases) {
        auto q = mk_q(cs);
        CAPTURE(form_str(q));
        CHECK(isotropic_q(q) == isotropic_bruteforce_q(q, 40));
    }
}

TEST_CASE("two-fold pfister triviality over rational function fields") {
    auto F5t = A::make_ratfunc(A::make_fp(5), "t");
    auto t = A::parse_elem(F5t, "t");
    CHECK(!pfister2_trivial_ratfunc(t, A::from_int(F5t, 2)));
    CHECK(pfister2_trivial_ratfunc(t, A::sub(A::one(F5t), t)));  // {t, 1-t} always splits
    CHECK(pfister2_trivial_ratfunc(A::from_int(F5t, 2), A::from_int(F5t, 3)));  // constants
    CHECK(pfister2_trivial_ratfunc(t, A::from_int(F5t, 4)));  // square entry
    CHECK(pfister2_trivial_ratfunc(t, t));  // {t,t} = {t,-1}, -1 a square mod 5

    auto F3s = A::make_ratfunc(A::make_fp(3), "s");
    auto s = A::parse_elem(F3s, "s");
    CHECK(!pfister2_trivial_ratfunc(s, s));  // -1 is not a square mod 3
}

TEST_CASE("nonzero pfister values are multiplicatively closed") {
    auto F = A::make_fp(7);
    auto pf = pfister(F, {A::from_int(F, 3)});
    std::vector<bool> rep(7, false);
    for (unsigned long i = 0; i < 7; ++i)
        for (unsigned long j = 0; j < 7; ++j) {
            if (i == 0 && j == 0) continue;
            auto val = evaluate(pf, {A::enum_elem(F, Int(i)), A::enum_elem(F, Int(j))});
            rep[A::elem_rank(val).get_ui()] = true;
        }
    for (unsigned long i = 1; i < 7; ++i)
        for (unsigned long j = 1; j < 7; ++j)
            if (rep[i] && rep[j]) {
                auto prod = A::mul(A::enum_elem(F, Int(i)), A::enum_elem(F, Int(j)));
                CHECK(rep[A::elem_rank(prod).get_ui()]);
            }
}
