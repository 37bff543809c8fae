#include <valdef/divisorsets.hpp>

#include <valdef/algebra.hpp>
#include <valdef/common.hpp>
#include <valdef/valuation.hpp>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace valdef::divisorsets {

namespace A = algebra;
namespace V = valuation;

using A::Poly;
using PK = V::Place::Kind;

namespace {

bool odd_constant_field(const Field& k) {
    return (k->kind == A::FieldDesc::Kind::fp || k->kind == A::FieldDesc::Kind::fqquot) &&
           A::field_char(k) != 2;
}

// K = k(t) with k an odd finite field or Q
void check_function_field(const Field& K) {
    if (K->kind != A::FieldDesc::Kind::ratfunc)
        throw precondition_error("divisor sets live over a rational function field");
    const Field& k = K->base;
    if (k->kind != A::FieldDesc::Kind::q && !odd_constant_field(k))
        throw precondition_error("constant field must be Q or finite of odd characteristic");
}

bool is_constant(const Elem& f) {
    return A::poly_deg(A::frac_num(f)) <= 0 && A::poly_deg(A::frac_den(f)) <= 0;
}

void check_same_field(const Elem& x, const Elem& f) {
    if (!A::field_eq(x.field(), f.field()))
        throw precondition_error("element and divisor-set element live in different fields");
}

// i-th nonzero constant, cycling over the units of a finite field
Elem nonzero_const(const Field& k, long i) {
    if (A::is_finite(k)) {
        Int units = A::field_card(k) - 1;
        return A::enum_elem(k, 1 + Int(i) % units);
    }
    return A::from_int(k, Int(i + 1));
}

Poly const_poly(const Elem& c) {
    if (A::is_zero(c)) return A::poly_zero(c.field());
    return A::Poly{c.field(), {c}};
}

// inverse of a modulo m, gcd(a, m) = 1
Poly poly_inv_mod(const Poly& a, const Poly& m) {
    Poly r0 = m, r1 = A::poly_mod(a, m);
    Poly s0 = A::poly_zero(m.field), s1 = A::poly_one(m.field);
    while (!A::poly_is_zero(r1)) {
        auto [q, r2] = A::poly_divmod(r0, r1);
        Poly s2 = A::poly_sub(s0, A::poly_mul(q, s1));
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if (A::poly_deg(r0) != 0) throw std::runtime_error("internal: inverse of non-unit");
    return A::poly_mod(A::poly_scale(s0, A::inv(r0.c[0])), m);
}

// monic irreducible of the given degree, distinct from every place polynomial
// used here because its degree exceeds theirs
Poly fresh_irreducible(const Field& k, int degree) {
    if (A::is_finite(k)) return A::nth_irreducible(k, degree, 0);
    std::vector<Elem> c(degree + 1, A::zero(k));
    c[0] = A::from_int(k, -2);
    c[degree] = A::one(k);
    return A::poly_from(k, std::move(c));
}

// An element of order exactly one at each listed place whose difference with
// xi also has order one wherever xi itself has order one. Built by CRT with
// constant leading residues; a failed avoidance check at a place is repaired
// by bumping that place's constant, which the CRT keeps independent of the
// others.
Elem first_order_avoiding(const Field& K, const std::vector<V::Place>& places, const Elem& xi) {
    if (places.empty()) throw std::runtime_error("internal: no places to approximate at");
    const Field& k = K->base;
    const Elem t = A::poly_to_elem(K, A::poly_x(k));

    std::vector<Poly> gs;
    bool has_inf = false;
    for (const auto& P : places) {
        if (P.kind == PK::func_irred)
            gs.push_back(P.g);
        else if (P.kind == PK::func_infty)
            has_inf = true;
        else
            throw precondition_error("expected places of a function field");
    }

    Elem c_inf = A::one(k);
    if (has_inf && !A::is_zero(xi) && V::order(V::place_func_infty(K), xi) == 1) {
        Elem forbidden = V::residue(V::place_func_infty(K), A::mul(xi, t));
        long i = 0;
        while (A::elem_eq(c_inf, forbidden)) c_inf = nonzero_const(k, ++i);
    }

    // CRT basis: E_i = g_i mod g_i^2, = 0 mod g_j^2 for j != i
    Poly M = A::poly_one(k);
    for (const auto& g : gs) M = A::poly_mul(M, A::poly_mul(g, g));
    std::vector<Poly> basis;
    for (const auto& g : gs) {
        Poly g2 = A::poly_mul(g, g);
        Poly Mi = A::poly_divmod(M, g2).first;
        Poly Ui = poly_inv_mod(Mi, g2);
        basis.push_back(A::poly_mod(A::poly_mul(A::poly_mul(g, Mi), Ui), M));
    }

    std::vector<long> bump(gs.size(), 0);
    long bump_inf = 0;
    for (int round = 0; round < 8; ++round) {
        Poly N = M;  // forces deg N = deg M with leading coefficient 1
        for (std::size_t i = 0; i < gs.size(); ++i) {
            Elem ci = nonzero_const(k, bump[i]);
            N = A::poly_add(N, A::poly_mul(const_poly(ci), basis[i]));
        }
        Elem cand = A::poly_to_elem(K, N);
        if (has_inf) {
            Poly D = fresh_irreducible(k, A::poly_deg(M) + 1);
            cand = A::mul(A::lift(K, c_inf), A::div(cand, A::poly_to_elem(K, D)));
        }

        bool ok = true;
        for (const auto& P : places) {
            bool fail = V::order(P, cand) != 1;
            if (!fail && !A::is_zero(xi) && V::order(P, xi) == 1)
                fail = A::elem_eq(cand, xi) || V::order(P, A::sub(cand, xi)) != 1;
            if (fail) {
                ok = false;
                if (P.kind == PK::func_infty)
                    c_inf = nonzero_const(k, ++bump_inf);
                else
                    for (std::size_t i = 0; i < gs.size(); ++i)
                        if (A::poly_eq(gs[i], P.g)) bump[i] += 1;
            }
        }
        if (ok) return cand;
    }
    throw std::runtime_error("internal: first-order approximation did not converge");
}

// prime divisors of a nonzero rational (numerator and denominator)
std::vector<Int> rational_primes(const Elem& x) {
    Rat r = abs(std::get<Rat>(x.rep()));
    std::vector<Int> out;
    for (Int n : {rat_num(r), rat_den(r)}) {
        for (Int p = 2; p * p <= n; ++p)
            if (n % p == 0) {
                out.push_back(p);
                while (n % p == 0) n /= p;
            }
        if (n > 1) out.push_back(n);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool is_rational_base(const Field& k0) { return k0->kind == A::FieldDesc::Kind::q; }

void check_param_base(const Field& k0) {
    if (is_rational_base(k0)) return;
    if (k0->kind == A::FieldDesc::Kind::ratfunc && odd_constant_field(k0->base)) return;
    throw precondition_error("parameter sets live over Q or an odd finite field's function field");
}

ParamSet make_delta_set(ParamSet::Tag tag, const Elem& delta) {
    if (A::is_zero(delta)) throw precondition_error("delta must be a unit");
    check_param_base(delta.field());
    return ParamSet{tag, delta.field(), delta, {}};
}

// udelta membership of a single candidate
bool udelta_member(const Elem& delta, const Elem& a) {
    const Field& k0 = a.field();
    Elem d = A::sub(a, A::one(k0));
    if (A::is_zero(d)) return true;
    if (is_rational_base(k0)) {
        if (V::order(V::place_qprime(2), d) <= 2) return false;
        for (const Int& p : rational_primes(delta))
            if (V::order(V::place_qprime(p), d) <= 0) return false;
        return true;
    }
    for (const auto& [v, o] : V::support(delta))
        if (V::order(v, d) <= 0) return false;
    return true;
}

}  // namespace

DivisorSet d_f(const Elem& f) {
    check_function_field(f.field());
    if (is_constant(f)) throw precondition_error("divisor set of a constant");
    DivisorSet d{f.field(), f, {}};
    for (const auto& [v, o] : V::support(f))
        if (o % 2 != 0) d.places.push_back(v);
    return d;
}

std::vector<V::Place> d0_places(const DivisorSet& d) {
    std::vector<V::Place> out;
    for (const auto& v : d.places)
        if (V::order(v, d.f) > 0) out.push_back(v);
    return out;
}

bool theta_member(const Elem& eps, const Elem& f) {
    check_same_field(eps, f);
    DivisorSet d = d_f(f);
    if (A::is_zero(eps)) return false;
    for (const auto& v : d.places)
        if (V::order(v, eps) % 2 == 0) return true;
    return false;
}

bool theta_bar_member(const Elem& xi, const Elem& f) {
    check_same_field(xi, f);
    DivisorSet d = d_f(f);
    if (A::is_zero(xi)) return false;
    for (const auto& v : d.places) {
        long o = V::order(v, xi);
        if (o <= 0 || o % 2 == 0) return false;
    }
    return true;
}

bool ideal_a_member(const Elem& xi, const Elem& f) {
    check_same_field(xi, f);
    DivisorSet d = d_f(f);
    if (d.places.empty()) throw precondition_error("empty divisor set");
    if (A::is_zero(xi)) return true;
    for (const auto& v : d.places)
        if (V::order(v, xi) <= 0) return false;
    return true;
}

std::pair<Elem, Elem> decompose_theta_bar(const Elem& xi, const Elem& f) {
    if (!ideal_a_member(xi, f)) throw precondition_error("not an ideal member");
    DivisorSet d = d_f(f);
    Elem first = first_order_avoiding(f.field(), d.places, xi);
    Elem second = A::sub(first, xi);
    for (const auto& v : d.places)
        if (V::order(v, first) != 1)
            throw std::runtime_error("internal: decomposition lost exact order");
    if (!theta_bar_member(first, f) || !theta_bar_member(second, f))
        throw std::runtime_error("internal: decomposition left the theta-bar set");
    return {first, second};
}

bool ring_r_member(const Elem& r, const Elem& f) {
    check_same_field(r, f);
    DivisorSet d = d_f(f);
    if (d.places.empty()) throw precondition_error("empty divisor set");
    if (A::is_zero(r)) return true;
    for (const auto& v : d.places)
        if (V::order(v, r) < 0) return false;
    return true;
}

bool ring_r0_member(const Elem& r, const Elem& f) {
    check_same_field(r, f);
    std::vector<V::Place> d0 = d0_places(d_f(f));
    if (d0.empty()) throw precondition_error("no positive place in the divisor set");
    if (A::is_zero(r)) return true;
    for (const auto& v : d0)
        if (V::order(v, r) < 0) return false;
    return true;
}

std::pair<Elem, Elem> factor_r0(const Elem& r, const Elem& f) {
    if (!ring_r0_member(r, f)) throw precondition_error("not a ring member");
    const Field& K = f.field();
    if (A::is_zero(r)) return {A::zero(K), A::one(K)};

    Elem fprime = A::div(f, A::add(f, A::one(K)));
    DivisorSet d = d_f(f);
    DivisorSet dp = d_f(fprime);

    // exact orders: match r on the positive part of D and on the poles of
    // f/(f+1); stay a unit at the poles of f
    std::vector<std::pair<V::Place, long>> targets;
    for (const auto& v : d.places) {
        long o = V::order(v, f);
        targets.emplace_back(v, o > 0 ? V::order(v, r) : 0);
    }
    for (const auto& v : dp.places)
        if (V::order(v, fprime) < 0) targets.emplace_back(v, V::order(v, r));

    Elem r1 = V::weak_approx(K, targets);
    Elem r2 = A::div(r, r1);
    if (!ring_r_member(r1, f) || !ring_r_member(r2, fprime) || !A::elem_eq(A::mul(r1, r2), r))
        throw std::runtime_error("internal: ring factorization failed its membership check");
    return {r1, r2};
}

ValuationRingReport valuation_ring_check(const Elem& f) {
    DivisorSet d = d_f(f);
    std::vector<V::Place> d0 = d0_places(d);
    if (d0.size() == 1) return {true, RingDefect::none, 1, std::nullopt};
    if (d0.empty()) return {false, RingDefect::no_positive_place, 0, std::nullopt};
    Elem w = V::weak_approx(f.field(), {{d0[0], 1}, {d0[1], -1}});
    if (ring_r0_member(w, f) || ring_r0_member(A::inv(w), f))
        throw std::runtime_error("internal: totality witness is a member");
    return {false, RingDefect::totality_fails, d0.size(), w};
}

ParamSet make_udelta(const Elem& delta) { return make_delta_set(ParamSet::Tag::udelta, delta); }
ParamSet make_sigma(const Elem& delta) { return make_delta_set(ParamSet::Tag::sigma, delta); }
ParamSet make_ubullet(const Elem& delta) { return make_delta_set(ParamSet::Tag::ubullet, delta); }

ParamSet make_delta_u0(const Field& k0, std::vector<V::Place> places) {
    check_param_base(k0);
    for (const auto& v : places) {
        if (v.kind == PK::q_infty) throw precondition_error("no discrete order at infinity of Q");
        bool of_q = v.kind == PK::q_prime;
        if (of_q != is_rational_base(k0) || (!of_q && !A::field_eq(v.field, k0)))
            throw precondition_error("place does not belong to the parameter field");
    }
    return ParamSet{ParamSet::Tag::delta_u0, k0, A::Elem{}, std::move(places)};
}

bool param_member(const ParamSet& s, const std::vector<Elem>& args) {
    std::size_t arity = s.tag == ParamSet::Tag::ubullet ? 2 : 1;
    if (args.size() != arity) throw precondition_error("wrong number of candidate components");
    for (const auto& a : args) {
        if (!A::field_eq(a.field(), s.k0))
            throw precondition_error("candidate lives in the wrong field");
        if (A::is_zero(a)) throw precondition_error("zero is outside every parameter set");
    }
    switch (s.tag) {
        case ParamSet::Tag::udelta:
        case ParamSet::Tag::ubullet:
            return udelta_member(s.delta, args[0]);
        case ParamSet::Tag::sigma: {
            if (is_rational_base(s.k0)) {
                for (const Int& p : rational_primes(s.delta))
                    if (V::order(V::place_qprime(p), args[0]) == 0) return false;
                return true;
            }
            for (const auto& [v, o] : V::support(s.delta))
                if (V::order(v, args[0]) == 0) return false;
            return true;
        }
        case ParamSet::Tag::delta_u0: {
            Elem d = A::sub(args[0], A::one(s.k0));
            if (A::is_zero(d)) return true;
            Elem two = A::from_int(s.k0, 2);
            for (const auto& v : s.u0_places)
                if (V::order(v, d) <= 2 * V::order(v, two)) return false;
            return true;
        }
    }
    throw std::logic_error("unreachable");
}

std::vector<V::Place> sigma_te(const Elem& t, int e) {
    check_function_field(t.field());
    if (is_constant(t)) throw precondition_error("degree sets of a constant");
    if (e < 1) throw precondition_error("order must be positive");
    std::vector<V::Place> out;
    for (const auto& [v, o] : V::support(t))
        if (o == e) out.push_back(v);
    return out;
}

bool degree_check(const Elem& t, int N) {
    check_function_field(t.field());
    if (is_constant(t)) throw precondition_error("degree sets of a constant");
    if (N < 0) throw precondition_error("degree must be nonnegative");
    std::vector<std::pair<long, int>> zeros;  // (order, residue degree)
    for (const auto& [v, o] : V::support(t))
        if (o > 0) zeros.emplace_back(o, V::residue_degree(v));

    std::vector<long> count_at(static_cast<std::size_t>(N) + 2, 0);
    long weighted = 0;
    for (const auto& [o, rd] : zeros) {
        if (o <= N + 1) count_at[static_cast<std::size_t>(o)] += 1;
        weighted += o * rd;
    }
    if (count_at[static_cast<std::size_t>(N) + 1] != 0) return false;
    for (long e = 1; e <= N; ++e)
        if (count_at[static_cast<std::size_t>(e)] > N) return false;
    return weighted == N;
}

}  // namespace valdef::divisorsets
