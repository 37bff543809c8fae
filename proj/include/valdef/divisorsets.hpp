#pragma once

#include <valdef/algebra.hpp>
#include <valdef/common.hpp>
#include <valdef/valuation.hpp>

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

// Decidable oracles for the definable subsets of a rational function field
// K = k(t) that the sentence emitters quantify over: the odd-order divisor
// set of an element, the theta sets and the ideal/ring pair they generate,
// the unit parameter sets over the constant field, and the degree sets of a
// non-constant element. Everything is computed from exact valuations.
namespace valdef::divisorsets {

using algebra::Elem;
using algebra::Field;

// Places of K where f has odd order (including infinity), canonically sorted.
// Empty exactly when f is a square times an even-degree unit pattern.
struct DivisorSet {
    Field field;
    Elem f;
    std::vector<valuation::Place> places;
};

// K = k(t) with k finite of odd characteristic or Q; f non-constant
DivisorSet d_f(const Elem& f);

// the places of D where f has positive order
std::vector<valuation::Place> d0_places(const DivisorSet& d);

// some place of D sees even order of eps; eps = 0 is never a member
bool theta_member(const Elem& eps, const Elem& f);

// every place of D sees positive odd order of xi; xi = 0 is never a member.
// Vacuously true when D is empty.
bool theta_bar_member(const Elem& xi, const Elem& f);

// positive order at every place of D (the ideal cutting out D); requires D
// nonempty. Zero is a member.
bool ideal_a_member(const Elem& xi, const Elem& f);

// xi = first - second with both components theta_bar members of order exactly
// one along D; errors when xi is not an ideal member
std::pair<Elem, Elem> decompose_theta_bar(const Elem& xi, const Elem& f);

// nonnegative order at every place of D (multipliers of the ideal); requires
// D nonempty
bool ring_r_member(const Elem& r, const Elem& f);

// nonnegative order at every positive place of D; requires that part nonempty
bool ring_r0_member(const Elem& r, const Elem& f);

// r = r1 * r2 with r1 a ring member for f and r2 one for f/(f+1); errors when
// r is not an r0 ring member
std::pair<Elem, Elem> factor_r0(const Elem& r, const Elem& f);

enum class RingDefect { none, no_positive_place, totality_fails };

// the r0 ring is a valuation ring iff D has exactly one positive place; for
// two or more the witness violates totality (neither it nor its inverse is a
// member), re-checked by membership before being returned
struct ValuationRingReport {
    bool is_valuation_ring;
    RingDefect defect;
    std::size_t d0_size;
    std::optional<Elem> totality_witness;
};

ValuationRingReport valuation_ring_check(const Elem& f);

// Parameter sets over a constant field k0 (Q or a rational function field
// over an odd finite field). udelta/sigma/ubullet carry the modulus delta;
// delta_u0 carries the finite place set its congruence condition ranges over.
struct ParamSet {
    enum class Tag { udelta, sigma, ubullet, delta_u0 };
    Tag tag;
    Field k0;
    Elem delta;
    std::vector<valuation::Place> u0_places;
};

ParamSet make_udelta(const Elem& delta);
ParamSet make_sigma(const Elem& delta);
ParamSet make_ubullet(const Elem& delta);
ParamSet make_delta_u0(const Field& k0, std::vector<valuation::Place> places);

// udelta: a = 1, or a - 1 vanishes to order > 2 v(2) at the place over 2 and
//         to positive order at every place of delta;
// sigma: a has nonzero order wherever delta does;
// ubullet: pair (u, c) with u a udelta member and c any unit;
// delta_u0: a - 1 vanishes to order > 2 v(2) at every carried place.
// Arity 1 except ubullet (2); zero components are errors.
bool param_member(const ParamSet& s, const std::vector<Elem>& args);

// places where t has order exactly e >= 1 (including infinity)
std::vector<valuation::Place> sigma_te(const Elem& t, int e);

// t generates a subfield of index N: no place of order N + 1, at most N
// places of any order, and the orders weighted by residue degree sum to N
bool degree_check(const Elem& t, int N);

}  // namespace valdef::divisorsets
