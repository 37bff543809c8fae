#pragma once

#include <valdef/algebra.hpp>
#include <valdef/common.hpp>

#include <string>
#include <utility>
#include <vector>

// Places of Q and of rational function fields k(t): discrete orders, residue
// maps, behaviour under adjoining a square root, weak approximation, and
// rank-2 composite valuations with residue fields of degree <= 2 over Q.
namespace valdef::valuation {

using algebra::Elem;
using algebra::Field;
using algebra::Poly;

struct Place {
    enum class Kind { q_prime, q_infty, func_irred, func_infty };
    Kind kind;
    Field field;  // Q for the q_* kinds, the rational function field otherwise
    Int p;        // q_prime
    Poly g;       // func_irred: monic irreducible over the constant field
};

Place place_qprime(const Int& p);
Place place_qinfty();
Place place_func_irred(const Field& ratfunc, const Poly& g);
Place place_func_infty(const Field& ratfunc);

bool place_eq(const Place& a, const Place& b);
int place_cmp(const Place& a, const Place& b);  // total order for canonical sets

// text forms: "p:7", "inf", "irr:[0,1]" (ascending coefficients), "finf"
std::string place_str(const Place& v);
Place parse_place(const Field& field, const std::string& text);

// 1 for places of Q and for infinity; deg(g) for finite function-field places
int residue_degree(const Place& v);

// kappa(v). q_prime -> F_p; func_irred deg 1 / func_infty -> constant field;
// finite constant field -> quotient extension; Q with deg 2 -> QuadExt(Q, d).
// Errors: q_infty; degree > 2 over Q.
Field residue_field(const Place& v);

long order(const Place& v, const Elem& x);  // x != 0; q_infty has no discrete order

// image of x in kappa(v); requires order(v, x) >= 0
Elem residue(const Place& v, const Elem& x);

// all places with nonzero order (including infinity), canonically sorted
std::vector<std::pair<Place, long>> support(const Elem& f);

// splitting data for K[sqrt(eps)] above v: (ramification index, residue degree)
struct SplitPart {
    int e;
    int f;
};
// residue characteristic must not be 2; eps must not be a square
std::vector<SplitPart> extend_to_sqrt(const Place& v, const Elem& eps);

// an element with order(v, .) exactly targets[v] at every listed place of k(t);
// unlisted places unconstrained; the postcondition is re-checked by order()
Elem weak_approx(const Field& ratfunc, const std::vector<std::pair<Place, long>>& targets);

// --- places of quadratic number fields -------------------------------------------

enum class QfSplitKind { split, inert, ramified };

// behaviour of the rational prime p in Q(sqrt(d)) (K a QuadExt over Q)
QfSplitKind qf_splitting(const Field& K, const Int& p);

// place of K = Q(sqrt(d)) above p; branch picks one of the two primes when p
// splits (0/1, ordered by the canonical square root of d in F_p), -1 otherwise
struct QfPlace {
    Field K;
    Int p;
    int branch;
};

QfPlace qf_place(const Field& K, const Int& p, int branch = -1);
long qf_order(const QfPlace& v, const Elem& x);  // x != 0 in K

// --- rank-2 composites -------------------------------------------------------------

// v1 = (inner place of kappa(P)) after P, value group Z x Z lexicographic.
// P is a geometric place of Q(t) with [kappa(P):Q] <= 2; the inner place is
// the p-adic one (branch as in QfPlace when p splits in kappa(P)).
struct CompositePlace {
    Place P;
    Int p;
    int branch;
};

CompositePlace make_composite(const Place& P, const Int& p, int branch = -1);

// (order at P, inner order of the unit-part residue)
std::pair<long, long> composite_order(const CompositePlace& c, const Elem& f);

// text form: "comp(irr:[1,0,1], p:2)"; split branches as "p:5#0" / "p:5#1"
std::string composite_str(const CompositePlace& c);
CompositePlace parse_composite(const Field& ratfunc, const std::string& text);

}  // namespace valdef::valuation
