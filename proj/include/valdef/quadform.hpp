#pragma once

#include <valdef/algebra.hpp>
#include <valdef/valuation.hpp>

#include <string>
#include <vector>

namespace valdef::quadform {

using algebra::Elem;
using algebra::Field;

// diagonal quadratic form c_1 x_1^2 + ... + c_n x_n^2
struct QForm {
    Field field;
    std::vector<Elem> coeffs;  // length = dimension, at least 1
};

QForm make_form(const Field& field, std::vector<Elem> coeffs);
int form_dim(const QForm& q);
bool form_degenerate(const QForm& q);
std::string form_str(const QForm& q);

// <<a_1,...,a_r>>, the tensor product of the <1, -a_i>. The 2^r coefficients
// come in binary-counter order: the coefficient at index S (as a bit mask) is
// the product of -a_{i+1} over the set bits i of S. pfister({}) = <1>.
QForm pfister(const Field& field, const std::vector<Elem>& a);

Elem evaluate(const QForm& q, const std::vector<Elem>& x);

// isotropy over a finite field, dimension-cased (no search)
bool isotropic_fq(const QForm& q);

// exhaustive searches; cross-check oracles for the deciders above and below
bool isotropic_bruteforce_fq(const QForm& q);
bool isotropic_bruteforce_q(const QForm& q, long height);

// (a,b)_v in {+1,-1} for v a finite prime or the real place, by the closed
// formulas in valuations and residue characters
int hilbert_symbol(const Rat& a, const Rat& b, const valuation::Place& v);

// isotropy over Q by local conditions, dimension-cased
bool isotropic_q(const QForm& q);

// triviality of <<a,b>> over F_q(t), q odd: at every place carrying a or b
// (and at infinity) the tame residue of the pair must be a square in the
// residue field
bool pfister2_trivial_ratfunc(const Elem& a, const Elem& b);

}  // namespace valdef::quadform
