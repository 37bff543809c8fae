#pragma once

#include <valdef/common.hpp>
#include <valdef/fol.hpp>

#include <vector>

// Formula emitters: Pfister isotropy equations, the quadratic-extension
// relativization pass, the dimension sentences, the valuation-ring membership
// formula and the degree/isomorphy sentences built on top of it. Everything
// emitted is deterministic and round-trips through the S-expression format;
// subformulas cited from the literature but not constructed here appear as
// named macro placeholders.
namespace valdef::recipe {

using fol::FormulaPtr;
using fol::TermPtr;

struct EmitterConfig {
    int d;       // Kronecker dimension, >= 2
    int e;       // d - 2 quantified parameters
    Int char_p;  // 0 or an odd prime
};

EmitterConfig make_config(int d, const Int& char_p);

// exists x_1..x_{2^r}, not all zero, with sum over subsets S of
// prod_{i in S}(-a_i) * x_S^2 equal to zero. |coeffs| = r; the x pool is
// renamed away from any variable of the coefficient terms.
FormulaPtr emit_pfister_eq(const std::vector<TermPtr>& coeffs, int r);

// Interpret the formula inside the quadratic extension by eps: every plain
// bound variable becomes a coordinate pair, terms are rewritten by the pair
// arithmetic (a,b)(c,d) = (ac + eps bd, ad + bc), equality is componentwise.
// Free variables and relativized binders keep base-field semantics (second
// coordinate zero), and so do plain-bound variables that feed a SetRef
// parameter term; macros pass through untouched. Semantics-preserving
// whenever eps is not a square.
FormulaPtr relativize_to_quadratic_ext(const FormulaPtr& f, const TermPtr& eps);

// (exists a(r): the r-fold form misses zero) and (forall a(r+1): the
// (r+1)-fold form hits zero), both read inside K[i] via a square case split
// on -1. Closed, pure ring signature.
FormulaPtr emit_phi0(int r);

// dimension-d sentence: (phi0(d) and 2 = 0) or (phi0(d+1) and 2 != 0)
FormulaPtr emit_phi_d(int d);

// exists d1 forall a1 in Sigma(d1) ... exists de forall ae in Sigma(de)
// forall d0 exists (up0, u0) in Ubullet(d0): the (e+3)-tuple form
// (up0, u0, t1 - a1, ..., te - ae, f) misses zero. Free variables f, t1..te.
FormulaPtr emit_phi_ft(int e);

// membership of x in the valuation-candidate ring attached to (f, t1..te),
// built through the theta chain (double square case split), its closure, the
// difference ideal, the multiplier ring and the two-factor product, wrapped
// with the totality-and-properness clauses. Free variables x, f, t1..t_{d-2};
// macro placeholders poonen_psi and poonen_constants.
FormulaPtr emit_val_d(int d);

// the free variable u has degree N: no place of order N + 1, at most N
// places of each order (quantified distinctness), and some composition of N
// into order-times-residue-dimension parts is realized exactly. N >= 1.
FormulaPtr emit_deg_N(int N);

// one monomial coeff * u^u_exp * prod t_i^t_exp[i] of the defining equation
struct FkMonomial {
    Int coeff;
    int u_exp;
    std::vector<int> t_exp;  // length e
};

struct IsoData {
    Int characteristic;  // 0 or an odd prime
    int e;
    std::vector<FkMonomial> fk;  // monic and separable in u
    int N;
};

// closed sentence: characteristic clause, independence and constant-field
// macros, the cleared defining equation f_K(t, u) = 0, the rumely_iso
// placeholder and the degree-N clause for u
FormulaPtr emit_iso_sentence(const IsoData& data);

}  // namespace valdef::recipe
