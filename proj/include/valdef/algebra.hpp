#pragma once

#include <valdef/common.hpp>

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

// Exact arithmetic over the field tower used everywhere else: prime fields,
// finite quotient extensions, Q, rational function fields and quadratic
// extensions. No floating point anywhere; every representation is canonical
// so that equality is structural.
namespace valdef::algebra {

struct FieldDesc;
using Field = std::shared_ptr<const FieldDesc>;

class Elem;

// Dense univariate polynomial over `field`; invariant: no trailing zero
// coefficient (zero polynomial has empty coeffs).
struct Poly {
    Field field;
    std::vector<Elem> c;
};

struct FieldDesc {
    enum class Kind { fp, fqquot, q, ratfunc, quadext };

    Kind kind;
    Int p;                           // fp: the prime
    Field base;                      // fqquot / ratfunc / quadext
    std::vector<Elem> modulus;       // fqquot: monic irreducible, ascending, incl leading 1
    std::string var;                 // ratfunc: variable name
    std::shared_ptr<const Elem> eps; // quadext: non-square of base
};

// --- element representation ---------------------------------------------

struct FracRep;  // ratfunc
struct QuadRep;  // quadext

// fp: residue in [0,p). q: canonical rational. fqquot: coefficient vector over
// base, trailing zeros trimmed (so zero is the empty vector).
using Rep = std::variant<Int, Rat, std::vector<Elem>, std::shared_ptr<const FracRep>,
                         std::shared_ptr<const QuadRep>>;

class Elem {
public:
    Elem() = default;
    Elem(Field f, Rep r) : field_(std::move(f)), rep_(std::move(r)) {}

    const Field& field() const { return field_; }
    const Rep& rep() const { return rep_; }

private:
    Field field_;
    Rep rep_;
};

// num/den reduced, den monic and nonzero; zero element is num = 0, den = 1.
struct FracRep {
    Poly num;
    Poly den;
};

// x + y*sqrt(eps)
struct QuadRep {
    Elem x;
    Elem y;
};

// --- descriptors ----------------------------------------------------------

Field make_fp(const Int& p);
// modulus given over F_p, ascending coefficients, monic, irreducible, deg >= 2
Field make_fq(const Int& p, const std::vector<Int>& modulus);
// general quotient tower step (base finite), used for residue fields
Field make_fqquot(const Field& base, const std::vector<Elem>& modulus);
Field make_q();
Field make_ratfunc(const Field& base, const std::string& var);
Field make_quadext(const Field& base, const Elem& eps);

bool field_eq(const Field& a, const Field& b);
// canonical text: Fp:7, Fq:3^2/[2,2,1], Q, RatFunc(Fp:5,u), QuadExt(Q,-1);
// internal towers print as Quot(<base>,[...]) which parse_field does not accept
std::string field_str(const Field& f);
Field parse_field(const std::string& text);

Int field_char(const Field& f);
bool is_finite(const Field& f);
// cardinality of a finite field
Int field_card(const Field& f);
// For fqquot: extension degree over base. 1 for fp.
int field_deg(const Field& f);

// --- element ops ----------------------------------------------------------

Elem zero(const Field& f);
Elem one(const Field& f);
Elem from_int(const Field& f, const Int& n);
Elem from_rat(const Field& f, const Rat& r);  // Q / characteristic-0 towers

bool is_zero(const Elem& a);
bool elem_eq(const Elem& a, const Elem& b);
// total order on elements of one field (for canonical sorting); lexicographic
// on the canonical representation
int elem_cmp(const Elem& a, const Elem& b);

Elem add(const Elem& a, const Elem& b);
Elem sub(const Elem& a, const Elem& b);
Elem neg(const Elem& a);
Elem mul(const Elem& a, const Elem& b);
Elem inv(const Elem& a);  // precondition_error on zero
Elem div(const Elem& a, const Elem& b);
Elem pow_elem(const Elem& a, const Int& n);  // n < 0 inverts

// Embed an element of the base field (constant embedding).
Elem lift(const Field& into, const Elem& base_elem);

// quadext accessors
Elem quad_x(const Elem& a);
Elem quad_y(const Elem& a);
Elem make_quad(const Field& f, const Elem& x, const Elem& y);

// ratfunc accessors
Poly frac_num(const Elem& a);
Poly frac_den(const Elem& a);
Elem make_frac(const Field& f, const Poly& num, const Poly& den);
Elem poly_to_elem(const Field& ratfunc_field, const Poly& p);

// element of a quotient extension from base-field coefficients (ascending,
// length <= extension degree; trailing zeros trimmed)
Elem from_coeff_vector(const Field& fqquot_field, std::vector<Elem> coeffs);

// multiplicative norm of a quotient-extension element down to its base field
Elem norm_to_base(const Elem& a);

// canonical_enumeration: the element of rank i (0 <= i < card). Rank order:
// fp ascending residues; fqquot by coefficient digits, constant coefficient
// least significant.
Elem enum_elem(const Field& f, const Int& i);
Int elem_rank(const Elem& a);

// is_square over Fp, Fq towers, Q and F_q(t) with odd q
bool is_square(const Elem& a);
// square root where is_square holds (finite fields and Q)
std::optional<Elem> sqrt_elem(const Elem& a);

// canonical element text; parse_elem accepts full expressions (+,-,*,/,^,
// parentheses, integer literals, the ratfunc variable, `w` for the finite
// generator, `sqrt` for the quadext root)
std::string elem_str(const Elem& a);
Elem parse_elem(const Field& f, const std::string& text);

// --- polynomials -----------------------------------------------------------

Poly poly_zero(const Field& f);
Poly poly_one(const Field& f);
Poly poly_x(const Field& f);
Poly poly_from(const Field& f, std::vector<Elem> coeffs);  // trims
Poly poly_from_ints(const Field& f, const std::vector<long>& coeffs);
int poly_deg(const Poly& p);  // deg 0 poly -> 0, zero poly -> -1
bool poly_is_zero(const Poly& p);
bool poly_eq(const Poly& a, const Poly& b);
int poly_cmp(const Poly& a, const Poly& b);
Elem poly_lc(const Poly& p);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_neg(const Poly& a);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, const Elem& s);
std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b);
Poly poly_mod(const Poly& a, const Poly& b);
Poly poly_gcd(const Poly& a, const Poly& b);  // monic
Poly poly_monic(const Poly& a);
Poly poly_derivative(const Poly& a);
Elem poly_eval(const Poly& a, const Elem& x);
Poly poly_pow_mod(const Poly& a, const Int& n, const Poly& m);
std::string poly_str(const Poly& p, const std::string& var);
Poly parse_poly(const Field& f, const std::string& var, const std::string& text);

// Monic irreducible factorization, deterministic (fixed-seed splitting).
// Finite base fields use squarefree + distinct-degree + equal-degree
// splitting; Q uses rational roots plus Kronecker interpolation (adequate for
// the small degrees this artifact works at). Returns {factor, multiplicity}
// sorted canonically; the unit factor is returned separately.
struct Factorization {
    Elem unit;
    std::vector<std::pair<Poly, int>> factors;
};
Factorization factor_poly(const Poly& p);
bool poly_irreducible(const Poly& p);  // deg >= 1

// n-th monic irreducible of given degree in rank order over a finite field
Poly nth_irreducible(const Field& f, int degree, int skip_rank = 0);

// --- fast finite-field engine ----------------------------------------------

// Log/antilog (Zech) tables built from the exact backend; index space is the
// canonical_enumeration rank, so table ops agree with Elem ops by
// construction. Cap keeps memory bounded.
class ZechField {
public:
    static constexpr std::uint64_t kMaxCard = 1u << 20;

    static std::shared_ptr<const ZechField> get(const Field& f);  // cached

    std::uint32_t card() const { return q_; }
    std::uint32_t zero() const { return 0; }
    std::uint32_t one() const { return one_; }
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t neg(std::uint32_t a) const;
    std::uint32_t inv(std::uint32_t a) const;  // precondition_error on zero
    bool is_square(std::uint32_t a) const;

    const Field& field() const { return field_; }

private:
    explicit ZechField(const Field& f);

    Field field_;
    std::uint32_t q_ = 0;
    std::uint32_t one_ = 0;
    std::uint32_t neg_log_ = 0;              // dlog of -1
    std::vector<std::uint32_t> exp_;         // exp_[i] = rank(g^i), size q-1
    std::vector<std::uint32_t> log_;         // log_[rank] for rank != 0
    std::vector<std::uint32_t> zech_;        // zech_[k] = log(1 + g^k), q-1 marks -inf
};

}  // namespace valdef::algebra
