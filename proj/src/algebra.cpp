#include <valdef/algebra.hpp>

#include <algorithm>
#include <cassert>
#include <cctype>

namespace valdef::algebra {

namespace {

using Kind = FieldDesc::Kind;

[[noreturn]] void bad_field(const char* what) {
    throw precondition_error(std::string("field mismatch or unsupported kind: ") + what);
}

const std::vector<Elem>& coeffs_of(const Elem& a) { return std::get<std::vector<Elem>>(a.rep()); }

std::vector<Elem> trim(std::vector<Elem> v) {
    while (!v.empty() && is_zero(v.back())) v.pop_back();
    return v;
}

Elem from_coeffs(const Field& f, std::vector<Elem> v) { return Elem(f, Rep(trim(std::move(v)))); }

const FracRep& frac_of(const Elem& a) { return *std::get<std::shared_ptr<const FracRep>>(a.rep()); }
const QuadRep& quad_of(const Elem& a) { return *std::get<std::shared_ptr<const QuadRep>>(a.rep()); }

Elem make_frac_raw(const Field& f, Poly num, Poly den) {
    auto rep = std::make_shared<FracRep>();
    rep->num = std::move(num);
    rep->den = std::move(den);
    return Elem(f, Rep(std::shared_ptr<const FracRep>(rep)));
}

}  // namespace

// --- descriptors ------------------------------------------------------------

Field make_fp(const Int& p) {
    if (p < 2 || mpz_probab_prime_p(p.get_mpz_t(), 40) == 0)
        throw precondition_error("Fp characteristic must be prime: " + p.get_str());
    auto d = std::make_shared<FieldDesc>();
    d->kind = Kind::fp;
    d->p = p;
    return d;
}

Field make_fqquot(const Field& base, const std::vector<Elem>& modulus) {
    if (!is_finite(base)) throw precondition_error("quotient extension needs a finite base");
    std::vector<Elem> m = trim(modulus);
    if (m.size() < 3) throw precondition_error("extension modulus must have degree >= 2");
    for (const Elem& c : m)
        if (!field_eq(c.field(), base)) throw precondition_error("modulus coefficients must live in the base field");
    if (!elem_eq(m.back(), one(base))) throw precondition_error("extension modulus must be monic");
    Poly mp{base, m};
    if (!poly_irreducible(mp)) throw precondition_error("extension modulus must be irreducible");
    auto d = std::make_shared<FieldDesc>();
    d->kind = Kind::fqquot;
    d->base = base;
    d->modulus = std::move(m);
    return d;
}

Field make_fq(const Int& p, const std::vector<Int>& modulus) {
    Field fp = make_fp(p);
    std::vector<Elem> m;
    m.reserve(modulus.size());
    for (const Int& c : modulus) m.push_back(from_int(fp, c));
    return make_fqquot(fp, m);
}

Field make_q() {
    auto d = std::make_shared<FieldDesc>();
    d->kind = Kind::q;
    return d;
}

Field make_ratfunc(const Field& base, const std::string& var) {
    if (var.empty()) throw precondition_error("rational function field needs a variable name");
    for (char ch : var)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'))
            throw precondition_error("bad variable name: " + var);
    if (!std::isalpha(static_cast<unsigned char>(var[0])))
        throw precondition_error("variable must start with a letter: " + var);
    auto d = std::make_shared<FieldDesc>();
    d->kind = Kind::ratfunc;
    d->base = base;
    d->var = var;
    return d;
}

Field make_quadext(const Field& base, const Elem& eps) {
    if (!field_eq(eps.field(), base)) throw precondition_error("quadext eps must live in the base field");
    if (is_zero(eps)) throw precondition_error("quadext eps must be nonzero");
    if (is_square(eps)) throw precondition_error("quadext eps must be a non-square (a square gives a ring, not a field)");
    auto d = std::make_shared<FieldDesc>();
    d->kind = Kind::quadext;
    d->base = base;
    d->eps = std::make_shared<Elem>(eps);
    return d;
}

bool field_eq(const Field& a, const Field& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Kind::fp: return a->p == b->p;
        case Kind::q: return true;
        case Kind::fqquot: {
            if (!field_eq(a->base, b->base)) return false;
            if (a->modulus.size() != b->modulus.size()) return false;
            for (size_t i = 0; i < a->modulus.size(); ++i)
                if (!elem_eq(a->modulus[i], b->modulus[i])) return false;
            return true;
        }
        case Kind::ratfunc: return a->var == b->var && field_eq(a->base, b->base);
        case Kind::quadext: return field_eq(a->base, b->base) && elem_eq(*a->eps, *b->eps);
    }
    return false;
}

Int field_char(const Field& f) {
    switch (f->kind) {
        case Kind::fp: return f->p;
        case Kind::q: return 0;
        default: return field_char(f->base);
    }
}

bool is_finite(const Field& f) {
    switch (f->kind) {
        case Kind::fp: return true;
        case Kind::fqquot: return is_finite(f->base);
        default: return false;
    }
}

Int field_card(const Field& f) {
    switch (f->kind) {
        case Kind::fp: return f->p;
        case Kind::fqquot: {
            Int b = field_card(f->base);
            Int r;
            mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(f->modulus.size() - 1));
            return r;
        }
        default: throw precondition_error("cardinality of an infinite field");
    }
}

int field_deg(const Field& f) {
    if (f->kind == Kind::fqquot) return static_cast<int>(f->modulus.size()) - 1;
    return 1;
}

// --- element basics ----------------------------------------------------------

Elem zero(const Field& f) {
    switch (f->kind) {
        case Kind::fp: return Elem(f, Rep(Int(0)));
        case Kind::q: return Elem(f, Rep(Rat(0)));
        case Kind::fqquot: return Elem(f, Rep(std::vector<Elem>{}));
        case Kind::ratfunc: return make_frac_raw(f, poly_zero(f->base), poly_one(f->base));
        case Kind::quadext: {
            auto rep = std::make_shared<QuadRep>();
            rep->x = zero(f->base);
            rep->y = zero(f->base);
            return Elem(f, Rep(std::shared_ptr<const QuadRep>(rep)));
        }
    }
    bad_field("zero");
}

Elem one(const Field& f) { return from_int(f, 1); }

Elem from_int(const Field& f, const Int& n) {
    switch (f->kind) {
        case Kind::fp: return Elem(f, Rep(mod_norm(n, f->p)));
        case Kind::q: return Elem(f, Rep(Rat(n)));
        case Kind::fqquot: {
            Elem c = from_int(f->base, n);
            std::vector<Elem> v;
            if (!is_zero(c)) v.push_back(c);
            return Elem(f, Rep(std::move(v)));
        }
        case Kind::ratfunc: {
            Elem c = from_int(f->base, n);
            Poly num = is_zero(c) ? poly_zero(f->base) : Poly{f->base, {c}};
            return make_frac_raw(f, std::move(num), poly_one(f->base));
        }
        case Kind::quadext: {
            auto rep = std::make_shared<QuadRep>();
            rep->x = from_int(f->base, n);
            rep->y = zero(f->base);
            return Elem(f, Rep(std::shared_ptr<const QuadRep>(rep)));
        }
    }
    bad_field("from_int");
}

Elem from_rat(const Field& f, const Rat& r) {
    if (f->kind == Kind::q) return Elem(f, Rep(r));
    if (field_char(f) != 0) throw precondition_error("rational constants need characteristic 0");
    return div(from_int(f, rat_num(r)), from_int(f, rat_den(r)));
}

bool is_zero(const Elem& a) {
    switch (a.field()->kind) {
        case Kind::fp: return std::get<Int>(a.rep()) == 0;
        case Kind::q: return std::get<Rat>(a.rep()) == 0;
        case Kind::fqquot: return coeffs_of(a).empty();
        case Kind::ratfunc: return poly_is_zero(frac_of(a).num);
        case Kind::quadext: return is_zero(quad_of(a).x) && is_zero(quad_of(a).y);
    }
    bad_field("is_zero");
}

bool elem_eq(const Elem& a, const Elem& b) { return elem_cmp(a, b) == 0; }

int elem_cmp(const Elem& a, const Elem& b) {
    if (!field_eq(a.field(), b.field())) throw precondition_error("comparing elements of different fields");
    switch (a.field()->kind) {
        case Kind::fp: {
            const Int& x = std::get<Int>(a.rep());
            const Int& y = std::get<Int>(b.rep());
            return cmp(x, y);
        }
        case Kind::q: {
            const Rat& x = std::get<Rat>(a.rep());
            const Rat& y = std::get<Rat>(b.rep());
            return cmp(x, y);
        }
        case Kind::fqquot: {
            const auto& x = coeffs_of(a);
            const auto& y = coeffs_of(b);
            if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
            for (size_t i = x.size(); i-- > 0;) {
                int c = elem_cmp(x[i], y[i]);
                if (c != 0) return c;
            }
            return 0;
        }
        case Kind::ratfunc: {
            int c = poly_cmp(frac_of(a).num, frac_of(b).num);
            if (c != 0) return c;
            return poly_cmp(frac_of(a).den, frac_of(b).den);
        }
        case Kind::quadext: {
            int c = elem_cmp(quad_of(a).x, quad_of(b).x);
            if (c != 0) return c;
            return elem_cmp(quad_of(a).y, quad_of(b).y);
        }
    }
    bad_field("elem_cmp");
}

// --- arithmetic ---------------------------------------------------------------

namespace {

void check_same(const Elem& a, const Elem& b) {
    if (!field_eq(a.field(), b.field())) throw precondition_error("operands live in different fields");
}

// reduce a fraction to canonical form: gcd 1, den monic
Elem frac_canon(const Field& f, Poly num, Poly den) {
    if (poly_is_zero(den)) throw precondition_error("division by zero rational function");
    if (poly_is_zero(num)) return make_frac_raw(f, poly_zero(f->base), poly_one(f->base));
    Poly g = poly_gcd(num, den);
    if (poly_deg(g) > 0) {
        num = poly_divmod(num, g).first;
        den = poly_divmod(den, g).first;
    }
    Elem lc = poly_lc(den);
    if (!elem_eq(lc, one(f->base))) {
        Elem s = inv(lc);
        num = poly_scale(num, s);
        den = poly_scale(den, s);
    }
    return make_frac_raw(f, std::move(num), std::move(den));
}

}  // namespace

Elem add(const Elem& a, const Elem& b) {
    check_same(a, b);
    const Field& f = a.field();
    switch (f->kind) {
        case Kind::fp: return Elem(f, Rep(mod_norm(std::get<Int>(a.rep()) + std::get<Int>(b.rep()), f->p)));
        case Kind::q: return Elem(f, Rep(Rat(std::get<Rat>(a.rep()) + std::get<Rat>(b.rep()))));
        case Kind::fqquot: {
            const auto& x = coeffs_of(a);
            const auto& y = coeffs_of(b);
            std::vector<Elem> r(std::max(x.size(), y.size()), zero(f->base));
            for (size_t i = 0; i < x.size(); ++i) r[i] = x[i];
            for (size_t i = 0; i < y.size(); ++i) r[i] = add(r[i], y[i]);
            return from_coeffs(f, std::move(r));
        }
        case Kind::ratfunc: {
            const FracRep& x = frac_of(a);
            const FracRep& y = frac_of(b);
            Poly num = poly_add(poly_mul(x.num, y.den), poly_mul(y.num, x.den));
            Poly den = poly_mul(x.den, y.den);
            return frac_canon(f, std::move(num), std::move(den));
        }
        case Kind::quadext: {
            auto rep = std::make_shared<QuadRep>();
            rep->x = add(quad_of(a).x, quad_of(b).x);
            rep->y = add(quad_of(a).y, quad_of(b).y);
            return Elem(f, Rep(std::shared_ptr<const QuadRep>(rep)));
        }
    }
    bad_field("add");
}

Elem neg(const Elem& a) {
    const Field& f = a.field();
    switch (f->kind) {
        case Kind::fp: return Elem(f, Rep(mod_norm(-std::get<Int>(a.rep()), f->p)));
        case Kind::q: return Elem(f, Rep(Rat(-std::get<Rat>(a.rep()))));
        case Kind::fqquot: {
            std::vector<Elem> r = coeffs_of(a);
            for (Elem& c : r) c = neg(c);
            return Elem(f, Rep(std::move(r)));
        }
        case Kind::ratfunc: return make_frac_raw(f, poly_neg(frac_of(a).num), frac_of(a).den);
        case Kind::quadext: {
            auto rep = std::make_shared<QuadRep>();
            rep->x = neg(quad_of(a).x);
            rep->y = neg(quad_of(a).y);
            return Elem(f, Rep(std::shared_ptr<const QuadRep>(rep)));
        }
    }
    bad_field("neg");
}

Elem sub(const Elem& a, const Elem& b) { return add(a, neg(b)); }

Elem mul(const Elem& a, const Elem& b) {
    check_same(a, b);
    const Field& f = a.field();
    switch (f->kind) {
        case Kind::fp: return Elem(f, Rep(mod_norm(std::get<Int>(a.rep()) * std::get<Int>(b.rep()), f->p)));
        case Kind::q: return Elem(f, Rep(Rat(std::get<Rat>(a.rep()) * std::get<Rat>(b.rep()))));
        case Kind::fqquot: {
            Poly pa{f->base, coeffs_of(a)};
            Poly pb{f->base, coeffs_of(b)};
            Poly m{f->base, f->modulus};
            Poly r = poly_mod(poly_mul(pa, pb), m);
            return Elem(f, Rep(std::move(r.c)));
        }
        case Kind::ratfunc: {
            const FracRep& x = frac_of(a);
            const FracRep& y = frac_of(b);
            return frac_canon(f, poly_mul(x.num, y.num), poly_mul(x.den, y.den));
        }
        case Kind::quadext: {
            const QuadRep& x = quad_of(a);
            const QuadRep& y = quad_of(b);
            const Elem& e = *f->eps;
            auto rep = std::make_shared<QuadRep>();
            rep->x = add(mul(x.x, y.x), mul(e, mul(x.y, y.y)));
            rep->y = add(mul(x.x, y.y), mul(x.y, y.x));
            return Elem(f, Rep(std::shared_ptr<const QuadRep>(rep)));
        }
    }
    bad_field("mul");
}

Elem inv(const Elem& a) {
    if (is_zero(a)) throw precondition_error("inverse of zero");
    const Field& f = a.field();
    switch (f->kind) {
        case Kind::fp: {
            Int r;
            if (mpz_invert(r.get_mpz_t(), std::get<Int>(a.rep()).get_mpz_t(), f->p.get_mpz_t()) == 0)
                throw precondition_error("not invertible");
            return Elem(f, Rep(std::move(r)));
        }
        case Kind::q: return Elem(f, Rep(Rat(1 / std::get<Rat>(a.rep()))));
        case Kind::fqquot: {
            // extended Euclid against the modulus
            Poly m{f->base, f->modulus};
            Poly r0 = m, r1{f->base, coeffs_of(a)};
            Poly s0 = poly_zero(f->base), s1 = poly_one(f->base);
            while (!poly_is_zero(r1)) {
                auto [q, r2] = poly_divmod(r0, r1);
                Poly s2 = poly_sub(s0, poly_mul(q, s1));
                r0 = r1;
                r1 = r2;
                s0 = s1;
                s1 = s2;
            }
            // r0 = gcd, a unit since the modulus is irreducible
            if (poly_deg(r0) != 0) throw precondition_error("not invertible modulo the field modulus");
            Poly res = poly_scale(s0, inv(r0.c[0]));
            res = poly_mod(res, m);
            return Elem(f, Rep(std::move(res.c)));
        }
        case Kind::ratfunc: {
            const FracRep& x = frac_of(a);
            return frac_canon(f, x.den, x.num);
        }
        case Kind::quadext: {
            // 1/(x + y s) = (x - y s) / (x^2 - eps y^2)
            const QuadRep& x = quad_of(a);
            const Elem& e = *f->eps;
            Elem nrm = sub(mul(x.x, x.x), mul(e, mul(x.y, x.y)));
            if (is_zero(nrm)) throw precondition_error("quadext eps is a square: zero norm");
            Elem ni = inv(nrm);
            auto rep = std::make_shared<QuadRep>();
            rep->x = mul(x.x, ni);
            rep->y = neg(mul(x.y, ni));
            return Elem(f, Rep(std::shared_ptr<const QuadRep>(rep)));
        }
    }
    bad_field("inv");
}

Elem div(const Elem& a, const Elem& b) { return mul(a, inv(b)); }

Elem pow_elem(const Elem& a, const Int& n) {
    if (n < 0) return pow_elem(inv(a), -n);
    Elem r = one(a.field());
    Elem base = a;
    Int e = n;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = mul(r, base);
        e >>= 1;
        if (e > 0) base = mul(base, base);
    }
    return r;
}

Elem lift(const Field& into, const Elem& base_elem) {
    if (field_eq(into, base_elem.field())) return base_elem;
    switch (into->kind) {
        case Kind::fqquot: {
            Elem c = lift(into->base, base_elem);
            std::vector<Elem> v;
            if (!is_zero(c)) v.push_back(c);
            return Elem(into, Rep(std::move(v)));
        }
        case Kind::ratfunc: {
            Elem c = lift(into->base, base_elem);
            Poly num = is_zero(c) ? poly_zero(into->base) : Poly{into->base, {c}};
            return make_frac_raw(into, std::move(num), poly_one(into->base));
        }
        case Kind::quadext: {
            auto rep = std::make_shared<QuadRep>();
            rep->x = lift(into->base, base_elem);
            rep->y = zero(into->base);
            return Elem(into, Rep(std::shared_ptr<const QuadRep>(rep)));
        }
        default: throw precondition_error("cannot embed into this field");
    }
}

Elem quad_x(const Elem& a) {
    if (a.field()->kind != Kind::quadext) throw precondition_error("quad_x on non-quadext element");
    return quad_of(a).x;
}

Elem quad_y(const Elem& a) {
    if (a.field()->kind != Kind::quadext) throw precondition_error("quad_y on non-quadext element");
    return quad_of(a).y;
}

Elem make_quad(const Field& f, const Elem& x, const Elem& y) {
    if (f->kind != Kind::quadext) throw precondition_error("make_quad on non-quadext field");
    if (!field_eq(x.field(), f->base) || !field_eq(y.field(), f->base))
        throw precondition_error("make_quad components must live in the base field");
    auto rep = std::make_shared<QuadRep>();
    rep->x = x;
    rep->y = y;
    return Elem(f, Rep(std::shared_ptr<const QuadRep>(rep)));
}

Poly frac_num(const Elem& a) {
    if (a.field()->kind != Kind::ratfunc) throw precondition_error("frac_num on non-ratfunc element");
    return frac_of(a).num;
}

Poly frac_den(const Elem& a) {
    if (a.field()->kind != Kind::ratfunc) throw precondition_error("frac_den on non-ratfunc element");
    return frac_of(a).den;
}

Elem make_frac(const Field& f, const Poly& num, const Poly& den) {
    if (f->kind != Kind::ratfunc) throw precondition_error("make_frac on non-ratfunc field");
    if (!field_eq(num.field, f->base) || !field_eq(den.field, f->base))
        throw precondition_error("make_frac operands must be polynomials over the base field");
    return frac_canon(f, num, den);
}

Elem poly_to_elem(const Field& ratfunc_field, const Poly& p) {
    return make_frac(ratfunc_field, p, poly_one(ratfunc_field->base));
}

Elem from_coeff_vector(const Field& fqquot_field, std::vector<Elem> coeffs) {
    if (fqquot_field->kind != Kind::fqquot)
        throw precondition_error("from_coeff_vector needs a quotient extension");
    if (static_cast<int>(coeffs.size()) > field_deg(fqquot_field))
        throw precondition_error("coefficient vector longer than the extension degree");
    for (const Elem& c : coeffs)
        if (!field_eq(c.field(), fqquot_field->base))
            throw precondition_error("coefficients must live in the base field");
    return from_coeffs(fqquot_field, std::move(coeffs));
}

Elem norm_to_base(const Elem& a) {
    const Field& f = a.field();
    if (f->kind != Kind::fqquot) throw precondition_error("norm_to_base needs a quotient extension");
    const Field& base = f->base;
    if (is_zero(a)) return zero(base);
    Elem n = pow_elem(a, (field_card(f) - 1) / (field_card(base) - 1));
    const auto& coeffs = std::get<std::vector<Elem>>(n.rep());
    if (coeffs.size() != 1) throw std::runtime_error("internal: norm landed outside the base field");
    return coeffs[0];
}

// --- enumeration ---------------------------------------------------------------

Elem enum_elem(const Field& f, const Int& i) {
    switch (f->kind) {
        case Kind::fp: {
            if (i < 0 || i >= f->p) throw precondition_error("enumeration rank out of range");
            return Elem(f, Rep(Int(i)));
        }
        case Kind::fqquot: {
            Int b = field_card(f->base);
            Int rest = i;
            if (i < 0 || i >= field_card(f)) throw precondition_error("enumeration rank out of range");
            std::vector<Elem> v;
            int deg = field_deg(f);
            for (int j = 0; j < deg; ++j) {
                Int digit = rest % b;
                rest /= b;
                v.push_back(enum_elem(f->base, digit));
            }
            return from_coeffs(f, std::move(v));
        }
        default: throw precondition_error("canonical enumeration needs a finite field");
    }
}

Int elem_rank(const Elem& a) {
    switch (a.field()->kind) {
        case Kind::fp: return std::get<Int>(a.rep());
        case Kind::fqquot: {
            Int b = field_card(a.field()->base);
            Int r = 0;
            const auto& v = coeffs_of(a);
            for (size_t i = v.size(); i-- > 0;) r = r * b + elem_rank(v[i]);
            return r;
        }
        default: throw precondition_error("element rank needs a finite field");
    }
}

// --- squares ---------------------------------------------------------------------

bool is_square(const Elem& a) {
    const Field& f = a.field();
    switch (f->kind) {
        case Kind::fp:
        case Kind::fqquot: {
            if (is_zero(a)) return true;
            if (field_char(f) == 2) return true;  // Frobenius is bijective
            Int e = (field_card(f) - 1) / 2;
            return elem_eq(pow_elem(a, e), one(f));
        }
        case Kind::q: {
            const Rat& r = std::get<Rat>(a.rep());
            if (r == 0) return true;
            if (r < 0) return false;
            Int n = rat_num(r), d = rat_den(r);
            return mpz_perfect_square_p(n.get_mpz_t()) != 0 && mpz_perfect_square_p(d.get_mpz_t()) != 0;
        }
        case Kind::ratfunc: {
            if (is_zero(a)) return true;
            Factorization fn = factor_poly(frac_of(a).num);
            Factorization fd = factor_poly(frac_of(a).den);
            for (const auto& [g, m] : fn.factors)
                if (m % 2 != 0) return false;
            for (const auto& [g, m] : fd.factors)
                if (m % 2 != 0) return false;
            return is_square(div(fn.unit, fd.unit));
        }
        default: throw precondition_error("squareness not supported over this field");
    }
}

std::optional<Elem> sqrt_elem(const Elem& a) {
    const Field& f = a.field();
    switch (f->kind) {
        case Kind::fp:
        case Kind::fqquot: {
            if (is_zero(a)) return zero(f);
            if (!is_square(a)) return std::nullopt;
            Int q = field_card(f);
            if (q > 2000000) throw precondition_error("square root search cap exceeded");
            if (field_char(f) == 2) {
                // x -> x^2 is bijective; sqrt = x^(q/2)
                return pow_elem(a, q / 2);
            }
            if (q % 4 == 3) {
                return pow_elem(a, (q + 1) / 4);
            }
            for (Int i = 0; i < q; ++i) {
                Elem c = enum_elem(f, i);
                if (elem_eq(mul(c, c), a)) return c;
            }
            return std::nullopt;
        }
        case Kind::q: {
            if (!is_square(a)) return std::nullopt;
            const Rat& r = std::get<Rat>(a.rep());
            Int n = rat_num(r), d = rat_den(r);
            Int sn, sd;
            mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
            mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
            return Elem(f, Rep(rat(sn, sd)));
        }
        default: throw precondition_error("square root not supported over this field");
    }
}

// --- polynomials --------------------------------------------------------------------

Poly poly_zero(const Field& f) { return Poly{f, {}}; }
Poly poly_one(const Field& f) { return Poly{f, {one(f)}}; }
Poly poly_x(const Field& f) { return Poly{f, {zero(f), one(f)}}; }

Poly poly_from(const Field& f, std::vector<Elem> coeffs) {
    for (const Elem& c : coeffs)
        if (!field_eq(c.field(), f)) throw precondition_error("polynomial coefficient field mismatch");
    return Poly{f, trim(std::move(coeffs))};
}

Poly poly_from_ints(const Field& f, const std::vector<long>& coeffs) {
    std::vector<Elem> v;
    v.reserve(coeffs.size());
    for (long c : coeffs) v.push_back(from_int(f, c));
    return poly_from(f, std::move(v));
}

int poly_deg(const Poly& p) { return static_cast<int>(p.c.size()) - 1; }
bool poly_is_zero(const Poly& p) { return p.c.empty(); }

bool poly_eq(const Poly& a, const Poly& b) { return poly_cmp(a, b) == 0; }

int poly_cmp(const Poly& a, const Poly& b) {
    if (a.c.size() != b.c.size()) return a.c.size() < b.c.size() ? -1 : 1;
    for (size_t i = a.c.size(); i-- > 0;) {
        int c = elem_cmp(a.c[i], b.c[i]);
        if (c != 0) return c;
    }
    return 0;
}

Elem poly_lc(const Poly& p) {
    if (poly_is_zero(p)) throw precondition_error("leading coefficient of zero polynomial");
    return p.c.back();
}

Poly poly_add(const Poly& a, const Poly& b) {
    std::vector<Elem> r(std::max(a.c.size(), b.c.size()), zero(a.field));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] = add(r[i], b.c[i]);
    return Poly{a.field, trim(std::move(r))};
}

Poly poly_neg(const Poly& a) {
    std::vector<Elem> r = a.c;
    for (Elem& c : r) c = neg(c);
    return Poly{a.field, std::move(r)};
}

Poly poly_sub(const Poly& a, const Poly& b) { return poly_add(a, poly_neg(b)); }

Poly poly_mul(const Poly& a, const Poly& b) {
    if (poly_is_zero(a) || poly_is_zero(b)) return poly_zero(a.field);
    std::vector<Elem> r(a.c.size() + b.c.size() - 1, zero(a.field));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (is_zero(a.c[i])) continue;
        for (size_t j = 0; j < b.c.size(); ++j) r[i + j] = add(r[i + j], mul(a.c[i], b.c[j]));
    }
    return Poly{a.field, trim(std::move(r))};
}

Poly poly_scale(const Poly& a, const Elem& s) {
    if (is_zero(s)) return poly_zero(a.field);
    std::vector<Elem> r = a.c;
    for (Elem& c : r) c = mul(c, s);
    return Poly{a.field, trim(std::move(r))};
}

std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
    if (poly_is_zero(b)) throw precondition_error("polynomial division by zero");
    Poly rem = a;
    if (poly_deg(a) < poly_deg(b)) return {poly_zero(a.field), rem};
    Elem lci = inv(poly_lc(b));
    std::vector<Elem> q(static_cast<size_t>(poly_deg(a) - poly_deg(b)) + 1, zero(a.field));
    while (!poly_is_zero(rem) && poly_deg(rem) >= poly_deg(b)) {
        int shift = poly_deg(rem) - poly_deg(b);
        Elem c = mul(poly_lc(rem), lci);
        q[static_cast<size_t>(shift)] = c;
        // rem -= c * x^shift * b
        std::vector<Elem> sub_c(rem.c.size(), zero(a.field));
        for (size_t i = 0; i < b.c.size(); ++i)
            sub_c[i + static_cast<size_t>(shift)] = mul(c, b.c[i]);
        rem = poly_sub(rem, Poly{a.field, trim(std::move(sub_c))});
    }
    return {Poly{a.field, trim(std::move(q))}, rem};
}

Poly poly_mod(const Poly& a, const Poly& b) { return poly_divmod(a, b).second; }

Poly poly_monic(const Poly& a) {
    if (poly_is_zero(a)) return a;
    return poly_scale(a, inv(poly_lc(a)));
}

Poly poly_gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!poly_is_zero(y)) {
        Poly r = poly_mod(x, y);
        x = y;
        y = r;
    }
    return poly_monic(x);
}

Poly poly_derivative(const Poly& a) {
    if (poly_deg(a) < 1) return poly_zero(a.field);
    std::vector<Elem> r;
    r.reserve(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); ++i) r.push_back(mul(a.c[i], from_int(a.field, static_cast<long>(i))));
    return Poly{a.field, trim(std::move(r))};
}

Elem poly_eval(const Poly& a, const Elem& x) {
    Elem r = zero(x.field());
    for (size_t i = a.c.size(); i-- > 0;) r = add(mul(r, x), lift(x.field(), a.c[i]));
    return r;
}

Poly poly_pow_mod(const Poly& a, const Int& n, const Poly& m) {
    Poly r = poly_one(a.field);
    Poly base = poly_mod(a, m);
    Int e = n;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = poly_mod(poly_mul(r, base), m);
        e >>= 1;
        if (e > 0) base = poly_mod(poly_mul(base, base), m);
    }
    return r;
}

}  // namespace valdef::algebra
