#include <valdef/valuation.hpp>

#include <algorithm>
#include <numeric>

namespace valdef::valuation {

namespace {

using algebra::Factorization;
using FK = algebra::FieldDesc::Kind;
using PK = Place::Kind;

long int_val(Int n, const Int& p) {
    if (n == 0) throw precondition_error("valuation of zero");
    long v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

long rat_val(const Rat& x, const Int& p) {
    if (x == 0) throw precondition_error("valuation of zero");
    return int_val(rat_num(x), p) - int_val(rat_den(x), p);
}

const Rat& as_rat(const Elem& x) { return std::get<Rat>(x.rep()); }

// residue of a p-integral rational in [0, p)
Int rat_mod(const Rat& x, const Int& p) {
    Int n = rat_num(x), d = rat_den(x);
    Int di;
    if (mpz_invert(di.get_mpz_t(), d.get_mpz_t(), p.get_mpz_t()) == 0)
        throw precondition_error("denominator not invertible at this prime");
    return mod_norm(n * di, p);
}

long poly_mult(const Poly& h, const Poly& g) {
    if (algebra::poly_is_zero(h)) throw precondition_error("multiplicity in the zero polynomial");
    long m = 0;
    Poly cur = h;
    while (true) {
        auto [q, r] = algebra::poly_divmod(cur, g);
        if (!algebra::poly_is_zero(r)) return m;
        ++m;
        cur = q;
    }
}

Poly poly_inv_mod(const Poly& a, const Poly& m) {
    Poly r0 = m, r1 = algebra::poly_mod(a, m);
    Poly s0 = algebra::poly_zero(m.field), s1 = algebra::poly_one(m.field);
    while (!algebra::poly_is_zero(r1)) {
        auto [q, r2] = algebra::poly_divmod(r0, r1);
        Poly s2 = algebra::poly_sub(s0, algebra::poly_mul(q, s1));
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if (algebra::poly_deg(r0) != 0) throw precondition_error("polynomial not invertible at this place");
    return algebra::poly_mod(algebra::poly_scale(s0, algebra::inv(r0.c[0])), m);
}

// squarefree part of a nonzero integer, sign included
Int squarefree_part(Int n) {
    Int sign = n < 0 ? -1 : 1;
    n = abs(n);
    Int out = 1;
    for (Int q = 2; q * q <= n; ++q) {
        int e = 0;
        while (n % q == 0) {
            n /= q;
            ++e;
        }
        if (e % 2 == 1) out *= q;
    }
    return sign * out * n;
}

const Field& base_field(const Place& v) { return v.field->base; }

void check_field(const Place& v, const Elem& x) {
    if (!algebra::field_eq(x.field(), v.field))
        throw precondition_error("element does not live in the place's field");
}

}  // namespace

// --- construction -----------------------------------------------------------------

Place place_qprime(const Int& p) {
    if (p < 2 || mpz_probab_prime_p(p.get_mpz_t(), 40) == 0)
        throw precondition_error("place p:" + p.get_str() + " needs a prime");
    Place v;
    v.kind = PK::q_prime;
    v.field = algebra::make_q();
    v.p = p;
    return v;
}

Place place_qinfty() {
    Place v;
    v.kind = PK::q_infty;
    v.field = algebra::make_q();
    return v;
}

Place place_func_irred(const Field& ratfunc, const Poly& g) {
    if (ratfunc->kind != FK::ratfunc) throw precondition_error("finite function-field place needs k(t)");
    if (!algebra::field_eq(g.field, ratfunc->base))
        throw precondition_error("place polynomial must live over the constant field");
    if (algebra::poly_deg(g) < 1) throw precondition_error("place polynomial must be nonconstant");
    if (!algebra::elem_eq(algebra::poly_lc(g), algebra::one(g.field)))
        throw precondition_error("place polynomial must be monic");
    if (!algebra::poly_irreducible(g)) throw precondition_error("place polynomial must be irreducible");
    Place v;
    v.kind = PK::func_irred;
    v.field = ratfunc;
    v.g = g;
    return v;
}

Place place_func_infty(const Field& ratfunc) {
    if (ratfunc->kind != FK::ratfunc) throw precondition_error("infinite place needs k(t)");
    Place v;
    v.kind = PK::func_infty;
    v.field = ratfunc;
    return v;
}

bool place_eq(const Place& a, const Place& b) { return place_cmp(a, b) == 0; }

int place_cmp(const Place& a, const Place& b) {
    auto rank = [](PK k) {
        switch (k) {
            case PK::q_prime: return 0;
            case PK::q_infty: return 1;
            case PK::func_irred: return 2;
            case PK::func_infty: return 3;
        }
        return 4;
    };
    if (rank(a.kind) != rank(b.kind)) return rank(a.kind) < rank(b.kind) ? -1 : 1;
    std::string fa = algebra::field_str(a.field), fb = algebra::field_str(b.field);
    if (fa != fb) return fa < fb ? -1 : 1;
    switch (a.kind) {
        case PK::q_prime: return cmp(a.p, b.p) < 0 ? -1 : cmp(a.p, b.p) > 0 ? 1 : 0;
        case PK::func_irred: return algebra::poly_cmp(a.g, b.g);
        default: return 0;
    }
}

std::string place_str(const Place& v) {
    switch (v.kind) {
        case PK::q_prime: return "p:" + v.p.get_str();
        case PK::q_infty: return "inf";
        case PK::func_irred: {
            std::string out = "irr:[";
            for (size_t i = 0; i < v.g.c.size(); ++i) {
                if (i) out += ",";
                out += algebra::elem_str(v.g.c[i]);
            }
            return out + "]";
        }
        case PK::func_infty: return "finf";
    }
    throw precondition_error("place_str: bad kind");
}

namespace {
// split at top-level commas (ignoring ones inside () or [])
std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char ch : s) {
        if (ch == '(' || ch == '[') ++depth;
        if (ch == ')' || ch == ']') --depth;
        if (ch == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}
}  // namespace

Place parse_place(const Field& field, const std::string& text) {
    std::string s = trim(text);
    if (s == "inf") {
        if (field->kind != FK::q) throw parse_error("place 'inf' lives over Q");
        return place_qinfty();
    }
    if (s == "finf") {
        if (field->kind != FK::ratfunc) throw parse_error("place 'finf' lives over a function field");
        return place_func_infty(field);
    }
    if (s.rfind("p:", 0) == 0) {
        if (field->kind != FK::q) throw parse_error("place '" + s + "' lives over Q");
        std::string body = trim(s.substr(2));
        for (char ch : body)
            if (!std::isdigit(static_cast<unsigned char>(ch))) throw parse_error("bad prime in place: " + s);
        if (body.empty()) throw parse_error("bad prime in place: " + s);
        return place_qprime(Int(body));
    }
    if (s.rfind("irr:", 0) == 0) {
        if (field->kind != FK::ratfunc) throw parse_error("place '" + s + "' lives over a function field");
        std::string body = trim(s.substr(4));
        if (body.size() < 2 || body.front() != '[' || body.back() != ']')
            throw parse_error("place polynomial wants [c0,c1,...]: " + s);
        std::vector<Elem> coeffs;
        for (const std::string& part : split_commas(body.substr(1, body.size() - 2)))
            coeffs.push_back(algebra::parse_elem(field->base, trim(part)));
        return place_func_irred(field, algebra::poly_from(field->base, std::move(coeffs)));
    }
    throw parse_error("unrecognized place text: " + text);
}

// --- residue data --------------------------------------------------------------------

int residue_degree(const Place& v) {
    switch (v.kind) {
        case PK::func_irred: return algebra::poly_deg(v.g);
        default: return 1;
    }
}

namespace {

// degree-2 residue field over Q: t^2 + B t + C with root theta = x0 + y0 sqrt(d)
struct QuadResidue {
    Field kappa;
    Rat x0, y0;
};

QuadResidue quad_residue_data(const Place& v) {
    const Field& Q = base_field(v);
    Rat B = as_rat(v.g.c[1]);
    Rat C = as_rat(v.g.c[0]);
    Rat D = B * B - 4 * C;
    Int d = squarefree_part(rat_num(D) * rat_den(D));
    Elem ratio = algebra::from_rat(Q, D / Rat(d));
    auto r = algebra::sqrt_elem(ratio);
    if (!r) throw std::runtime_error("internal: discriminant square-part extraction failed");
    QuadResidue out;
    out.kappa = algebra::make_quadext(Q, algebra::from_int(Q, d));
    out.x0 = -B / 2;
    out.y0 = as_rat(*r) / 2;
    return out;
}

}  // namespace

Field residue_field(const Place& v) {
    switch (v.kind) {
        case PK::q_prime: return algebra::make_fp(v.p);
        case PK::q_infty: throw precondition_error("the archimedean place has no residue field here");
        case PK::func_infty: return base_field(v);
        case PK::func_irred: {
            const Field& k = base_field(v);
            int deg = algebra::poly_deg(v.g);
            if (deg == 1) return k;
            if (algebra::is_finite(k)) return algebra::make_fqquot(k, v.g.c);
            if (k->kind == FK::q && deg == 2) return quad_residue_data(v).kappa;
            throw precondition_error("residue fields over Q are supported up to degree 2");
        }
    }
    throw precondition_error("residue_field: bad kind");
}

long order(const Place& v, const Elem& x) {
    check_field(v, x);
    if (algebra::is_zero(x)) throw precondition_error("order of zero");
    switch (v.kind) {
        case PK::q_prime: return rat_val(as_rat(x), v.p);
        case PK::q_infty: throw precondition_error("the archimedean place has no discrete order");
        case PK::func_irred: {
            Poly num = algebra::frac_num(x), den = algebra::frac_den(x);
            return poly_mult(num, v.g) - poly_mult(den, v.g);
        }
        case PK::func_infty:
            return algebra::poly_deg(algebra::frac_den(x)) - algebra::poly_deg(algebra::frac_num(x));
    }
    throw precondition_error("order: bad kind");
}

Elem residue(const Place& v, const Elem& x) {
    check_field(v, x);
    if (algebra::is_zero(x)) return algebra::zero(residue_field(v));
    long ord = order(v, x);
    if (ord < 0) throw precondition_error("residue of an element with a pole");
    Field kappa = residue_field(v);
    if (ord > 0) return algebra::zero(kappa);
    switch (v.kind) {
        case PK::q_prime: {
            return algebra::from_int(kappa, rat_mod(as_rat(x), v.p));
        }
        case PK::func_infty: {
            Poly num = algebra::frac_num(x), den = algebra::frac_den(x);
            return algebra::div(algebra::poly_lc(num), algebra::poly_lc(den));
        }
        case PK::func_irred: {
            Poly num = algebra::frac_num(x), den = algebra::frac_den(x);
            Poly r = algebra::poly_mod(algebra::poly_mul(num, poly_inv_mod(den, v.g)), v.g);
            const Field& k = base_field(v);
            int deg = algebra::poly_deg(v.g);
            if (deg == 1) return algebra::poly_is_zero(r) ? algebra::zero(k) : r.c[0];
            if (algebra::is_finite(k)) return algebra::from_coeff_vector(kappa, r.c);
            // degree 2 over Q: map t to the canonical root
            QuadResidue qr = quad_residue_data(v);
            Rat c0 = algebra::poly_deg(r) >= 0 ? as_rat(r.c[0]) : Rat(0);
            Rat c1 = algebra::poly_deg(r) >= 1 ? as_rat(r.c[1]) : Rat(0);
            const Field& Q = base_field(v);
            return algebra::make_quad(qr.kappa, algebra::from_rat(Q, c0 + c1 * qr.x0),
                                      algebra::from_rat(Q, c1 * qr.y0));
        }
        default: throw precondition_error("residue: bad kind");
    }
}

std::vector<std::pair<Place, long>> support(const Elem& f) {
    const Field& field = f.field();
    if (field->kind != FK::ratfunc) throw precondition_error("support needs a function-field element");
    if (algebra::is_zero(f)) throw precondition_error("support of zero");
    std::vector<std::pair<Place, long>> out;
    Poly num = algebra::frac_num(f), den = algebra::frac_den(f);
    Factorization fn = algebra::factor_poly(num);
    Factorization fd = algebra::factor_poly(den);
    for (const auto& [g, m] : fn.factors) out.emplace_back(place_func_irred(field, g), m);
    for (const auto& [g, m] : fd.factors) out.emplace_back(place_func_irred(field, g), -m);
    long at_inf = algebra::poly_deg(den) - algebra::poly_deg(num);
    if (at_inf != 0) out.emplace_back(place_func_infty(field), at_inf);
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return place_cmp(a.first, b.first) < 0; });
    return out;
}

// --- quadratic extensions ---------------------------------------------------------------

std::vector<SplitPart> extend_to_sqrt(const Place& v, const Elem& eps) {
    check_field(v, eps);
    if (algebra::is_zero(eps)) throw precondition_error("extension by sqrt(0) is degenerate");
    if (algebra::is_square(eps)) throw precondition_error("extension by a square is degenerate");
    switch (v.kind) {
        case PK::q_prime: {
            if (v.p == 2) throw precondition_error("residue characteristic 2 not supported");
            long m = order(v, eps);
            if (m % 2 != 0) return {{2, 1}};
            // unit part: eps * p^(-m)
            Int pk = 1;
            for (long i = 0; i < (m < 0 ? -m : m); ++i) pk *= v.p;
            Rat scale = m >= 0 ? rat(Int(1), pk) : Rat(pk);
            Elem unit = algebra::from_rat(v.field, as_rat(eps) * scale);
            Elem r = residue(v, unit);
            if (algebra::is_square(r)) return {{1, 1}, {1, 1}};
            return {{1, 2}};
        }
        case PK::q_infty: {
            if (as_rat(eps) > 0) return {{1, 1}, {1, 1}};
            return {{1, 2}};
        }
        case PK::func_irred:
        case PK::func_infty: {
            if (algebra::field_char(v.field) == 2)
                throw precondition_error("residue characteristic 2 not supported");
            long m = order(v, eps);
            if (m % 2 != 0) return {{2, 1}};
            // unit part: eps * pi^(-m)
            Elem pi = v.kind == PK::func_irred
                          ? algebra::poly_to_elem(v.field, v.g)
                          : algebra::inv(algebra::poly_to_elem(v.field, algebra::poly_x(base_field(v))));
            Elem unit = algebra::mul(eps, algebra::pow_elem(pi, Int(-m)));
            Elem r = residue(v, unit);
            if (algebra::is_square(r)) return {{1, 1}, {1, 1}};
            return {{1, 2}};
        }
    }
    throw precondition_error("extend_to_sqrt: bad kind");
}

// --- weak approximation ------------------------------------------------------------------

namespace {

// first monic irreducible over `k` not in `used`, in canonical (degree, rank)
// order; nonzero coprime_to restricts to degrees coprime to it
Poly fresh_irreducible(const Field& k, const std::vector<Poly>& used, int coprime_to) {
    if (k->kind == FK::q) {
        // linear polynomials t - a, a = 0, 1, -1, 2, -2, ...
        for (long i = 0;; ++i) {
            long a = (i % 2 == 0) ? i / 2 : -(i / 2 + 1);
            Poly cand = algebra::poly_from_ints(k, {-a, 1});
            bool taken = false;
            for (const Poly& u : used)
                if (algebra::poly_eq(u, cand)) taken = true;
            if (!taken) return cand;
        }
    }
    for (int deg = 1;; ++deg) {
        if (coprime_to != 0 && std::gcd(deg, coprime_to) != 1) continue;
        for (int skip = 0;; ++skip) {
            Poly cand;
            try {
                cand = algebra::nth_irreducible(k, deg, skip);
            } catch (const precondition_error&) {
                break;  // degree exhausted
            }
            bool taken = false;
            for (const Poly& u : used)
                if (algebra::poly_eq(u, cand)) taken = true;
            if (!taken) return cand;
        }
    }
}

void ext_gcd(long a, long b, long& x, long& y) {
    if (b == 0) {
        x = 1;
        y = 0;
        return;
    }
    long x1, y1;
    ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
}

}  // namespace

Elem weak_approx(const Field& ratfunc, const std::vector<std::pair<Place, long>>& targets) {
    if (ratfunc->kind != FK::ratfunc) throw precondition_error("weak approximation works in k(t)");
    bool has_inf = false;
    long inf_target = 0;
    std::vector<Poly> used;
    Elem a = algebra::one(ratfunc);
    for (size_t i = 0; i < targets.size(); ++i) {
        const auto& [v, m] = targets[i];
        if (!algebra::field_eq(v.field, ratfunc))
            throw precondition_error("weak approximation: place of a different field");
        for (size_t j = i + 1; j < targets.size(); ++j)
            if (place_eq(v, targets[j].first))
                throw precondition_error("weak approximation: repeated place");
        if (v.kind == PK::func_infty) {
            has_inf = true;
            inf_target = m;
        } else if (v.kind == PK::func_irred) {
            used.push_back(v.g);
            a = algebra::mul(a, algebra::pow_elem(algebra::poly_to_elem(ratfunc, v.g), Int(m)));
        } else {
            throw precondition_error("weak approximation: places of Q are not supported");
        }
    }
    Elem result = a;
    if (has_inf) {
        long ainf = order(place_func_infty(ratfunc), a);
        long delta = inf_target - ainf;
        if (delta != 0) {
            Poly h1 = fresh_irreducible(ratfunc->base, used, 0);
            long e1 = algebra::poly_deg(h1);
            long x, y;
            if (delta % e1 == 0) {
                x = -delta / e1;
                y = 0;
                result = algebra::mul(result,
                                      algebra::pow_elem(algebra::poly_to_elem(ratfunc, h1), Int(x)));
            } else {
                std::vector<Poly> used2 = used;
                used2.push_back(h1);
                Poly h2 = fresh_irreducible(ratfunc->base, used2, static_cast<int>(e1));
                long e2 = algebra::poly_deg(h2);
                ext_gcd(e1, e2, x, y);  // x*e1 + y*e2 = 1
                x *= -delta;
                y *= -delta;
                result = algebra::mul(result,
                                      algebra::pow_elem(algebra::poly_to_elem(ratfunc, h1), Int(x)));
                result = algebra::mul(result,
                                      algebra::pow_elem(algebra::poly_to_elem(ratfunc, h2), Int(y)));
            }
        }
    }
    for (const auto& [v, m] : targets)
        if (order(v, result) != m)
            throw std::runtime_error("internal: weak approximation postcondition failed");
    return result;
}

// --- quadratic number fields --------------------------------------------------------------

namespace {

Int quad_d(const Field& K) {
    if (K->kind != FK::quadext || K->base->kind != FK::q)
        throw precondition_error("expected a quadratic extension of Q");
    Rat d = as_rat(*K->eps);
    if (rat_den(d) != 1) throw precondition_error("quadratic place arithmetic needs an integer discriminant");
    Int di = rat_num(d);
    if (squarefree_part(di) != di)
        throw precondition_error("quadratic place arithmetic needs a squarefree discriminant");
    return di;
}

// canonical square root of d mod an odd prime: the smaller of the two roots
Int sqrt_mod(const Int& d, const Int& p) {
    Int dd = mod_norm(d, p);
    if (p > 2000000) throw precondition_error("square root search cap exceeded");
    for (Int s = 1; s < p; ++s)
        if (mod_norm(s * s, p) == dd) return s < p - s ? s : p - s;
    throw std::runtime_error("internal: no square root of a split discriminant");
}

}  // namespace

QfSplitKind qf_splitting(const Field& K, const Int& p) {
    Int d = quad_d(K);
    if (p == 2) {
        Int r = mod_norm(d, 8);
        if (r == 1) return QfSplitKind::split;
        if (r == 5) return QfSplitKind::inert;
        return QfSplitKind::ramified;
    }
    if (mod_norm(d, p) == 0) return QfSplitKind::ramified;
    return mpz_legendre(d.get_mpz_t(), p.get_mpz_t()) == 1 ? QfSplitKind::split : QfSplitKind::inert;
}

QfPlace qf_place(const Field& K, const Int& p, int branch) {
    if (p < 2 || mpz_probab_prime_p(p.get_mpz_t(), 40) == 0)
        throw precondition_error("quadratic place needs a prime");
    QfSplitKind kind = qf_splitting(K, p);
    if (kind == QfSplitKind::split) {
        if (branch != 0 && branch != 1)
            throw precondition_error(p.get_str() + " splits: pick branch 0 or 1");
    } else if (branch != -1) {
        throw precondition_error(p.get_str() + " does not split: no branch to pick");
    }
    return QfPlace{K, p, branch};
}

long qf_order(const QfPlace& v, const Elem& x) {
    if (!algebra::field_eq(x.field(), v.K)) throw precondition_error("element of the wrong field");
    if (algebra::is_zero(x)) throw precondition_error("order of zero");
    Int d = quad_d(v.K);
    Rat a = as_rat(algebra::quad_x(x));
    Rat b = as_rat(algebra::quad_y(x));
    Rat norm = a * a - Rat(d) * b * b;
    QfSplitKind kind = qf_splitting(v.K, v.p);
    if (kind == QfSplitKind::ramified) return rat_val(norm, v.p);
    if (kind == QfSplitKind::inert) return rat_val(norm, v.p) / 2;
    // split: strip the p power that the integral coordinates share, then test
    // which of the two branches the remaining unit part vanishes at
    Rat ca = a, cb = b;
    Int root;
    if (v.p == 2) {
        ca = a - b;   // coordinates in the 1, (1+sqrt d)/2 basis
        cb = 2 * b;
        root = v.branch;
    } else {
        Int s = sqrt_mod(d, v.p);
        root = v.branch == 0 ? s : v.p - s;
    }
    long m;
    if (ca == 0)
        m = rat_val(cb, v.p);
    else if (cb == 0)
        m = rat_val(ca, v.p);
    else
        m = std::min(rat_val(ca, v.p), rat_val(cb, v.p));
    Rat scale = 1;
    Int pk = 1;
    for (long i = 0; i < (m < 0 ? -m : m); ++i) pk *= v.p;
    scale = m >= 0 ? rat(Int(1), pk) : Rat(pk);
    Rat ca2 = ca * scale, cb2 = cb * scale;
    long k = rat_val(norm * scale * scale, v.p);
    Int test = mod_norm((ca2 == 0 ? Int(0) : rat_mod(ca2, v.p)) +
                            (cb2 == 0 ? Int(0) : rat_mod(cb2, v.p)) * root,
                        v.p);
    return m + (test == 0 ? k : 0);
}

// --- composites -------------------------------------------------------------------------

CompositePlace make_composite(const Place& P, const Int& p, int branch) {
    if (P.kind != PK::func_irred && P.kind != PK::func_infty)
        throw precondition_error("composite places sit over geometric places of Q(t)");
    if (base_field(P)->kind != FK::q)
        throw precondition_error("composite places need constant field Q");
    Field kappa = residue_field(P);  // rejects degree > 2
    if (kappa->kind == FK::q) {
        place_qprime(p);
        if (branch != -1) throw precondition_error("rational residue field: no branch to pick");
    } else {
        qf_place(kappa, p, branch);
    }
    return CompositePlace{P, p, branch};
}

std::pair<long, long> composite_order(const CompositePlace& c, const Elem& f) {
    if (algebra::is_zero(f)) throw precondition_error("order of zero");
    long m = order(c.P, f);
    Elem pi = c.P.kind == PK::func_irred
                  ? algebra::poly_to_elem(c.P.field, c.P.g)
                  : algebra::inv(algebra::poly_to_elem(c.P.field, algebra::poly_x(base_field(c.P))));
    Elem unit = algebra::mul(f, algebra::pow_elem(pi, Int(-m)));
    Elem rho = residue(c.P, unit);
    Field kappa = rho.field();
    long inner;
    if (kappa->kind == FK::q)
        inner = rat_val(as_rat(rho), c.p);
    else
        inner = qf_order(qf_place(kappa, c.p, c.branch), rho);
    return {m, inner};
}

std::string composite_str(const CompositePlace& c) {
    std::string inner = "p:" + c.p.get_str();
    if (c.branch >= 0) inner += "#" + std::to_string(c.branch);
    return "comp(" + place_str(c.P) + ", " + inner + ")";
}

CompositePlace parse_composite(const Field& ratfunc, const std::string& text) {
    std::string s = trim(text);
    if (s.rfind("comp(", 0) != 0 || s.back() != ')') throw parse_error("unrecognized composite place: " + text);
    auto parts = split_commas(s.substr(5, s.size() - 6));
    if (parts.size() != 2) throw parse_error("composite place wants comp(<place>, p:<prime>): " + text);
    Place P = parse_place(ratfunc, trim(parts[0]));
    std::string inner = trim(parts[1]);
    if (inner.rfind("p:", 0) != 0) throw parse_error("composite inner place wants p:<prime>: " + text);
    std::string body = inner.substr(2);
    int branch = -1;
    size_t hash = body.find('#');
    if (hash != std::string::npos) {
        std::string br = body.substr(hash + 1);
        if (br != "0" && br != "1") throw parse_error("composite branch must be 0 or 1: " + text);
        branch = br == "0" ? 0 : 1;
        body = body.substr(0, hash);
    }
    for (char ch : body)
        if (!std::isdigit(static_cast<unsigned char>(ch))) throw parse_error("bad prime in composite: " + text);
    if (body.empty()) throw parse_error("bad prime in composite: " + text);
    return make_composite(P, Int(body), branch);
}

}  // namespace valdef::valuation
