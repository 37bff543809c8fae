#include <valdef/algebra.hpp>

#include <algorithm>
#include <map>
#include <mutex>

namespace valdef::algebra {

namespace {

using Kind = FieldDesc::Kind;
using FactorList = std::vector<std::pair<Poly, int>>;

void merge_into(FactorList& acc, const FactorList& extra) {
    for (const auto& [g, m] : extra) {
        bool found = false;
        for (auto& [h, n] : acc)
            if (poly_eq(g, h)) {
                n += m;
                found = true;
                break;
            }
        if (!found) acc.emplace_back(g, m);
    }
}

// f with f' = 0 in characteristic p is h^p; returns h
Poly pth_root(const Poly& f) {
    const Field& base = f.field;
    Int p = field_char(base);
    Int q = field_card(base);
    Int root_exp = q / p;
    unsigned long pl = p.get_ui();
    std::vector<Elem> h;
    for (size_t i = 0; i < f.c.size(); i += pl) h.push_back(pow_elem(f.c[i], root_exp));
    return poly_from(base, std::move(h));
}

// splits a squarefree monic product of degree-d irreducibles
void equal_degree(const Poly& g, int d, FactorList& out) {
    if (poly_deg(g) == 0) return;
    if (poly_deg(g) == d) {
        out.emplace_back(g, 1);
        return;
    }
    const Field& base = g.field;
    Int q = field_card(base);
    Rng rng(0x45444653u + static_cast<std::uint64_t>(poly_deg(g)));
    for (int attempt = 0; attempt < 256; ++attempt) {
        std::vector<Elem> rc;
        for (int i = 0; i < poly_deg(g); ++i) rc.push_back(enum_elem(base, Int(rng.below(q.get_ui()))));
        Poly r = poly_from(base, std::move(rc));
        if (poly_deg(r) < 1) continue;
        Poly s;
        if (field_char(base) == 2) {
            // trace map over F_2
            Int bits = q;
            int k = 0;
            while (bits > 1) {
                bits /= 2;
                ++k;
            }
            Poly t = poly_mod(r, g);
            Poly acc = t;
            for (int i = 1; i < k * d; ++i) {
                t = poly_mod(poly_mul(t, t), g);
                acc = poly_add(acc, t);
            }
            s = acc;
        } else {
            Int e;
            mpz_pow_ui(e.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(d));
            e = (e - 1) / 2;
            s = poly_sub(poly_pow_mod(r, e, g), poly_one(base));
        }
        Poly g1 = poly_gcd(s, g);
        if (poly_deg(g1) > 0 && poly_deg(g1) < poly_deg(g)) {
            equal_degree(g1, d, out);
            equal_degree(poly_divmod(g, g1).first, d, out);
            return;
        }
    }
    throw std::runtime_error("equal-degree splitting failed to converge");
}

// distinct-degree on a squarefree monic polynomial
void distinct_degree(const Poly& f, FactorList& out) {
    const Field& base = f.field;
    Int q = field_card(base);
    Poly g = f;
    Poly h = poly_mod(poly_x(base), g);
    int d = 0;
    while (poly_deg(g) >= 2 * (d + 1)) {
        ++d;
        h = poly_pow_mod(h, q, g);
        Poly gd = poly_gcd(poly_sub(h, poly_x(base)), g);
        if (poly_deg(gd) > 0) {
            equal_degree(gd, d, out);
            g = poly_divmod(g, gd).first;
            h = poly_mod(h, g);
        }
    }
    if (poly_deg(g) > 0) out.emplace_back(g, 1);
}

FactorList factor_finite_monic(const Poly& f) {
    FactorList out;
    if (poly_deg(f) <= 0) return out;
    if (poly_deg(f) == 1) {
        out.emplace_back(f, 1);
        return out;
    }
    Poly fp = poly_derivative(f);
    if (poly_is_zero(fp)) {
        int p = static_cast<int>(field_char(f.field).get_ui());
        FactorList sub = factor_finite_monic(pth_root(f));
        for (auto& [g, m] : sub) m *= p;
        return sub;
    }
    Poly g = poly_gcd(f, fp);
    if (poly_deg(g) == 0) {
        distinct_degree(f, out);
        return out;
    }
    FactorList a = factor_finite_monic(g);
    FactorList b = factor_finite_monic(poly_divmod(f, g).first);
    merge_into(a, b);
    return a;
}

// --- rationals: primitive integer polynomials -------------------------------

struct ZPoly {
    std::vector<Int> c;  // trimmed, primitive, positive leading coefficient
};

int zdeg(const ZPoly& p) { return static_cast<int>(p.c.size()) - 1; }

ZPoly z_primitive(std::vector<Int> c) {
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (c.empty()) throw precondition_error("zero polynomial has no primitive part");
    Int g = 0;
    for (const Int& x : c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (c.back() < 0) g = -g;
    for (Int& x : c) x /= g;
    return ZPoly{std::move(c)};
}

ZPoly z_from_q(const Poly& p) {
    Int lcm = 1;
    for (const Elem& e : p.c) {
        Int d = rat_den(std::get<Rat>(e.rep()));
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), d.get_mpz_t());
    }
    std::vector<Int> c;
    for (const Elem& e : p.c) {
        Rat r = std::get<Rat>(e.rep()) * Rat(lcm);
        c.push_back(rat_num(r));
    }
    return z_primitive(std::move(c));
}

Poly z_to_monic_q(const Field& qf, const ZPoly& p) {
    std::vector<Elem> c;
    for (const Int& x : p.c) c.push_back(from_int(qf, x));
    return poly_monic(poly_from(qf, std::move(c)));
}

Int z_eval(const ZPoly& p, const Int& x) {
    Int r = 0;
    for (size_t i = p.c.size(); i-- > 0;) r = r * x + p.c[i];
    return r;
}

std::vector<Int> divisors_signed(const Int& v0) {
    Int v = abs(v0);
    if (v > Int("1000000000000")) throw precondition_error("coefficient too large for factorization over Q");
    std::vector<Int> out;
    for (Int i = 1; i * i <= v; ++i) {
        if (v % i == 0) {
            out.push_back(i);
            Int j = v / i;
            if (j != i) out.push_back(j);
        }
    }
    size_t n = out.size();
    for (size_t i = 0; i < n; ++i) out.push_back(-out[i]);
    std::sort(out.begin(), out.end(), [](const Int& a, const Int& b) { return cmp(a, b) < 0; });
    return out;
}

// monic irreducible factors over Q, with repetition
void kron_factor(const Field& qf, const ZPoly& f, std::vector<Poly>& out) {
    int n = zdeg(f);
    if (n <= 0) return;
    if (n == 1) {
        out.push_back(z_to_monic_q(qf, f));
        return;
    }
    // factor out t
    if (f.c[0] == 0) {
        out.push_back(poly_x(qf));
        std::vector<Int> rest(f.c.begin() + 1, f.c.end());
        kron_factor(qf, z_primitive(std::move(rest)), out);
        return;
    }
    // rational roots r/s, r | c0, s | lc, in canonical order
    for (const Int& s : divisors_signed(f.c.back())) {
        if (s < 0) continue;
        for (const Int& r : divisors_signed(f.c[0])) {
            Int g;
            mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), s.get_mpz_t());
            if (g != 1) continue;
            Rat x = rat(r, s);
            // evaluate exactly
            Rat acc = 0;
            for (size_t i = f.c.size(); i-- > 0;) acc = acc * x + Rat(f.c[i]);
            if (acc == 0) {
                Poly lin = poly_from(qf, {from_rat(qf, Rat(-x)), one(qf)});
                out.push_back(lin);
                Poly quot = poly_divmod(z_to_monic_q(qf, f), lin).first;
                kron_factor(qf, z_from_q(quot), out);
                return;
            }
        }
    }
    // Kronecker interpolation for factors of degree 2..n/2
    for (int dd = 2; dd <= n / 2; ++dd) {
        std::vector<Int> xs;
        for (Int x = 0; static_cast<int>(xs.size()) < dd + 1;) {
            if (z_eval(f, x) != 0) xs.push_back(x);
            x = x > 0 ? Int(-x) : Int(-x + 1);
        }
        std::vector<std::vector<Int>> divs;
        Int work = 1;
        for (const Int& x : xs) {
            divs.push_back(divisors_signed(z_eval(f, x)));
            work *= static_cast<long>(divs.back().size());
            if (work > 4000000) throw precondition_error("factorization over Q exceeds the search budget");
        }
        // WLOG the value at xs[0] is positive (g and -g divide together)
        std::vector<size_t> idx(xs.size(), 0);
        Poly fq = z_to_monic_q(qf, f);
        while (true) {
            bool skip = divs[0][idx[0]] < 0;
            if (!skip) {
                // Lagrange interpolation through (xs[i], divs[i][idx[i]])
                Poly g = poly_zero(qf);
                for (size_t i = 0; i < xs.size(); ++i) {
                    Poly basis = poly_one(qf);
                    Rat denom = 1;
                    for (size_t j = 0; j < xs.size(); ++j) {
                        if (j == i) continue;
                        basis = poly_mul(basis, poly_from(qf, {from_int(qf, -xs[j]), one(qf)}));
                        denom *= Rat(xs[i] - xs[j]);
                    }
                    Elem w = from_rat(qf, Rat(divs[i][idx[i]]) / denom);
                    g = poly_add(g, poly_scale(basis, w));
                }
                if (poly_deg(g) == dd) {
                    auto [quot, rem] = poly_divmod(fq, g);
                    if (poly_is_zero(rem)) {
                        kron_factor(qf, z_from_q(poly_monic(g)), out);
                        kron_factor(qf, z_from_q(poly_monic(quot)), out);
                        return;
                    }
                }
            }
            size_t k = 0;
            while (k < idx.size() && ++idx[k] == divs[k].size()) {
                idx[k] = 0;
                ++k;
            }
            if (k == idx.size()) break;
        }
    }
    out.push_back(z_to_monic_q(qf, f));  // irreducible
}

}  // namespace

Factorization factor_poly(const Poly& p) {
    if (poly_is_zero(p)) throw precondition_error("factoring the zero polynomial");
    const Field& base = p.field;
    Factorization result{poly_lc(p), {}};
    if (poly_deg(p) == 0) return result;
    FactorList factors;
    if (is_finite(base)) {
        factors = factor_finite_monic(poly_monic(p));
    } else if (base->kind == Kind::q) {
        std::vector<Poly> flat;
        kron_factor(base, z_from_q(p), flat);
        for (const Poly& g : flat) {
            FactorList single{{g, 1}};
            merge_into(factors, single);
        }
    } else {
        throw precondition_error("factorization needs a finite field or Q");
    }
    std::sort(factors.begin(), factors.end(),
              [](const auto& a, const auto& b) { return poly_cmp(a.first, b.first) < 0; });
    // the product must reproduce the input exactly
    Poly check = poly_from(base, {result.unit});
    for (const auto& [g, m] : factors)
        for (int i = 0; i < m; ++i) check = poly_mul(check, g);
    if (!poly_eq(check, p)) throw std::runtime_error("internal: factorization failed verification");
    result.factors = std::move(factors);
    return result;
}

bool poly_irreducible(const Poly& p) {
    if (poly_deg(p) < 1) throw precondition_error("irreducibility is for degree >= 1");
    if (poly_deg(p) == 1) return true;
    const Field& base = p.field;
    if (is_finite(base)) {
        // Rabin: x^(q^n) = x mod f, and gcd(x^(q^(n/l)) - x, f) = 1 for prime l | n
        Poly f = poly_monic(p);
        Int q = field_card(base);
        int n = poly_deg(f);
        std::vector<int> prime_divs;
        int m = n;
        for (int l = 2; l * l <= m; ++l)
            if (m % l == 0) {
                prime_divs.push_back(l);
                while (m % l == 0) m /= l;
            }
        if (m > 1) prime_divs.push_back(m);
        for (int l : prime_divs) {
            Int e;
            mpz_pow_ui(e.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(n / l));
            Poly h = poly_pow_mod(poly_x(base), e, f);
            Poly g = poly_gcd(poly_sub(h, poly_x(base)), f);
            if (poly_deg(g) != 0) return false;
        }
        Int e;
        mpz_pow_ui(e.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(n));
        Poly h = poly_pow_mod(poly_x(base), e, f);
        return poly_eq(h, poly_mod(poly_x(base), f));
    }
    if (base->kind == Kind::q) {
        Factorization f = factor_poly(p);
        return f.factors.size() == 1 && f.factors[0].second == 1;
    }
    throw precondition_error("irreducibility needs a finite field or Q");
}

Poly nth_irreducible(const Field& f, int degree, int skip_rank) {
    if (!is_finite(f)) throw precondition_error("irreducible enumeration needs a finite field");
    if (degree < 1) throw precondition_error("irreducible degree must be >= 1");
    Int q = field_card(f);
    Int total;
    mpz_pow_ui(total.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(degree));
    int seen = 0;
    for (Int r = 0; r < total; ++r) {
        std::vector<Elem> c;
        Int rest = r;
        for (int i = 0; i < degree; ++i) {
            c.push_back(enum_elem(f, Int(rest % q)));
            rest /= q;
        }
        c.push_back(one(f));
        Poly cand = poly_from(f, std::move(c));
        if (poly_irreducible(cand)) {
            if (seen == skip_rank) return cand;
            ++seen;
        }
    }
    throw precondition_error("not enough irreducibles of the requested degree");
}

// --- Zech tables ----------------------------------------------------------------

namespace {
std::mutex zech_mutex;
std::map<std::string, std::shared_ptr<const ZechField>> zech_cache;
}  // namespace

ZechField::ZechField(const Field& f) : field_(f) {
    Int qc = field_card(f);
    q_ = static_cast<std::uint32_t>(qc.get_ui());
    std::uint32_t n = q_ - 1;

    // generator of the multiplicative group
    std::vector<Int> prime_divs;
    {
        Int m = qc - 1;
        for (Int l = 2; l * l <= m; ++l)
            if (m % l == 0) {
                prime_divs.push_back(l);
                while (m % l == 0) m /= l;
            }
        if (m > 1) prime_divs.push_back(m);
    }
    Elem g = algebra::one(f);
    for (Int r = 1; r < qc; ++r) {
        Elem cand = enum_elem(f, r);
        bool ok = true;
        for (const Int& l : prime_divs)
            if (elem_eq(pow_elem(cand, (qc - 1) / l), algebra::one(f))) {
                ok = false;
                break;
            }
        if (ok) {
            g = cand;
            break;
        }
    }

    exp_.resize(n);
    log_.assign(q_, 0);
    zech_.resize(n);
    Elem e = algebra::one(f);
    for (std::uint32_t i = 0; i < n; ++i) {
        std::uint32_t r = static_cast<std::uint32_t>(elem_rank(e).get_ui());
        exp_[i] = r;
        log_[r] = i;
        e = algebra::mul(e, g);
    }
    one_ = exp_[0];
    neg_log_ = log_[static_cast<std::uint32_t>(elem_rank(algebra::neg(algebra::one(f))).get_ui())];
    e = algebra::one(f);
    Elem unit = algebra::one(f);
    for (std::uint32_t k = 0; k < n; ++k) {
        Elem s = algebra::add(unit, e);
        zech_[k] = algebra::is_zero(s) ? n : log_[static_cast<std::uint32_t>(elem_rank(s).get_ui())];
        e = algebra::mul(e, g);
    }
}

std::shared_ptr<const ZechField> ZechField::get(const Field& f) {
    if (!is_finite(f)) return nullptr;
    Int q = field_card(f);
    if (q > Int(static_cast<unsigned long>(kMaxCard))) return nullptr;
    std::string key = field_str(f);
    std::lock_guard<std::mutex> lock(zech_mutex);
    auto it = zech_cache.find(key);
    if (it != zech_cache.end()) return it->second;
    auto made = std::shared_ptr<const ZechField>(new ZechField(f));
    zech_cache.emplace(std::move(key), made);
    return made;
}

std::uint32_t ZechField::add(std::uint32_t a, std::uint32_t b) const {
    if (a == 0) return b;
    if (b == 0) return a;
    std::uint32_t n = q_ - 1;
    std::uint32_t i = log_[a], j = log_[b];
    std::uint32_t k = (j + n - i) % n;
    std::uint32_t z = zech_[k];
    if (z == n) return 0;
    return exp_[(i + z) % n];
}

std::uint32_t ZechField::mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    std::uint32_t n = q_ - 1;
    return exp_[(log_[a] + log_[b]) % n];
}

std::uint32_t ZechField::neg(std::uint32_t a) const {
    if (a == 0) return 0;
    std::uint32_t n = q_ - 1;
    return exp_[(log_[a] + neg_log_) % n];
}

std::uint32_t ZechField::inv(std::uint32_t a) const {
    if (a == 0) throw precondition_error("inverse of zero");
    std::uint32_t n = q_ - 1;
    return exp_[(n - log_[a]) % n];
}

bool ZechField::is_square(std::uint32_t a) const {
    if (a == 0) return true;
    if (q_ % 2 == 0) return true;
    return log_[a] % 2 == 0;
}

}  // namespace valdef::algebra
