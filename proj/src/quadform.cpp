#include <valdef/quadform.hpp>

#include <algorithm>

namespace valdef::quadform {

namespace {

using FK = algebra::FieldDesc::Kind;
using PK = valuation::Place::Kind;

const Rat& as_rat(const Elem& x) { return std::get<Rat>(x.rep()); }

bool rat_is_square(const Rat& x) {
    return algebra::is_square(algebra::from_rat(algebra::make_q(), x));
}

}  // namespace

QForm make_form(const Field& field, std::vector<Elem> coeffs) {
    if (coeffs.empty()) throw precondition_error("a quadratic form needs at least one coefficient");
    for (const Elem& c : coeffs)
        if (!algebra::field_eq(c.field(), field))
            throw precondition_error("form coefficient from the wrong field");
    return QForm{field, std::move(coeffs)};
}

int form_dim(const QForm& q) { return static_cast<int>(q.coeffs.size()); }

bool form_degenerate(const QForm& q) {
    return std::any_of(q.coeffs.begin(), q.coeffs.end(),
                       [](const Elem& c) { return algebra::is_zero(c); });
}

std::string form_str(const QForm& q) {
    std::string out = "<";
    for (size_t i = 0; i < q.coeffs.size(); ++i) {
        if (i) out += ",";
        out += algebra::elem_str(q.coeffs[i]);
    }
    return out + ">";
}

QForm pfister(const Field& field, const std::vector<Elem>& a) {
    for (const Elem& ai : a) {
        if (!algebra::field_eq(ai.field(), field))
            throw precondition_error("pfister entry from the wrong field");
        if (algebra::is_zero(ai)) throw precondition_error("pfister entry must be nonzero");
    }
    size_t r = a.size();
    std::vector<Elem> coeffs;
    coeffs.reserve(size_t{1} << r);
    for (size_t mask = 0; mask < (size_t{1} << r); ++mask) {
        Elem c = algebra::one(field);
        for (size_t i = 0; i < r; ++i)
            if (mask & (size_t{1} << i)) c = algebra::mul(c, algebra::neg(a[i]));
        coeffs.push_back(std::move(c));
    }
    return QForm{field, std::move(coeffs)};
}

Elem evaluate(const QForm& q, const std::vector<Elem>& x) {
    if (x.size() != q.coeffs.size())
        throw precondition_error("evaluation vector length does not match the form dimension");
    Elem acc = algebra::zero(q.field);
    for (size_t i = 0; i < x.size(); ++i) {
        if (!algebra::field_eq(x[i].field(), q.field))
            throw precondition_error("evaluation entry from the wrong field");
        acc = algebra::add(acc, algebra::mul(q.coeffs[i], algebra::mul(x[i], x[i])));
    }
    return acc;
}

bool isotropic_fq(const QForm& q) {
    if (!algebra::is_finite(q.field)) throw precondition_error("isotropic_fq needs a finite field");
    if (form_degenerate(q)) return true;
    int n = form_dim(q);
    if (n >= 3) return true;
    if (n == 2) return algebra::is_square(algebra::neg(algebra::mul(q.coeffs[0], q.coeffs[1])));
    return false;
}

bool isotropic_bruteforce_fq(const QForm& q) {
    if (!algebra::is_finite(q.field)) throw precondition_error("search needs a finite field");
    int n = form_dim(q);
    unsigned long card = q.field->kind == FK::fp ? q.field->p.get_ui()
                                                 : algebra::field_card(q.field).get_ui();
    if (auto zf = algebra::ZechField::get(q.field)) {
        std::vector<uint32_t> c(n);
        for (int i = 0; i < n; ++i)
            c[i] = static_cast<uint32_t>(algebra::elem_rank(q.coeffs[i]).get_ui());
        std::vector<uint32_t> x(n, 0);
        while (true) {
            // advance odometer; skip the all-zero vector
            int pos = 0;
            while (pos < n && x[pos] + 1 == card) x[pos++] = 0;
            if (pos == n) return false;
            ++x[pos];
            uint32_t acc = 0;
            for (int i = 0; i < n; ++i) acc = zf->add(acc, zf->mul(c[i], zf->mul(x[i], x[i])));
            if (acc == 0) return true;
        }
    }
    std::vector<unsigned long> idx(n, 0);
    while (true) {
        int pos = 0;
        while (pos < n && idx[pos] + 1 == card) idx[pos++] = 0;
        if (pos == n) return false;
        ++idx[pos];
        std::vector<Elem> x;
        x.reserve(n);
        for (int i = 0; i < n; ++i) x.push_back(algebra::enum_elem(q.field, Int(idx[i])));
        if (algebra::is_zero(evaluate(q, x))) return true;
    }
}

bool isotropic_bruteforce_q(const QForm& q, long height) {
    if (q.field->kind != FK::q) throw precondition_error("search needs rational coefficients");
    if (height < 1) throw precondition_error("search height must be positive");
    int n = form_dim(q);
    // clearing denominators keeps the inner loop in machine integers
    Int lcm = 1;
    for (const Elem& e : q.coeffs) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), rat_den(as_rat(e)).get_mpz_t());
    std::vector<Int> big(n);
    std::vector<long> c(n);
    Int budget = (Int(1) << 62) / (Int(n) * height * height);
    bool fits = true;
    for (int i = 0; i < n; ++i) {
        big[i] = rat_num(as_rat(q.coeffs[i])) * (lcm / rat_den(as_rat(q.coeffs[i])));
        if (!big[i].fits_slong_p() || abs(big[i]) > budget)
            fits = false;
        else
            c[i] = big[i].get_si();
    }
    std::vector<long> x(n, -height);
    x[0] -= 1;  // the odometer below pre-increments
    while (true) {
        int pos = 0;
        while (pos < n && x[pos] == height) x[pos++] = -height;
        if (pos == n) return false;
        ++x[pos];
        bool all_zero = std::all_of(x.begin(), x.end(), [](long v) { return v == 0; });
        if (all_zero) continue;
        if (fits) {
            long long acc = 0;
            for (int i = 0; i < n; ++i) acc += static_cast<long long>(c[i]) * x[i] * x[i];
            if (acc == 0) return true;
        } else {
            Int acc = 0;
            for (int i = 0; i < n; ++i) acc += big[i] * x[i] * x[i];
            if (acc == 0) return true;
        }
    }
}

namespace {

long int_val2(Int n, const Int& p) {
    long v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

// decompose a nonzero rational as p^alpha * unit and return (alpha, unit mod m)
std::pair<long, Int> unit_part_mod(const Rat& a, const Int& p, const Int& m) {
    Int num = rat_num(a), den = rat_den(a);
    long alpha = int_val2(num, p) - int_val2(den, p);
    Rat u = a;
    if (alpha > 0)
        for (long i = 0; i < alpha; ++i) u /= Rat(p);
    else
        for (long i = 0; i < -alpha; ++i) u *= Rat(p);
    Int un = rat_num(u), ud = rat_den(u);
    Int udi;
    if (mpz_invert(udi.get_mpz_t(), ud.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::runtime_error("internal: unit part has a residue pole");
    return {alpha, mod_norm(un * udi, m)};
}

int legendre_unit(const Int& residue_mod_p, const Int& p) {
    Int r = residue_mod_p;
    return mpz_legendre(r.get_mpz_t(), p.get_mpz_t());
}

}  // namespace

int hilbert_symbol(const Rat& a, const Rat& b, const valuation::Place& v) {
    if (a == 0 || b == 0) throw precondition_error("hilbert symbol of zero");
    switch (v.kind) {
        case PK::q_infty: return (a < 0 && b < 0) ? -1 : 1;
        case PK::q_prime: break;
        default: throw precondition_error("hilbert symbol wants a place of Q");
    }
    const Int& p = v.p;
    if (p == 2) {
        auto [alpha, u] = unit_part_mod(a, p, Int(8));
        auto [beta, w] = unit_part_mod(b, p, Int(8));
        auto eps = [](const Int& x) { return ((x - 1) / 2) % 2 != 0 ? 1 : 0; };
        auto omega = [](const Int& x) { return ((x * x - 1) / 8) % 2 != 0 ? 1 : 0; };
        long expo = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u);
        return expo % 2 == 0 ? 1 : -1;
    }
    auto [alpha, u] = unit_part_mod(a, p, p);
    auto [beta, w] = unit_part_mod(b, p, p);
    long eps_p = ((p - 1) / 2) % 2 != 0 ? 1 : 0;
    int sign = (alpha % 2) * (beta % 2) * eps_p % 2 != 0 ? -1 : 1;
    if (beta % 2 != 0) sign *= legendre_unit(u, p);
    if (alpha % 2 != 0) sign *= legendre_unit(w, p);
    return sign;
}

namespace {

// odd primes dividing the numerator or denominator of any coefficient
std::vector<Int> odd_support_primes(const std::vector<Rat>& cs) {
    std::vector<Int> out;
    auto add_primes = [&out](Int n) {
        n = abs(n);
        for (Int q = 3; q * q <= n; q += 2) {
            if (n % q == 0) {
                if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
                while (n % q == 0) n /= q;
            }
        }
        while (n % 2 == 0) n /= 2;
        if (n > 1 && std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    };
    for (const Rat& c : cs) {
        add_primes(rat_num(c));
        add_primes(rat_den(c));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<valuation::Place> relevant_places(const std::vector<Rat>& cs) {
    std::vector<valuation::Place> places;
    places.push_back(valuation::place_qinfty());
    places.push_back(valuation::place_qprime(2));
    for (const Int& p : odd_support_primes(cs)) places.push_back(valuation::place_qprime(p));
    return places;
}

// a 4-dimensional form is anisotropic over Q_v exactly when its determinant
// is a square there and its Hasse invariant is -(-1,-1)_v
bool dim4_isotropic_locally(const std::vector<Rat>& c, const valuation::Place& v) {
    Rat det = c[0] * c[1] * c[2] * c[3];
    bool det_square;
    if (v.kind == PK::q_infty) {
        det_square = det > 0;
    } else {
        auto [alpha, u] = unit_part_mod(det, v.p, v.p == 2 ? Int(8) : v.p);
        if (alpha % 2 != 0)
            det_square = false;
        else if (v.p == 2)
            det_square = u == 1;
        else
            det_square = legendre_unit(u, v.p) == 1;
    }
    if (!det_square) return true;
    int hasse = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) hasse *= hilbert_symbol(c[i], c[j], v);
    int minus_one_pair = hilbert_symbol(Rat(-1), Rat(-1), v);
    return hasse != -minus_one_pair;
}

}  // namespace

bool isotropic_q(const QForm& q) {
    if (q.field->kind != FK::q) throw precondition_error("isotropic_q needs rational coefficients");
    if (form_degenerate(q)) return true;
    int n = form_dim(q);
    std::vector<Rat> c;
    c.reserve(n);
    for (const Elem& e : q.coeffs) c.push_back(as_rat(e));
    if (n == 1) return false;
    if (n == 2) return rat_is_square(-c[0] * c[1]);
    if (n >= 5) {
        bool pos = false, neg = false;
        for (const Rat& ci : c) (ci > 0 ? pos : neg) = true;
        return pos && neg;
    }
    if (n == 3) {
        std::vector<Rat> args = {-c[0] * c[2], -c[1] * c[2]};
        for (const auto& v : relevant_places(c))
            if (hilbert_symbol(args[0], args[1], v) != 1) return false;
        return true;
    }
    for (const auto& v : relevant_places(c))
        if (!dim4_isotropic_locally(c, v)) return false;
    return true;
}

bool pfister2_trivial_ratfunc(const Elem& a, const Elem& b) {
    const Field& field = a.field();
    if (field->kind != FK::ratfunc || !algebra::is_finite(field->base))
        throw precondition_error("pfister2_trivial_ratfunc works over F_q(t)");
    if (algebra::field_char(field) == 2) throw precondition_error("odd characteristic required");
    if (!algebra::field_eq(b.field(), field)) throw precondition_error("operands from different fields");
    if (algebra::is_zero(a) || algebra::is_zero(b)) throw precondition_error("zero entry");

    std::vector<valuation::Place> places;
    places.push_back(valuation::place_func_infty(field));
    for (const auto& [v, m] : valuation::support(a))
        if (v.kind == valuation::Place::Kind::func_irred) places.push_back(v);
    for (const auto& [v, m] : valuation::support(b)) {
        if (v.kind != valuation::Place::Kind::func_irred) continue;
        bool seen = false;
        for (const auto& w : places) seen = seen || valuation::place_eq(w, v);
        if (!seen) places.push_back(v);
    }

    for (const auto& v : places) {
        long va = valuation::order(v, a);
        long vb = valuation::order(v, b);
        // tame residue of the pair: (-1)^(va vb) a^vb b^(-va), a v-unit
        Elem tau = algebra::mul(algebra::pow_elem(a, Int(vb)), algebra::pow_elem(b, Int(-va)));
        if ((va * vb) % 2 != 0) tau = algebra::neg(tau);
        if (!algebra::is_square(valuation::residue(v, tau))) return false;
    }
    return true;
}

}  // namespace valdef::quadform
