#include <valdef/milnor.hpp>

#include <algorithm>

namespace valdef::milnor {

namespace {

using FK = algebra::FieldDesc::Kind;
using PK = valuation::Place::Kind;

const Rat& as_rat(const Elem& x) { return std::get<Rat>(x.rep()); }

bool tuple_eq(const std::vector<Elem>& a, const std::vector<Elem>& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (!algebra::elem_eq(a[i], b[i])) return false;
    return true;
}

bool is_ratfunc_over_fq(const Field& f) {
    return f->kind == FK::ratfunc && algebra::is_finite(f->base);
}

}  // namespace

SymbolSum make_symbol(const Field& field, int r, std::vector<std::vector<Elem>> tuples) {
    if (r < 0) throw precondition_error("symbol arity must be nonnegative");
    for (const auto& tup : tuples) {
        if (static_cast<int>(tup.size()) != r)
            throw precondition_error("symbol tuple length does not match the arity");
        for (const Elem& e : tup) {
            if (!algebra::field_eq(e.field(), field))
                throw precondition_error("symbol entry from the wrong field");
            if (algebra::is_zero(e)) throw precondition_error("symbol entry must be nonzero");
        }
    }
    return SymbolSum{field, r, std::move(tuples)};
}

SymbolSum symbol_add(const SymbolSum& a, const SymbolSum& b) {
    if (!algebra::field_eq(a.field, b.field) || a.r != b.r)
        throw precondition_error("adding symbols of different shapes");
    std::vector<std::vector<Elem>> terms = a.terms;
    terms.insert(terms.end(), b.terms.begin(), b.terms.end());
    return SymbolSum{a.field, a.r, std::move(terms)};
}

SymbolSum symbol_cancel(const SymbolSum& s) {
    std::vector<std::vector<Elem>> kept;
    std::vector<bool> dead(s.terms.size(), false);
    for (size_t i = 0; i < s.terms.size(); ++i) {
        if (dead[i]) continue;
        for (size_t j = i + 1; j < s.terms.size(); ++j) {
            if (!dead[j] && tuple_eq(s.terms[i], s.terms[j])) {
                dead[i] = dead[j] = true;
                break;
            }
        }
        if (!dead[i]) kept.push_back(s.terms[i]);
    }
    return SymbolSum{s.field, s.r, std::move(kept)};
}

SymbolSum drop_square_entries(const SymbolSum& s) {
    std::vector<std::vector<Elem>> kept;
    for (const auto& tup : s.terms) {
        bool has_square = std::any_of(tup.begin(), tup.end(),
                                      [](const Elem& e) { return algebra::is_square(e); });
        if (!has_square) kept.push_back(tup);
    }
    return SymbolSum{s.field, s.r, std::move(kept)};
}

std::string symbol_str(const SymbolSum& s) {
    if (s.terms.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < s.terms.size(); ++i) {
        if (i) out += " + ";
        out += "{";
        for (size_t j = 0; j < s.terms[i].size(); ++j) {
            if (j) out += ",";
            out += algebra::elem_str(s.terms[i][j]);
        }
        out += "}";
    }
    return out;
}

SymbolSum boundary(const SymbolSum& s, const valuation::Place& v) {
    if (!algebra::field_eq(s.field, v.field))
        throw precondition_error("boundary at a place of a different field");
    if (s.r < 1) throw precondition_error("boundary needs arity at least 1");
    Field kappa = valuation::residue_field(v);  // rejects the archimedean place

    Elem pi = algebra::one(s.field);
    switch (v.kind) {
        case PK::q_prime: pi = algebra::from_int(s.field, v.p); break;
        case PK::func_irred: pi = algebra::poly_to_elem(s.field, v.g); break;
        case PK::func_infty:
            pi = algebra::inv(algebra::poly_to_elem(s.field, algebra::poly_x(s.field->base)));
            break;
        default: throw precondition_error("boundary: bad place kind");
    }

    std::vector<std::vector<Elem>> out;
    for (const auto& tup : s.terms) {
        // split each entry as pi^m * unit; only odd-order slots matter mod 2
        std::vector<long> ord(tup.size());
        std::vector<Elem> res_unit;
        std::vector<size_t> odd_slots;
        for (size_t i = 0; i < tup.size(); ++i) {
            ord[i] = valuation::order(v, tup[i]);
            Elem unit = algebra::mul(tup[i], algebra::pow_elem(pi, Int(-ord[i])));
            res_unit.push_back(valuation::residue(v, unit));
            if (ord[i] % 2 != 0) odd_slots.push_back(i);
        }
        Elem minus_one = algebra::from_int(kappa, -1);
        // {pi^m u, ...} expands over subsets of odd slots; repeated pi entries
        // rewrite via {pi, pi} = {pi, -1}, and the boundary consumes one pi
        size_t k = odd_slots.size();
        for (size_t mask = 1; mask < (size_t{1} << k); ++mask) {
            std::vector<Elem> term;
            bool first_in_mask = true;
            for (size_t i = 0; i < tup.size(); ++i) {
                auto it = std::find(odd_slots.begin(), odd_slots.end(), i);
                bool in_mask = it != odd_slots.end() &&
                               (mask & (size_t{1} << (it - odd_slots.begin()))) != 0;
                if (!in_mask) {
                    term.push_back(res_unit[i]);
                } else if (first_in_mask) {
                    first_in_mask = false;  // the pi slot: consumed by the boundary
                } else {
                    term.push_back(minus_one);
                }
            }
            out.push_back(std::move(term));
        }
    }
    return symbol_cancel(SymbolSum{kappa, s.r - 1, std::move(out)});
}

namespace {

// union of the finite places carrying any entry of any term, plus infinity
std::vector<valuation::Place> ratfunc_support_places(const SymbolSum& s) {
    std::vector<valuation::Place> places;
    places.push_back(valuation::place_func_infty(s.field));
    for (const auto& tup : s.terms)
        for (const Elem& e : tup)
            for (const auto& [v, m] : valuation::support(e)) {
                if (v.kind != PK::func_irred) continue;
                bool seen = false;
                for (const auto& w : places) seen = seen || valuation::place_eq(w, v);
                if (!seen) places.push_back(v);
            }
    return places;
}

std::vector<valuation::Place> q_support_places(const SymbolSum& s) {
    std::vector<Rat> entries;
    for (const auto& tup : s.terms)
        for (const Elem& e : tup) entries.push_back(as_rat(e));
    std::vector<valuation::Place> places;
    places.push_back(valuation::place_qinfty());
    places.push_back(valuation::place_qprime(2));
    auto add_odd = [&places](Int n) {
        n = abs(n);
        for (Int q = 3; q * q <= n; q += 2) {
            if (n % q == 0) {
                valuation::Place cand = valuation::place_qprime(q);
                bool seen = false;
                for (const auto& w : places) seen = seen || valuation::place_eq(w, cand);
                if (!seen) places.push_back(cand);
                while (n % q == 0) n /= q;
            }
        }
        while (n % 2 == 0) n /= 2;
        if (n > 1) {
            valuation::Place cand = valuation::place_qprime(n);
            bool seen = false;
            for (const auto& w : places) seen = seen || valuation::place_eq(w, cand);
            if (!seen) places.push_back(cand);
        }
    };
    for (const Rat& e : entries) {
        add_odd(rat_num(e));
        add_odd(rat_den(e));
    }
    return places;
}

// product of all entries of an arity-1 sum
Elem flatten_product(const SymbolSum& s) {
    Elem prod = algebra::one(s.field);
    for (const auto& tup : s.terms) prod = algebra::mul(prod, tup[0]);
    return prod;
}

}  // namespace

bool is_trivial(const SymbolSum& s) {
    SymbolSum c = symbol_cancel(s);
    if (c.r == 0) return c.terms.empty();

    const Field& f = c.field;
    if (algebra::is_finite(f)) {
        if (c.r >= 2) return true;
        return algebra::is_square(flatten_product(c));
    }
    if (f->kind == FK::q) {
        if (c.r == 1) return algebra::is_square(flatten_product(c));
        if (c.r == 2) {
            for (const auto& v : q_support_places(c)) {
                int prod = 1;
                for (const auto& tup : c.terms)
                    prod *= quadform::hilbert_symbol(as_rat(tup[0]), as_rat(tup[1]), v);
                if (prod != 1) return false;
            }
            return true;
        }
        if (c.r == 3) {
            // only the real place survives: a 3-symbol is nonzero there
            // exactly when all three entries are negative
            int odd = 0;
            for (const auto& tup : c.terms) {
                bool all_neg = as_rat(tup[0]) < 0 && as_rat(tup[1]) < 0 && as_rat(tup[2]) < 0;
                if (all_neg) odd ^= 1;
            }
            return odd == 0;
        }
        throw undecidable_error("no triviality decision over Q for arity > 3");
    }
    if (is_ratfunc_over_fq(f)) {
        if (c.r == 1) return algebra::is_square(flatten_product(c));
        if (c.r >= 3) return true;
        if (algebra::field_char(f) == 2)
            throw undecidable_error("no residue criterion for 2-symbols in characteristic 2");
        for (const auto& v : ratfunc_support_places(c)) {
            SymbolSum res = boundary(c, v);
            if (!algebra::is_square(flatten_product(res))) return false;
        }
        return true;
    }
    throw undecidable_error("no triviality decision over " + algebra::field_str(f));
}

LocalInvariantMap hbn_invariants(const Rat& a, const Rat& b) {
    if (a == 0 || b == 0) throw precondition_error("invariants of zero");
    auto Q = algebra::make_q();
    SymbolSum s =
        make_symbol(Q, 2, {{algebra::from_rat(Q, a), algebra::from_rat(Q, b)}});
    LocalInvariantMap out;
    for (const auto& v : q_support_places(s))
        if (quadform::hilbert_symbol(a, b, v) == -1) out.odd_places.push_back(v);
    std::sort(out.odd_places.begin(), out.odd_places.end(),
              [](const auto& x, const auto& y) { return valuation::place_cmp(x, y) < 0; });
    return out;
}

bool reciprocity_check(const Elem& f, const Elem& g) {
    const Field& field = f.field();
    if (!is_ratfunc_over_fq(field)) throw precondition_error("reciprocity lives over F_q(t)");
    if (algebra::field_char(field) == 2) throw precondition_error("odd characteristic required");
    if (!algebra::field_eq(g.field(), field)) throw precondition_error("operands from different fields");
    const Field& base = field->base;

    SymbolSum s = make_symbol(field, 2, {{f, g}});
    Elem total = algebra::one(base);
    for (const auto& v : ratfunc_support_places(s)) {
        SymbolSum res = boundary(s, v);
        for (const auto& tup : res.terms) {
            const Elem& rho = tup[0];
            if (algebra::field_eq(rho.field(), base)) {
                total = algebra::mul(total, rho);
                continue;
            }
            total = algebra::mul(total, algebra::norm_to_base(rho));
        }
    }
    return algebra::is_square(total);
}

}  // namespace valdef::milnor
