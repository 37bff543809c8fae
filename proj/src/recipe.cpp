#include <valdef/recipe.hpp>

#include <valdef/algebra.hpp>

#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>

namespace valdef::recipe {

namespace F = fol;
using F::Formula;
using F::Term;

namespace {

// ---------------------------------------------------------------------------
// variable bookkeeping

void collect_term_vars(const TermPtr& t, std::set<std::string>& out) {
    if (!t) return;
    if (t->kind == Term::Kind::var) out.insert(t->name);
    collect_term_vars(t->a, out);
    collect_term_vars(t->b, out);
}

// every variable name occurring anywhere, bound or free
void collect_all_vars(const FormulaPtr& f, std::set<std::string>& out,
                      std::unordered_set<const Formula*>& seen) {
    if (!f || !seen.insert(f.get()).second) return;
    collect_term_vars(f->t1, out);
    collect_term_vars(f->t2, out);
    for (const auto& v : f->vars) out.insert(v);
    if (f->set && f->set->delta) collect_term_vars(f->set->delta, out);
    for (const auto& a : f->args) collect_term_vars(a, out);
    collect_all_vars(f->f1, out, seen);
    collect_all_vars(f->f2, out, seen);
}

std::set<std::string> all_vars(const FormulaPtr& f) {
    std::set<std::string> out;
    std::unordered_set<const Formula*> seen;
    collect_all_vars(f, out, seen);
    return out;
}

TermPtr t_sub(TermPtr a, TermPtr b) { return F::t_add(std::move(a), F::t_neg(std::move(b))); }

FormulaPtr nonzero(const TermPtr& t) { return F::f_not(F::f_eq(t, F::t_zero())); }

// ---------------------------------------------------------------------------
// binder renaming, used to keep relativization capture-free when the witness
// term eps mentions variables the formula happens to bind

FormulaPtr rename_binders_avoiding(const FormulaPtr& f, const std::set<std::string>& avoid,
                                   const std::set<std::string>& taken) {
    if (!f) return f;
    auto node = std::make_shared<Formula>(*f);
    if (!f->vars.empty()) {
        for (auto& v : node->vars) {
            if (!avoid.count(v)) continue;
            std::string fresh = v + "'";
            while (avoid.count(fresh) || taken.count(fresh)) fresh += "'";
            node->f1 = F::substitute(node->f1, v, F::t_var(fresh));
            v = fresh;
        }
    }
    node->f1 = rename_binders_avoiding(node->f1, avoid, taken);
    node->f2 = rename_binders_avoiding(node->f2, avoid, taken);
    return node;
}

// ---------------------------------------------------------------------------
// relativization

// variables that appear inside some SetRef parameter term; they keep
// base-field semantics, so their binders stay single under relativization
void collect_set_params(const FormulaPtr& f, std::set<std::string>& out,
                        std::unordered_set<const Formula*>& seen) {
    if (!f || !seen.insert(f.get()).second) return;
    if (f->set && f->set->delta) collect_term_vars(f->set->delta, out);
    collect_set_params(f->f1, out, seen);
    collect_set_params(f->f2, out, seen);
}

struct Relativizer {
    TermPtr eps;
    std::string s1, s2;  // coordinate suffixes, collision-checked up front
    std::set<std::string> set_params;

    std::pair<TermPtr, TermPtr> term(const TermPtr& t,
                                     const std::set<std::string>& paired) const {
        switch (t->kind) {
            case Term::Kind::var:
                if (paired.count(t->name))
                    return {F::t_var(t->name + s1), F::t_var(t->name + s2)};
                return {t, F::t_zero()};
            case Term::Kind::zero:
                return {F::t_zero(), F::t_zero()};
            case Term::Kind::one:
                return {F::t_one(), F::t_zero()};
            case Term::Kind::add: {
                auto [a1, a2] = term(t->a, paired);
                auto [b1, b2] = term(t->b, paired);
                return {F::t_add(a1, b1), F::t_add(a2, b2)};
            }
            case Term::Kind::neg: {
                auto [a1, a2] = term(t->a, paired);
                return {F::t_neg(a1), F::t_neg(a2)};
            }
            case Term::Kind::mul: {
                auto [a1, a2] = term(t->a, paired);
                auto [b1, b2] = term(t->b, paired);
                // (a1, a2)(b1, b2) = (a1 b1 + eps a2 b2, a1 b2 + a2 b1)
                return {F::t_add(F::t_mul(a1, b1), F::t_mul(eps, F::t_mul(a2, b2))),
                        F::t_add(F::t_mul(a1, b2), F::t_mul(a2, b1))};
            }
        }
        throw std::logic_error("relativize: unknown term kind");
    }

    FormulaPtr formula(const FormulaPtr& f, std::set<std::string> paired) const {
        switch (f->kind) {
            case Formula::Kind::equals: {
                auto [l1, l2] = term(f->t1, paired);
                auto [r1, r2] = term(f->t2, paired);
                return F::f_and(F::f_eq(l1, r1), F::f_eq(l2, r2));
            }
            case Formula::Kind::f_and:
                return F::f_and(formula(f->f1, paired), formula(f->f2, paired));
            case Formula::Kind::f_or:
                return F::f_or(formula(f->f1, paired), formula(f->f2, paired));
            case Formula::Kind::f_not:
                return F::f_not(formula(f->f1, paired));
            case Formula::Kind::implies:
                return F::f_imp(formula(f->f1, paired), formula(f->f2, paired));
            case Formula::Kind::exists:
            case Formula::Kind::forall: {
                std::vector<std::string> coords;
                for (const auto& v : f->vars) {
                    if (set_params.count(v)) {
                        // set-parameter variables stay base-field objects
                        paired.erase(v);
                        coords.push_back(v);
                        continue;
                    }
                    paired.insert(v);
                    coords.push_back(v + s1);
                    coords.push_back(v + s2);
                }
                auto body = formula(f->f1, paired);
                return f->kind == Formula::Kind::exists ? F::f_exists(coords, body)
                                                        : F::f_forall(coords, body);
            }
            case Formula::Kind::exists_rel:
            case Formula::Kind::forall_rel: {
                // relativized binders already range over base-field objects
                for (const auto& v : f->vars) paired.erase(v);
                auto body = formula(f->f1, paired);
                return f->kind == Formula::Kind::exists_rel
                           ? F::f_exists_rel(*f->set, f->vars, body)
                           : F::f_forall_rel(*f->set, f->vars, body);
            }
            case Formula::Kind::macro:
                return f;
        }
        throw std::logic_error("relativize: unknown formula kind");
    }
};

// ---------------------------------------------------------------------------
// fresh-name pools

std::string pool_suffix(const std::set<std::string>& taken, const std::string& base,
                        int count) {
    std::string suffix;
    for (bool retry = true; retry;) {
        retry = false;
        for (int i = 1; i <= count; ++i) {
            if (taken.count(base + std::to_string(i) + suffix)) {
                suffix += "'";
                retry = true;
                break;
            }
        }
    }
    return suffix;
}

// existential let: exists v..: v = value ∧ body, used to reuse one shared
// template subtree per predicate instead of cloning it per call site
FormulaPtr let_in(const std::vector<std::pair<std::string, TermPtr>>& binds,
                  const FormulaPtr& body) {
    std::vector<std::string> vars;
    std::vector<FormulaPtr> parts;
    for (const auto& [v, val] : binds) {
        vars.push_back(v);
        parts.push_back(F::f_eq(F::t_var(v), val));
    }
    parts.push_back(body);
    return F::f_exists(std::move(vars), F::f_and_all(parts));
}

// ---------------------------------------------------------------------------
// square case split on eps: read sigma inside K[sqrt(eps)]

FormulaPtr square_case_split(const std::string& witness, const TermPtr& eps,
                             const FormulaPtr& sigma) {
    auto w = F::t_var(witness);
    auto has_root = F::f_exists({witness}, F::f_eq(F::t_mul(w, w), eps));
    auto with_root = F::f_exists({witness}, F::f_and(F::f_eq(F::t_mul(w, w), eps), sigma));
    return F::f_or(with_root,
                   F::f_and(F::f_not(has_root), relativize_to_quadratic_ext(sigma, eps)));
}

// ---------------------------------------------------------------------------
// valuation-ring membership chain, shared by emit_val_d and emit_deg_N.
// Templates are built once over a fixed argument variable and reused by
// pointer through let_in; only the substitution f -> fp clones a tree.

struct RingChain {
    FormulaPtr r0_template;  // free: r0x (candidate), f, t1..te
};

RingChain build_ring_chain(int e) {
    auto theta_body = square_case_split("i", F::t_neg(F::t_one()), emit_phi_ft(e));
    auto theta_template = square_case_split("j", F::t_var("te"), theta_body);
    auto theta_at = [&](const TermPtr& eps) {
        return let_in({{"te", eps}}, theta_template);
    };

    auto w = F::t_var("w");
    auto tb_template = F::f_exists(
        {"w"}, F::f_and_all({F::f_eq(F::t_mul(w, F::t_var("tb")), F::t_one()),
                             F::f_not(theta_at(w)), F::f_not(theta_at(t_sub(w, F::t_one())))}));
    auto tb_at = [&](const TermPtr& xi) { return let_in({{"tb", xi}}, tb_template); };

    auto a_template = F::f_exists(
        {"xi1", "xi2"},
        F::f_and_all({tb_at(F::t_var("xi1")), tb_at(F::t_var("xi2")),
                      F::f_eq(F::t_var("az"), t_sub(F::t_var("xi1"), F::t_var("xi2")))}));
    auto a_at = [&](const TermPtr& z) { return let_in({{"az", z}}, a_template); };

    auto r_template = F::f_forall(
        {"y1", "y2"},
        F::f_imp(F::f_and(tb_at(F::t_var("y1")), tb_at(F::t_var("y2"))),
                 a_at(F::t_mul(F::t_var("rr"), t_sub(F::t_var("y1"), F::t_var("y2"))))));
    auto r_fp_template = F::substitute(r_template, "f", F::t_var("fp"));
    auto r_at = [&](const TermPtr& r, const FormulaPtr& tmpl) {
        return let_in({{"rr", r}}, tmpl);
    };

    auto f_v = F::t_var("f");
    auto r0_template = F::f_exists(
        {"fp", "r1", "r2"},
        F::f_and_all(
            {F::f_eq(F::t_mul(F::t_var("fp"), F::t_add(f_v, F::t_one())), f_v),
             r_at(F::t_var("r1"), r_template), r_at(F::t_var("r2"), r_fp_template),
             F::f_eq(F::t_var("r0x"), F::t_mul(F::t_var("r1"), F::t_var("r2")))}));
    return {r0_template};
}

FormulaPtr r0_at(const RingChain& chain, const TermPtr& x) {
    return let_in({{"r0x", x}}, chain.r0_template);
}

// membership with both candidate and function let-bound, for formulas that
// range over several function parameters at once
FormulaPtr ring_member(const RingChain& chain, const TermPtr& x, const TermPtr& fn) {
    return let_in({{"r0x", x}, {"f", fn}}, chain.r0_template);
}

}  // namespace

// ---------------------------------------------------------------------------

EmitterConfig make_config(int d, const Int& char_p) {
    if (d < 2) throw precondition_error("make_config: d must be at least 2");
    if (char_p != 0 && (char_p == 2 || mpz_probab_prime_p(char_p.get_mpz_t(), 32) == 0))
        throw precondition_error("make_config: characteristic must be 0 or an odd prime");
    return {d, d - 2, char_p};
}

FormulaPtr emit_pfister_eq(const std::vector<TermPtr>& coeffs, int r) {
    if (r < 0 || r > 16) throw precondition_error("emit_pfister_eq: r out of range");
    if (static_cast<int>(coeffs.size()) != r)
        throw precondition_error("emit_pfister_eq: need exactly r coefficient terms");

    std::set<std::string> taken;
    for (const auto& c : coeffs) collect_term_vars(c, taken);
    const long n = 1L << r;
    std::string suffix = pool_suffix(taken, "x", static_cast<int>(n));

    std::vector<TermPtr> xs;
    for (long i = 1; i <= n; ++i) xs.push_back(F::t_var("x" + std::to_string(i) + suffix));

    std::vector<FormulaPtr> zero_eqs;
    std::vector<TermPtr> summands;
    for (long s = 0; s < n; ++s) {
        zero_eqs.push_back(F::f_eq(xs[s], F::t_zero()));
        TermPtr t = F::t_mul(xs[s], xs[s]);
        TermPtr coeff;
        for (int i = 0; i < r; ++i) {
            if (!(s >> i & 1)) continue;
            auto factor = F::t_neg(coeffs[i]);
            coeff = coeff ? F::t_mul(coeff, factor) : factor;
        }
        summands.push_back(coeff ? F::t_mul(coeff, t) : t);
    }
    TermPtr sum = summands[0];
    for (long s = 1; s < n; ++s) sum = F::t_add(sum, summands[s]);

    std::vector<std::string> names;
    for (const auto& x : xs) names.push_back(x->name);
    return F::f_exists(names, F::f_and(F::f_not(F::f_and_all(zero_eqs)),
                                       F::f_eq(sum, F::t_zero())));
}

FormulaPtr relativize_to_quadratic_ext(const FormulaPtr& f, const TermPtr& eps) {
    if (!f || !eps) throw precondition_error("relativize: null argument");
    std::set<std::string> eps_vars;
    collect_term_vars(eps, eps_vars);
    auto names = all_vars(f);
    FormulaPtr g = f;
    if (!eps_vars.empty()) {
        g = rename_binders_avoiding(f, eps_vars, names);
        names = all_vars(g);
    }
    names.insert(eps_vars.begin(), eps_vars.end());

    std::string s1 = "'1", s2 = "'2";
    for (bool retry = true; retry;) {
        retry = false;
        for (const auto& v : names) {
            if (names.count(v + s1) || names.count(v + s2)) {
                s1 = "'" + s1;
                s2 = "'" + s2;
                retry = true;
                break;
            }
        }
    }
    std::set<std::string> set_params;
    std::unordered_set<const Formula*> seen;
    collect_set_params(g, set_params, seen);
    return Relativizer{eps, s1, s2, std::move(set_params)}.formula(g, {});
}

FormulaPtr emit_phi0(int r) {
    if (r < 0 || r > 12) throw precondition_error("emit_phi0: r out of range");
    auto quantified_form = [](int k, bool anisotropic) {
        std::vector<std::string> names;
        std::vector<TermPtr> as;
        std::vector<FormulaPtr> guards;
        for (int i = 1; i <= k; ++i) {
            names.push_back("a" + std::to_string(i));
            as.push_back(F::t_var(names.back()));
            guards.push_back(nonzero(as.back()));
        }
        auto pfister = emit_pfister_eq(as, k);
        if (anisotropic) {
            auto body = F::f_not(pfister);
            if (k == 0) return body;
            return F::f_exists(names, F::f_and(F::f_and_all(guards), body));
        }
        return F::f_forall(names, F::f_imp(F::f_and_all(guards), pfister));
    };
    auto sigma = F::f_and(quantified_form(r, true), quantified_form(r + 1, false));
    return square_case_split("i", F::t_neg(F::t_one()), sigma);
}

FormulaPtr emit_phi_d(int d) {
    if (d < 0 || d > 11) throw precondition_error("emit_phi_d: d out of range");
    auto two = F::t_add(F::t_one(), F::t_one());
    auto char2 = F::f_eq(two, F::t_zero());
    return F::f_or(F::f_and(emit_phi0(d), char2),
                   F::f_and(emit_phi0(d + 1), F::f_not(char2)));
}

FormulaPtr emit_phi_ft(int e) {
    if (e < 0 || e > 12) throw precondition_error("emit_phi_ft: e out of range");
    std::vector<TermPtr> tuple = {F::t_var("up0"), F::t_var("u0")};
    for (int i = 1; i <= e; ++i)
        tuple.push_back(t_sub(F::t_var("t" + std::to_string(i)),
                              F::t_var("a" + std::to_string(i))));
    tuple.push_back(F::t_var("f"));

    FormulaPtr body = F::f_not(emit_pfister_eq(tuple, e + 3));
    body = F::f_exists_rel({F::SetRef::Tag::ubullet, F::t_var("d0"), ""}, {"up0", "u0"}, body);
    body = F::f_forall({"d0"}, body);
    for (int i = e; i >= 1; --i) {
        auto di = "d" + std::to_string(i);
        body = F::f_forall_rel({F::SetRef::Tag::sigma, F::t_var(di), ""},
                               {"a" + std::to_string(i)}, body);
        body = F::f_exists({di}, body);
    }
    return body;
}

FormulaPtr emit_val_d(int d) {
    if (d < 2 || d > 8) throw precondition_error("emit_val_d: d out of range");
    const int e = d - 2;
    auto chain = build_ring_chain(e);

    std::vector<TermPtr> ts;
    for (int i = 1; i <= e; ++i) ts.push_back(F::t_var("t" + std::to_string(i)));

    std::vector<FormulaPtr> parts;
    parts.push_back(F::f_macro("poonen_psi", ts));
    parts.push_back(F::f_macro("poonen_constants", {}));
    for (int i = 1; i <= e; ++i) {
        auto si = F::t_var("s" + std::to_string(i));
        parts.push_back(F::f_exists({si->name}, F::f_eq(F::t_mul(si, si), ts[i - 1])));
    }
    auto y = F::t_var("y");
    auto z = F::t_var("z");
    parts.push_back(F::f_forall(
        {"y"},
        F::f_imp(nonzero(y),
                 F::f_or(r0_at(chain, y),
                         F::f_exists({"z"}, F::f_and(F::f_eq(F::t_mul(z, y), F::t_one()),
                                                     r0_at(chain, z)))))));
    parts.push_back(F::f_exists({"y"}, F::f_not(r0_at(chain, y))));
    parts.push_back(r0_at(chain, F::t_var("x")));
    return F::f_and_all(parts);
}

FormulaPtr emit_deg_N(int N) {
    if (N < 1 || N > 8) throw precondition_error("emit_deg_N: N out of range");
    auto chain = build_ring_chain(0);
    auto u = F::t_var("u");

    auto member = [&](const TermPtr& x, const TermPtr& fn) {
        return ring_member(chain, x, fn);
    };
    auto ring_of = [&](const std::string& v) { return F::t_var(v); };

    // proper valuation ring attached to the function parameter
    auto vr = [&](const TermPtr& fn) {
        auto vy = F::t_var("vy");
        auto vz = F::t_var("vz");
        auto total = F::f_forall(
            {"vy"},
            F::f_imp(nonzero(vy),
                     F::f_or(member(vy, fn),
                             F::f_exists({"vz"},
                                         F::f_and(F::f_eq(F::t_mul(vz, vy), F::t_one()),
                                                  member(vz, fn))))));
        auto proper = F::f_exists({"vy"}, F::f_not(member(vy, fn)));
        return F::f_and(total, proper);
    };
    // nonunit of the ring
    auto m_mem = [&](const TermPtr& x, const TermPtr& fn) {
        auto vz = F::t_var("vz");
        return F::f_and(member(x, fn),
                        F::f_not(F::f_exists(
                            {"vz"}, F::f_and(F::f_eq(F::t_mul(vz, x), F::t_one()),
                                             member(vz, fn)))));
    };
    // x is a product of k maximal-ideal elements; inside a valuation ring
    // this says exactly v(x) >= k
    auto in_m_pow = [&](const TermPtr& x, int k, const TermPtr& fn) {
        std::vector<std::string> names;
        std::vector<FormulaPtr> parts;
        TermPtr prod;
        for (int i = 1; i <= k; ++i) {
            names.push_back("n" + std::to_string(i));
            auto ni = F::t_var(names.back());
            parts.push_back(m_mem(ni, fn));
            prod = prod ? F::t_mul(prod, ni) : ni;
        }
        parts.push_back(F::f_eq(x, prod));
        return F::f_exists(names, F::f_and_all(parts));
    };
    auto order_exact = [&](const TermPtr& fn, int k) {
        return F::f_and(in_m_pow(u, k, fn), F::f_not(in_m_pow(u, k + 1, fn)));
    };
    auto rings_equal = [&](const TermPtr& f1, const TermPtr& f2) {
        auto re = F::t_var("re");
        return F::f_forall({"re"}, F::f_and(F::f_imp(member(re, f1), member(re, f2)),
                                            F::f_imp(member(re, f2), member(re, f1))));
    };
    // residue dimension over the constant field, bounded via linear
    // combinations with macro-recognized constant coefficients
    auto dim_le = [&](const TermPtr& fn, int k) {
        std::vector<std::string> bs, cs;
        std::vector<FormulaPtr> b_in, c_const, c_zero;
        TermPtr combo;
        for (int i = 1; i <= k + 1; ++i) {
            bs.push_back("b" + std::to_string(i));
            cs.push_back("c" + std::to_string(i));
            auto bi = F::t_var(bs.back());
            auto ci = F::t_var(cs.back());
            b_in.push_back(member(bi, fn));
            c_const.push_back(F::f_macro("poonen_constants", {ci}));
            c_zero.push_back(F::f_eq(ci, F::t_zero()));
            auto term = F::t_mul(ci, bi);
            combo = combo ? F::t_add(combo, term) : term;
        }
        auto dep = F::f_exists(
            cs, F::f_and_all({F::f_and_all(c_const), F::f_not(F::f_and_all(c_zero)),
                              m_mem(combo, fn)}));
        return F::f_forall(bs, F::f_imp(F::f_and_all(b_in), dep));
    };
    auto dim_ge = [&](const TermPtr& fn, int k) {
        std::vector<std::string> bs, cs;
        std::vector<FormulaPtr> b_in, c_const, c_zero;
        TermPtr combo;
        for (int i = 1; i <= k; ++i) {
            bs.push_back("b" + std::to_string(i));
            cs.push_back("c" + std::to_string(i));
            auto bi = F::t_var(bs.back());
            auto ci = F::t_var(cs.back());
            b_in.push_back(member(bi, fn));
            c_const.push_back(F::f_macro("poonen_constants", {ci}));
            c_zero.push_back(F::f_eq(ci, F::t_zero()));
            auto term = F::t_mul(ci, bi);
            combo = combo ? F::t_add(combo, term) : term;
        }
        auto indep = F::f_forall(
            cs, F::f_imp(F::f_and(F::f_and_all(c_const), F::f_not(F::f_and_all(c_zero))),
                         F::f_not(m_mem(combo, fn))));
        return F::f_exists(bs, F::f_and(F::f_and_all(b_in), indep));
    };

    std::vector<FormulaPtr> clauses;

    // no place sees u with order N + 1
    clauses.push_back(F::f_not(F::f_exists(
        {"h0"}, F::f_and(vr(ring_of("h0")), order_exact(ring_of("h0"), N + 1)))));

    // at most N distinct places of each order up to N
    for (int k = 1; k <= N; ++k) {
        std::vector<std::string> hs;
        std::vector<FormulaPtr> all_at_k;
        for (int i = 0; i <= N; ++i) {
            hs.push_back("h" + std::to_string(i));
            all_at_k.push_back(F::f_and(vr(ring_of(hs.back())),
                                        order_exact(ring_of(hs.back()), k)));
        }
        std::vector<FormulaPtr> coincide;
        for (int i = 0; i <= N; ++i)
            for (int j = i + 1; j <= N; ++j)
                coincide.push_back(rings_equal(ring_of(hs[i]), ring_of(hs[j])));
        clauses.push_back(
            F::f_forall(hs, F::f_imp(F::f_and_all(all_at_k), F::f_or_all(coincide))));
    }

    // some composition of N = sum order * residue-dimension is realized by
    // pairwise distinct places covering every zero of u
    std::vector<std::vector<std::pair<int, int>>> comps;
    std::vector<std::pair<int, int>> cur;
    auto enumerate = [&](auto&& self, int rem, std::pair<int, int> min_part) -> void {
        if (rem == 0) {
            comps.push_back(cur);
            return;
        }
        for (int o = min_part.first; o <= rem; ++o)
            for (int dd = o == min_part.first ? min_part.second : 1; o * dd <= rem; ++dd) {
                cur.emplace_back(o, dd);
                self(self, rem - o * dd, {o, dd});
                cur.pop_back();
            }
    };
    enumerate(enumerate, N, {1, 1});

    std::vector<FormulaPtr> comp_clauses;
    for (const auto& comp : comps) {
        const int m = static_cast<int>(comp.size());
        std::vector<std::string> qs;
        std::vector<FormulaPtr> parts;
        for (int j = 0; j < m; ++j) {
            qs.push_back("q" + std::to_string(j + 1));
            auto qj = ring_of(qs.back());
            parts.push_back(F::f_and_all({vr(qj), order_exact(qj, comp[j].first),
                                          dim_le(qj, comp[j].second),
                                          dim_ge(qj, comp[j].second)}));
        }
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                parts.push_back(F::f_not(rings_equal(ring_of(qs[i]), ring_of(qs[j]))));
        auto g = ring_of("g");
        std::vector<FormulaPtr> hits;
        for (int j = 0; j < m; ++j) hits.push_back(rings_equal(g, ring_of(qs[j])));
        parts.push_back(F::f_forall(
            {"g"}, F::f_imp(F::f_and(vr(g), in_m_pow(u, 1, g)), F::f_or_all(hits))));
        comp_clauses.push_back(F::f_exists(qs, F::f_and_all(parts)));
    }
    clauses.push_back(F::f_or_all(comp_clauses));
    return F::f_and_all(clauses);
}

FormulaPtr emit_iso_sentence(const IsoData& data) {
    if (data.characteristic != 0 &&
        (data.characteristic == 2 ||
         mpz_probab_prime_p(data.characteristic.get_mpz_t(), 32) == 0))
        throw precondition_error("emit_iso_sentence: characteristic must be 0 or an odd prime");
    if (data.e < 0 || data.e > 12) throw precondition_error("emit_iso_sentence: e out of range");
    if (data.N < 1 || data.N > 8) throw precondition_error("emit_iso_sentence: N out of range");
    if (data.fk.empty()) throw precondition_error("emit_iso_sentence: empty defining equation");

    int max_u = 0;
    for (const auto& mono : data.fk) {
        if (static_cast<int>(mono.t_exp.size()) != data.e)
            throw precondition_error("emit_iso_sentence: monomial arity mismatch");
        if (mono.u_exp < 0) throw precondition_error("emit_iso_sentence: negative exponent");
        for (int x : mono.t_exp)
            if (x < 0) throw precondition_error("emit_iso_sentence: negative exponent");
        max_u = std::max(max_u, mono.u_exp);
    }
    if (max_u < 1) throw precondition_error("emit_iso_sentence: equation is constant in u");
    bool monic = false;
    for (const auto& mono : data.fk) {
        if (mono.u_exp != max_u) continue;
        bool pure = true;
        for (int x : mono.t_exp) pure = pure && x == 0;
        if (pure && mono.coeff == 1) monic = true;
        if (pure && mono.coeff != 1)
            throw precondition_error("emit_iso_sentence: equation is not monic in u");
    }
    if (!monic) throw precondition_error("emit_iso_sentence: equation is not monic in u");
    bool separable = false;
    for (const auto& mono : data.fk) {
        if (mono.u_exp == 0) continue;
        Int lead = mono.coeff * mono.u_exp;
        if (data.characteristic == 0 || lead % data.characteristic != 0) separable = true;
    }
    if (!separable) throw precondition_error("emit_iso_sentence: equation is not separable in u");

    std::vector<TermPtr> ts;
    std::vector<std::string> binders;
    for (int i = 1; i <= data.e; ++i) {
        binders.push_back("t" + std::to_string(i));
        ts.push_back(F::t_var(binders.back()));
    }
    binders.push_back("u");
    auto u = F::t_var("u");

    FormulaPtr char_clause;
    if (data.characteristic == 0) {
        char_clause = F::f_not(F::f_eq(F::t_add(F::t_one(), F::t_one()), F::t_zero()));
    } else {
        if (!data.characteristic.fits_sint_p())
            throw precondition_error("emit_iso_sentence: characteristic too large to spell out");
        char_clause = F::f_eq(F::t_int(data.characteristic.get_si()), F::t_zero());
    }

    TermPtr fk_sum;
    for (const auto& mono : data.fk) {
        if (!mono.coeff.fits_sint_p())
            throw precondition_error("emit_iso_sentence: coefficient too large to spell out");
        TermPtr t = F::t_int(mono.coeff.get_si());
        for (int k = 0; k < mono.u_exp; ++k) t = F::t_mul(t, u);
        for (int i = 0; i < data.e; ++i)
            for (int k = 0; k < mono.t_exp[i]; ++k) t = F::t_mul(t, ts[i]);
        fk_sum = fk_sum ? F::t_add(fk_sum, t) : t;
    }

    std::vector<TermPtr> iso_args = ts;
    iso_args.push_back(u);
    auto body = F::f_and_all({char_clause, F::f_macro("poonen_psi", ts),
                              F::f_macro("poonen_constants", {}),
                              F::f_eq(fk_sum, F::t_zero()),
                              F::f_macro("rumely_iso", iso_args), emit_deg_N(data.N)});
    return F::f_exists(binders, body);
}

}  // namespace valdef::recipe
