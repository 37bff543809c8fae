#include <valdef/katocheck.hpp>
#include <valdef/quadform.hpp>

#include <algorithm>

namespace valdef::katocheck {

namespace {

using FK = algebra::FieldDesc::Kind;
using PK = valuation::Place::Kind;
using algebra::Elem;
using milnor::SymbolSum;
using nlohmann::json;

const Rat& as_rat(const Elem& x) { return std::get<Rat>(x.rep()); }

// union of finite support places of all entries, plus infinity
std::vector<valuation::Place> symbol_places_ratfunc(const SymbolSum& s) {
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
    std::sort(places.begin(), places.end(),
              [](const auto& a, const auto& b) { return valuation::place_cmp(a, b) < 0; });
    return places;
}

std::vector<valuation::Place> symbol_places_q(const SymbolSum& s) {
    std::vector<Int> primes;
    auto add = [&primes](Int n) {
        n = abs(n);
        for (Int p = 2; p * p <= n; ++p) {
            if (n % p == 0) {
                if (std::find(primes.begin(), primes.end(), p) == primes.end()) primes.push_back(p);
                while (n % p == 0) n /= p;
            }
        }
        if (n > 1 && std::find(primes.begin(), primes.end(), n) == primes.end()) primes.push_back(n);
    };
    for (const auto& tup : s.terms)
        for (const Elem& e : tup) {
            add(rat_num(as_rat(e)));
            add(rat_den(as_rat(e)));
        }
    if (std::find(primes.begin(), primes.end(), Int(2)) == primes.end()) primes.push_back(2);
    std::sort(primes.begin(), primes.end());
    std::vector<valuation::Place> places;
    for (const Int& p : primes) places.push_back(valuation::place_qprime(p));
    places.push_back(valuation::place_qinfty());
    return places;
}

int local_invariant(const SymbolSum& s, const valuation::Place& v) {
    int prod = 1;
    for (const auto& tup : s.terms)
        prod *= quadform::hilbert_symbol(as_rat(tup[0]), as_rat(tup[1]), v);
    return prod == 1 ? 0 : 1;
}

std::string verdict_merge(const std::vector<std::string>& vs) {
    bool inconclusive = false;
    for (const auto& v : vs) {
        if (v == "fail") return "fail";
        if (v == "inconclusive") inconclusive = true;
    }
    return inconclusive ? "inconclusive" : "pass";
}

}  // namespace

SchemeTag scheme_p1(const Int& q) { return SchemeTag{SchemeTag::Kind::p1_over_fq, q}; }
SchemeTag scheme_spec_z() { return SchemeTag{SchemeTag::Kind::spec_of_q_integers, 0}; }

KatoComplexInstance build_kc(const SchemeTag& tag) {
    if (tag.kind == SchemeTag::Kind::spec_of_q_integers)
        return KatoComplexInstance{tag, algebra::make_q()};
    const Int& q = tag.q;
    if (q < 3) throw precondition_error("the projective-line instance needs an odd prime power");
    if (q % 2 == 0) throw precondition_error("characteristic 2 excluded");
    // factor q = p^k
    Int p = 3;
    while (q % p != 0) p += 2;
    Int rest = q;
    int k = 0;
    while (rest % p == 0) {
        rest /= p;
        ++k;
    }
    if (rest != 1) throw precondition_error(q.get_str() + " is not a prime power");
    Field base = algebra::make_fp(p);
    if (k > 1) base = algebra::make_fqquot(base, algebra::nth_irreducible(base, k).c);
    return KatoComplexInstance{tag, algebra::make_ratfunc(base, "t")};
}

std::string instance_str(const KatoComplexInstance& inst) {
    if (inst.tag.kind == SchemeTag::Kind::spec_of_q_integers) return "Spec_of_Q_integers";
    return "P1_over_Fq(" + inst.tag.q.get_str() + ")";
}

nlohmann::json check_complex(const KatoComplexInstance& inst,
                             const std::vector<SymbolSum>& samples) {
    json sample_reports = json::array();
    std::vector<std::string> verdicts;
    for (size_t idx = 0; idx < samples.size(); ++idx) {
        const SymbolSum& s = samples[idx];
        if (!algebra::field_eq(s.field, inst.function_field) || s.r != 2)
            throw precondition_error("sample is not a 2-symbol of the instance's field");
        json trace = json::array();
        std::string verdict;
        if (inst.tag.kind == SchemeTag::Kind::p1_over_fq) {
            const Field& base = inst.function_field->base;
            Elem total = algebra::one(base);
            for (const auto& v : symbol_places_ratfunc(s)) {
                SymbolSum res = milnor::boundary(s, v);
                Elem here = algebra::one(base);
                for (const auto& tup : res.terms) {
                    Elem rho = tup[0];
                    here = algebra::mul(here, algebra::field_eq(rho.field(), base)
                                                  ? rho
                                                  : algebra::norm_to_base(rho));
                }
                total = algebra::mul(total, here);
                trace.push_back({{"place", valuation::place_str(v)},
                                 {"residue", milnor::symbol_str(res)},
                                 {"norm", algebra::elem_str(here)}});
            }
            bool zero_sum = algebra::is_square(total);
            trace.push_back({{"product", algebra::elem_str(total)},
                             {"square", zero_sum}});
            verdict = zero_sum ? "pass" : "fail";
        } else {
            int total = 0;
            for (const auto& v : symbol_places_q(s)) {
                int inv = local_invariant(s, v);
                total ^= inv;
                trace.push_back({{"place", valuation::place_str(v)}, {"invariant", inv}});
            }
            trace.push_back({{"invariant_sum", total}});
            verdict = total == 0 ? "pass" : "fail";
        }
        sample_reports.push_back({{"index", idx},
                                  {"instance", instance_str(inst)},
                                  {"sample", milnor::symbol_str(s)},
                                  {"trace", trace},
                                  {"verdict", verdict}});
        verdicts.push_back(verdict);
    }
    return json{{"schema", "1"},
                {"instance", instance_str(inst)},
                {"check", "complex"},
                {"samples", sample_reports},
                {"verdict", verdict_merge(verdicts)}};
}

namespace {

// bounded search for a quaternion symbol whose nonzero local invariants are
// exactly the given places: entries run over signed squarefree products of
// the support primes (2 always included)
struct Realization {
    std::string verdict;
    std::optional<std::pair<Rat, Rat>> witness;
    long tried = 0;
};

Realization realize_pattern(const std::vector<valuation::Place>& pattern, long budget) {
    Realization out;
    if (pattern.size() % 2 != 0) {
        out.verdict = "unrealizable";
        return out;
    }
    std::vector<Int> primes = {2};
    for (const auto& v : pattern) {
        if (v.kind == PK::q_infty) continue;
        if (v.kind != PK::q_prime) throw precondition_error("pattern places must be places of Q");
        if (std::find(primes.begin(), primes.end(), v.p) == primes.end()) primes.push_back(v.p);
    }
    std::sort(primes.begin(), primes.end());
    size_t np = primes.size();
    std::vector<Rat> candidates;
    for (size_t mask = 0; mask < (size_t{1} << np); ++mask) {
        Int d = 1;
        for (size_t i = 0; i < np; ++i)
            if (mask & (size_t{1} << i)) d *= primes[i];
        candidates.push_back(Rat(d));
        candidates.push_back(Rat(-d));
    }
    auto matches = [&pattern](const Rat& a, const Rat& b) {
        auto inv = milnor::hbn_invariants(a, b);
        if (inv.odd_places.size() != pattern.size()) return false;
        for (const auto& v : inv.odd_places) {
            bool found = false;
            for (const auto& w : pattern) found = found || valuation::place_eq(v, w);
            if (!found) return false;
        }
        return true;
    };
    for (const Rat& a : candidates)
        for (const Rat& b : candidates) {
            if (out.tried >= budget) {
                out.verdict = "inconclusive";
                return out;
            }
            ++out.tried;
            if (matches(a, b)) {
                out.verdict = "realized";
                out.witness = {a, b};
                return out;
            }
        }
    out.verdict = "inconclusive";
    return out;
}

}  // namespace

nlohmann::json check_exactness(const KatoComplexInstance& inst,
                               const std::vector<SymbolSum>& samples,
                               const std::vector<std::vector<valuation::Place>>& patterns,
                               long realization_budget) {
    json sample_reports = json::array();
    std::vector<std::string> verdicts;
    for (size_t idx = 0; idx < samples.size(); ++idx) {
        const SymbolSum& s = samples[idx];
        if (!algebra::field_eq(s.field, inst.function_field) || s.r != 2)
            throw precondition_error("sample is not a 2-symbol of the instance's field");
        json trace = json::array();
        bool all_local_trivial = true;
        if (inst.tag.kind == SchemeTag::Kind::p1_over_fq) {
            for (const auto& v : symbol_places_ratfunc(s)) {
                SymbolSum res = milnor::boundary(s, v);
                Elem prod = algebra::one(res.field);
                for (const auto& tup : res.terms) prod = algebra::mul(prod, tup[0]);
                bool local_trivial = algebra::is_square(prod);
                all_local_trivial = all_local_trivial && local_trivial;
                trace.push_back({{"place", valuation::place_str(v)},
                                 {"residue", milnor::symbol_str(res)},
                                 {"trivial", local_trivial}});
            }
        } else {
            for (const auto& v : symbol_places_q(s)) {
                int inv = local_invariant(s, v);
                all_local_trivial = all_local_trivial && inv == 0;
                trace.push_back({{"place", valuation::place_str(v)}, {"invariant", inv}});
            }
        }
        bool decided = milnor::is_trivial(s);
        bool ok = decided == all_local_trivial;
        trace.push_back({{"all_local_trivial", all_local_trivial}, {"is_trivial", decided}});
        // a second, independent decision route for single symbols
        if (ok && s.terms.size() == 1) {
            bool second;
            if (inst.tag.kind == SchemeTag::Kind::p1_over_fq)
                second = quadform::pfister2_trivial_ratfunc(s.terms[0][0], s.terms[0][1]);
            else
                second = quadform::isotropic_q(
                    quadform::pfister(s.field, {s.terms[0][0], s.terms[0][1]}));
            ok = second == decided;
            trace.push_back({{"second_route", second}});
        }
        std::string verdict = ok ? "pass" : "fail";
        sample_reports.push_back({{"index", idx},
                                  {"instance", instance_str(inst)},
                                  {"sample", milnor::symbol_str(s)},
                                  {"trace", trace},
                                  {"verdict", verdict}});
        verdicts.push_back(verdict);
    }

    json pattern_reports = json::array();
    if (!patterns.empty() && inst.tag.kind != SchemeTag::Kind::spec_of_q_integers)
        throw precondition_error("realization patterns only make sense for the rational instance");
    for (size_t idx = 0; idx < patterns.size(); ++idx) {
        json places = json::array();
        for (const auto& v : patterns[idx]) places.push_back(valuation::place_str(v));
        Realization r = realize_pattern(patterns[idx], realization_budget);
        std::string verdict;
        json entry = {{"index", idx}, {"pattern", places}};
        if (r.verdict == "realized") {
            verdict = "pass";
            entry["witness"] = {r.witness->first.get_str(), r.witness->second.get_str()};
        } else if (r.verdict == "unrealizable") {
            verdict = "pass";
            entry["unrealizable"] = "odd total weight";
        } else {
            verdict = "inconclusive";
        }
        entry["verdict"] = verdict;
        pattern_reports.push_back(entry);
        verdicts.push_back(verdict);
    }

    json out = {{"schema", "1"},
                {"instance", instance_str(inst)},
                {"check", "exactness"},
                {"samples", sample_reports},
                {"verdict", verdict_merge(verdicts)}};
    if (!patterns.empty()) out["patterns"] = pattern_reports;
    return out;
}

}  // namespace valdef::katocheck
