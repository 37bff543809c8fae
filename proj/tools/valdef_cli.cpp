#include <valdef/algebra.hpp>
#include <valdef/divisorsets.hpp>
#include <valdef/fol.hpp>
#include <valdef/katocheck.hpp>
#include <valdef/milnor.hpp>
#include <valdef/quadform.hpp>
#include <valdef/recipe.hpp>
#include <valdef/valuation.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace valdef;
using nlohmann::json;

namespace {

constexpr const char* kSchema = "1";

void emit_json(json j) {
    j["schema"] = kSchema;
    std::cout << j.dump() << "\n";
}

std::string read_text_source(const std::string& spec) {
    if (spec == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(spec);
    if (!in) throw precondition_error("cannot open file: " + spec);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<algebra::Elem> parse_elems(const algebra::Field& k, const std::string& text) {
    std::vector<algebra::Elem> out;
    for (const auto& part : split_list(text, ',')) out.push_back(algebra::parse_elem(k, part));
    return out;
}

Rat parse_rat(const std::string& text) {
    try {
        Rat r(text);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw parse_error("not a rational number: " + text);
    }
}

std::string formula_text(const fol::FormulaPtr& f) {
    return fol::print_formula(f, fol::PrintFormat::sexpr);
}

// deterministic element sampler for the kato subcommands
algebra::Elem sample_nonzero(Rng& rng, const algebra::Field& k) {
    if (algebra::field_str(k) == "Q") {
        Int num = static_cast<long>(rng.range(-40, 40));
        Int den = static_cast<long>(rng.range(1, 12));
        if (num == 0) num = 1;
        return algebra::from_rat(k, rat(num, den));
    }
    // F_q(t): ratio of small polynomials
    auto base = k->base;
    Int q = algebra::field_card(base);
    auto rand_poly = [&](int max_deg, bool monic) {
        algebra::Poly p{base, {}};
        int deg = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_deg + 1)));
        for (int i = 0; i < deg; ++i)
            p.c.push_back(algebra::enum_elem(base, rng.below(q.get_ui())));
        p.c.push_back(monic ? algebra::one(base)
                            : algebra::enum_elem(base, 1 + rng.below(q.get_ui() - 1)));
        return p;
    };
    algebra::Poly num = rand_poly(2, false);
    algebra::Poly den = rand_poly(2, true);
    auto x = algebra::div(algebra::poly_to_elem(k, num), algebra::poly_to_elem(k, den));
    if (algebra::is_zero(x)) return algebra::one(k);
    return x;
}

std::vector<milnor::SymbolSum> sample_symbols(const algebra::Field& k, int r, long n,
                                              std::uint64_t seed) {
    Rng rng(seed);
    std::vector<milnor::SymbolSum> out;
    for (long i = 0; i < n; ++i) {
        std::vector<algebra::Elem> tuple;
        for (int j = 0; j < r; ++j) tuple.push_back(sample_nonzero(rng, k));
        out.push_back(milnor::make_symbol(k, r, {tuple}));
    }
    return out;
}

katocheck::SchemeTag parse_scheme(const std::string& text) {
    if (text == "specz") return katocheck::scheme_spec_z();
    if (text.rfind("p1:", 0) == 0) return katocheck::scheme_p1(Int(text.substr(3)));
    throw parse_error("unknown scheme '" + text + "' (want p1:<q> or specz)");
}

int run(int argc, char** argv) {
    CLI::App app{"first-order definability toolkit for function fields"};
    app.require_subcommand(1);

    // ---- emit ----
    auto* emit = app.add_subcommand("emit", "print a formula in S-expression form");
    emit->require_subcommand(1);
    int arg_r = 0, arg_d = 2, arg_e = 0, arg_n = 1;
    std::string arg_char = "0", arg_fk;

    auto* em_phi0 = emit->add_subcommand("phi0", "square-class dimension clause");
    em_phi0->add_option("--r", arg_r)->required();
    auto* em_phid = emit->add_subcommand("phid", "dimension sentence");
    em_phid->add_option("--d", arg_d)->required();
    auto* em_phift = emit->add_subcommand("phift", "parameterized form clause");
    em_phift->add_option("--e", arg_e)->required();
    auto* em_vald = emit->add_subcommand("vald", "valuation-ring membership formula");
    em_vald->add_option("--d", arg_d)->required();
    auto* em_degn = emit->add_subcommand("degn", "degree-N clause");
    em_degn->add_option("--n", arg_n)->required();
    auto* em_iso = emit->add_subcommand("iso", "isomorphy sentence");
    em_iso->add_option("--char", arg_char)->required();
    em_iso->add_option("--e", arg_e)->required();
    em_iso->add_option("--n", arg_n)->required();
    em_iso->add_option("--fk", arg_fk, "JSON [[coeff, u_exp, [t_exps]], ...]")->required();

    // ---- eval ----
    auto* ev = app.add_subcommand("eval", "evaluate a sentence over a finite field");
    std::string arg_field, arg_sentence;
    ev->add_option("--field", arg_field)->required();
    ev->add_option("--sentence", arg_sentence, "file path or - for stdin")->required();

    // ---- pfister ----
    auto* pf = app.add_subcommand("pfister", "diagonal form utilities");
    pf->require_subcommand(1);
    std::string arg_coeffs, arg_x;
    auto* pf_iso = pf->add_subcommand("isotropic", "decide isotropy");
    pf_iso->add_option("--field", arg_field)->required();
    pf_iso->add_option("--coeffs", arg_coeffs, "comma-separated generators")->required();
    auto* pf_val = pf->add_subcommand("value", "evaluate the form at a vector");
    pf_val->add_option("--field", arg_field)->required();
    pf_val->add_option("--coeffs", arg_coeffs)->required();
    pf_val->add_option("--x", arg_x, "comma-separated vector entries")->required();

    // ---- symbol ----
    auto* sym = app.add_subcommand("symbol", "mod-2 symbol calculus");
    sym->require_subcommand(1);
    std::string arg_place, arg_symbol, arg_a, arg_b, arg_f, arg_g;
    auto* sym_bd = sym->add_subcommand("boundary", "residue map at a place");
    sym_bd->add_option("--field", arg_field)->required();
    sym_bd->add_option("--place", arg_place)->required();
    sym_bd->add_option("--symbol", arg_symbol, "tuples a,b|c,d|...")->required();
    auto* sym_tr = sym->add_subcommand("trivial", "decide symbol triviality");
    sym_tr->add_option("--field", arg_field)->required();
    sym_tr->add_option("--symbol", arg_symbol)->required();
    auto* sym_hbn = sym->add_subcommand("hbn", "local invariants of a rational pair");
    sym_hbn->add_option("--a", arg_a)->required();
    sym_hbn->add_option("--b", arg_b)->required();
    auto* sym_rec = sym->add_subcommand("reciprocity", "product formula over F_q(t)");
    sym_rec->add_option("--field", arg_field)->required();
    sym_rec->add_option("--f", arg_f)->required();
    sym_rec->add_option("--g", arg_g)->required();

    // ---- kato ----
    auto* kato = app.add_subcommand("kato", "residue complex checks");
    kato->require_subcommand(1);
    std::string arg_scheme;
    long arg_samples = 100;
    std::uint64_t arg_seed = 0;
    auto* kato_cx = kato->add_subcommand("complex", "composed boundary vanishes");
    kato_cx->add_option("--scheme", arg_scheme, "p1:<q> or specz")->required();
    kato_cx->add_option("--samples", arg_samples);
    kato_cx->add_option("--seed", arg_seed);
    auto* kato_ex = kato->add_subcommand("exactness", "middle-level two-way check");
    kato_ex->add_option("--scheme", arg_scheme)->required();
    kato_ex->add_option("--samples", arg_samples);
    kato_ex->add_option("--seed", arg_seed);

    // ---- divisor ----
    auto* dv = app.add_subcommand("divisor", "odd-order divisor sets and their rings");
    dv->require_subcommand(1);
    std::string arg_eps, arg_xi, arg_rr, arg_t;
    auto* dv_df = dv->add_subcommand("df", "odd-order support");
    dv_df->add_option("--field", arg_field)->required();
    dv_df->add_option("--f", arg_f)->required();
    auto* dv_th = dv->add_subcommand("theta", "theta membership");
    dv_th->add_option("--field", arg_field)->required();
    dv_th->add_option("--f", arg_f)->required();
    dv_th->add_option("--eps", arg_eps)->required();
    auto* dv_tb = dv->add_subcommand("thetabar", "closure membership");
    dv_tb->add_option("--field", arg_field)->required();
    dv_tb->add_option("--f", arg_f)->required();
    dv_tb->add_option("--xi", arg_xi)->required();
    auto* dv_id = dv->add_subcommand("ideal", "difference ideal membership");
    dv_id->add_option("--field", arg_field)->required();
    dv_id->add_option("--f", arg_f)->required();
    dv_id->add_option("--xi", arg_xi)->required();
    auto* dv_rg = dv->add_subcommand("ring", "valuation-ring trichotomy");
    dv_rg->add_option("--field", arg_field)->required();
    dv_rg->add_option("--f", arg_f)->required();
    auto* dv_r0 = dv->add_subcommand("ring0", "product-ring membership");
    dv_r0->add_option("--field", arg_field)->required();
    dv_r0->add_option("--f", arg_f)->required();
    dv_r0->add_option("--r", arg_rr)->required();
    auto* dv_dg = dv->add_subcommand("deg", "degree test");
    dv_dg->add_option("--field", arg_field)->required();
    dv_dg->add_option("--t", arg_t)->required();
    dv_dg->add_option("--n", arg_n)->required();

    // ---- stats ----
    auto* st = app.add_subcommand("stats", "formula statistics");
    std::string arg_formula;
    st->add_option("--formula", arg_formula, "file path or - for stdin")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        json j;
        j["error"] = std::string("argument error: ") + e.what();
        emit_json(j);
        return 2;
    }

    // emit
    if (em_phi0->parsed()) {
        emit_json({{"formula", formula_text(recipe::emit_phi0(arg_r))}});
    } else if (em_phid->parsed()) {
        emit_json({{"formula", formula_text(recipe::emit_phi_d(arg_d))}});
    } else if (em_phift->parsed()) {
        emit_json({{"formula", formula_text(recipe::emit_phi_ft(arg_e))}});
    } else if (em_vald->parsed()) {
        emit_json({{"formula", formula_text(recipe::emit_val_d(arg_d))}});
    } else if (em_degn->parsed()) {
        emit_json({{"formula", formula_text(recipe::emit_deg_N(arg_n))}});
    } else if (em_iso->parsed()) {
        recipe::IsoData data;
        data.characteristic = Int(arg_char);
        data.e = arg_e;
        data.N = arg_n;
        json fk = json::parse(arg_fk);
        for (const auto& row : fk) {
            recipe::FkMonomial m;
            m.coeff = Int(row.at(0).is_string() ? row.at(0).get<std::string>()
                                                : std::to_string(row.at(0).get<long>()));
            m.u_exp = row.at(1).get<int>();
            for (const auto& x : row.at(2)) m.t_exp.push_back(x.get<int>());
            data.fk.push_back(std::move(m));
        }
        emit_json({{"formula", formula_text(recipe::emit_iso_sentence(data))}});
    }

    // eval
    else if (ev->parsed()) {
        auto k = algebra::parse_field(arg_field);
        auto f = fol::parse_formula(read_text_source(arg_sentence));
        if (!fol::free_vars(f).empty())
            throw precondition_error("eval needs a sentence (no free variables)");
        emit_json({{"verdict", fol::eval_sentence(f, k, {})}});
    }

    // pfister
    else if (pf_iso->parsed() || pf_val->parsed()) {
        auto k = algebra::parse_field(arg_field);
        auto coeffs = parse_elems(k, arg_coeffs);
        auto form = quadform::pfister(k, coeffs);
        if (pf_val->parsed()) {
            auto xs = parse_elems(k, arg_x);
            emit_json({{"value", algebra::elem_str(quadform::evaluate(form, xs))}});
        } else if (algebra::is_finite(k)) {
            emit_json({{"verdict", quadform::isotropic_fq(form)}});
        } else if (algebra::field_str(k) == "Q") {
            emit_json({{"verdict", quadform::isotropic_q(form)}});
        } else {
            throw undecidable_error("isotropy is decided over finite fields and Q only");
        }
    }

    // symbol
    else if (sym_bd->parsed() || sym_tr->parsed()) {
        auto k = algebra::parse_field(arg_field);
        std::vector<std::vector<algebra::Elem>> tuples;
        for (const auto& part : split_list(arg_symbol, '|')) tuples.push_back(parse_elems(k, part));
        if (tuples.empty() || tuples[0].empty())
            throw precondition_error("empty symbol");
        auto s = milnor::make_symbol(k, static_cast<int>(tuples[0].size()), tuples);
        if (sym_bd->parsed()) {
            auto v = valuation::parse_place(k, arg_place);
            emit_json({{"symbol", milnor::symbol_str(milnor::boundary(s, v))}});
        } else {
            emit_json({{"verdict", milnor::is_trivial(s)}});
        }
    } else if (sym_hbn->parsed()) {
        Rat a = parse_rat(arg_a), b = parse_rat(arg_b);
        auto inv = milnor::hbn_invariants(a, b);
        json invariants = json::object();
        for (const auto& v : inv.odd_places) {
            std::string key = v.kind == valuation::Place::Kind::q_infty
                                  ? "inf"
                                  : v.p.get_str();
            invariants[key] = 1;
        }
        emit_json({{"invariants", invariants},
                   {"sum", static_cast<int>(inv.odd_places.size() % 2)}});
    } else if (sym_rec->parsed()) {
        auto k = algebra::parse_field(arg_field);
        auto f = algebra::parse_elem(k, arg_f);
        auto g = algebra::parse_elem(k, arg_g);
        emit_json({{"verdict", milnor::reciprocity_check(f, g)}});
    }

    // kato
    else if (kato_cx->parsed() || kato_ex->parsed()) {
        auto inst = katocheck::build_kc(parse_scheme(arg_scheme));
        auto samples = sample_symbols(inst.function_field, 2, arg_samples, arg_seed);
        json res = kato_cx->parsed() ? katocheck::check_complex(inst, samples)
                                     : katocheck::check_exactness(inst, samples);
        emit_json(res);
    }

    // divisor
    else if (dv_df->parsed()) {
        auto k = algebra::parse_field(arg_field);
        auto d = divisorsets::d_f(algebra::parse_elem(k, arg_f));
        json places = json::array();
        for (const auto& v : d.places) places.push_back(valuation::place_str(v));
        emit_json({{"places", places}});
    } else if (dv_th->parsed()) {
        auto k = algebra::parse_field(arg_field);
        emit_json({{"verdict", divisorsets::theta_member(algebra::parse_elem(k, arg_eps),
                                                         algebra::parse_elem(k, arg_f))}});
    } else if (dv_tb->parsed()) {
        auto k = algebra::parse_field(arg_field);
        emit_json({{"verdict", divisorsets::theta_bar_member(algebra::parse_elem(k, arg_xi),
                                                             algebra::parse_elem(k, arg_f))}});
    } else if (dv_id->parsed()) {
        auto k = algebra::parse_field(arg_field);
        emit_json({{"verdict", divisorsets::ideal_a_member(algebra::parse_elem(k, arg_xi),
                                                           algebra::parse_elem(k, arg_f))}});
    } else if (dv_rg->parsed()) {
        auto k = algebra::parse_field(arg_field);
        auto rep = divisorsets::valuation_ring_check(algebra::parse_elem(k, arg_f));
        const char* defect = rep.defect == divisorsets::RingDefect::none ? "none"
                             : rep.defect == divisorsets::RingDefect::no_positive_place
                                 ? "no_positive_place"
                                 : "totality_fails";
        json j = {{"verdict", rep.is_valuation_ring},
                  {"defect", defect},
                  {"d0_size", rep.d0_size}};
        if (rep.totality_witness) j["witness"] = algebra::elem_str(*rep.totality_witness);
        emit_json(j);
    } else if (dv_r0->parsed()) {
        auto k = algebra::parse_field(arg_field);
        emit_json({{"verdict", divisorsets::ring_r0_member(algebra::parse_elem(k, arg_rr),
                                                           algebra::parse_elem(k, arg_f))}});
    } else if (dv_dg->parsed()) {
        auto k = algebra::parse_field(arg_field);
        emit_json({{"verdict", divisorsets::degree_check(algebra::parse_elem(k, arg_t), arg_n)}});
    }

    // stats
    else if (st->parsed()) {
        auto f = fol::parse_formula(read_text_source(arg_formula));
        auto s = fol::stats(f);
        json macros = json::array();
        for (const auto& m : s.macro_names) macros.push_back(m);
        emit_json({{"node_count", s.node_count},
                   {"quantifier_depth", s.quantifier_depth},
                   {"alternation_count", s.alternation_count},
                   {"macro_names", macros}});
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const nlohmann::json::exception& e) {
        emit_json({{"error", std::string("parse error: ") + e.what()}});
        return 2;
    } catch (const std::invalid_argument& e) {
        emit_json({{"error", std::string("parse error: ") + e.what()}});
        return 2;
    } catch (const parse_error& e) {
        emit_json({{"error", std::string("parse error: ") + e.what()}});
        return 2;
    } catch (const precondition_error& e) {
        emit_json({{"error", std::string("precondition violated: ") + e.what()}});
        return 3;
    } catch (const undecidable_error& e) {
        emit_json({{"error", std::string("undecidable here: ") + e.what()}});
        return 4;
    } catch (const std::exception& e) {
        emit_json({{"error", e.what()}});
        return 1;
    }
}
