#include <valdef/fol.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <tuple>
#include <vector>

// Exhaustive finite-field model checking. Formulas are compiled once into a
// register program: every term and every quantifier-free subformula becomes an
// instruction (with structural sharing), tagged with the deepest quantifier
// slot it reads. Instructions are scheduled into the bucket of that slot, so a
// quantifier loop re-executes only what its own variable invalidates; anything
// above the innermost loops is computed once per outer assignment. Connectives
// that still contain quantifiers stay tree nodes and short-circuit; their
// children are ordered cheapest-first, which is sound because the term
// language is total. Values are log-table ranks when the field fits a
// ZechField (direct q-by-q op tables when small), exact elements otherwise.
namespace valdef::fol {

namespace {

using TK = Term::Kind;
using FK = Formula::Kind;
using algebra::Elem;
using algebra::Field;

enum class IOp : std::uint8_t { vvar, vconst, vzero, vone, vadd, vmul, vneg, beq, band, bor, bnot };

// dst is the instruction's own index: field ops write vregs[i], bool ops bregs[i]
struct Instr {
    IOp op;
    int a = -1, b = -1;
    int level = -1;  // deepest slot read; -1 = assignment-invariant
    Elem constant;   // vconst
};

struct CNode {
    enum class NK { pure, c_and, c_or, c_not, c_imp, quant };
    NK kind;
    int instr = -1;  // pure
    std::unique_ptr<CNode> f1, f2;
    bool exists = false;
    int nvars = 0;
    std::vector<int> var_instrs;            // one per quantifier slot
    std::vector<std::vector<int>> buckets;  // instructions to re-run when slot changes
    int body_instr = -1;                    // quant body when pure, else f1
    double est = 0;                         // rough evaluation cost, for and/or ordering
};

struct Compiler {
    const Field& K;
    const std::map<std::string, Elem>& assignment;
    double q;  // domain cardinality, saturated

    std::vector<Instr> instrs;
    std::map<std::tuple<IOp, int, int>, int> cse;
    std::map<std::string, int> const_cse;
    std::vector<std::pair<std::string, int>> scope;  // name -> var instruction

    int emit(IOp op, int a, int b) {
        // add/mul/and/or/eq are commutative over values, so a canonical operand
        // order lets swapped copies share one instruction
        if (a > b && (op == IOp::vadd || op == IOp::vmul || op == IOp::band || op == IOp::bor || op == IOp::beq))
            std::swap(a, b);
        auto key = std::make_tuple(op, a, b);
        auto it = cse.find(key);
        if (it != cse.end()) return it->second;
        Instr in;
        in.op = op;
        in.a = a;
        in.b = b;
        if (a >= 0) in.level = instrs[static_cast<size_t>(a)].level;
        if (b >= 0) in.level = std::max(in.level, instrs[static_cast<size_t>(b)].level);
        instrs.push_back(std::move(in));
        int idx = static_cast<int>(instrs.size()) - 1;
        cse.emplace(key, idx);
        return idx;
    }

    int term(const TermPtr& t) {
        switch (t->kind) {
            case TK::var: {
                for (size_t i = scope.size(); i-- > 0;)
                    if (scope[i].first == t->name) return scope[i].second;
                auto it = const_cse.find(t->name);
                if (it != const_cse.end()) return it->second;
                auto a = assignment.find(t->name);
                if (a == assignment.end())
                    throw precondition_error("unbound free variable: " + t->name);
                if (!algebra::field_eq(a->second.field(), K))
                    throw precondition_error("assignment for '" + t->name + "' lives in the wrong field");
                Instr in;
                in.op = IOp::vconst;
                in.constant = a->second;
                instrs.push_back(std::move(in));
                int idx = static_cast<int>(instrs.size()) - 1;
                const_cse.emplace(t->name, idx);
                return idx;
            }
            case TK::zero: return emit(IOp::vzero, -1, -1);
            case TK::one: return emit(IOp::vone, -1, -1);
            case TK::neg: return emit(IOp::vneg, term(t->a), -1);
            case TK::add: return emit(IOp::vadd, term(t->a), term(t->b));
            case TK::mul: return emit(IOp::vmul, term(t->a), term(t->b));
        }
        throw precondition_error("compile: bad term node");
    }

    std::unique_ptr<CNode> pure(int instr) {
        auto n = std::make_unique<CNode>();
        n->kind = CNode::NK::pure;
        n->instr = instr;
        return n;
    }

    std::unique_ptr<CNode> formula(const FormulaPtr& f) {
        switch (f->kind) {
            case FK::equals: return pure(emit(IOp::beq, term(f->t1), term(f->t2)));
            case FK::f_and:
            case FK::f_or: {
                auto a = formula(f->f1);
                auto b = formula(f->f2);
                bool conj = f->kind == FK::f_and;
                if (a->kind == CNode::NK::pure && b->kind == CNode::NK::pure)
                    return pure(emit(conj ? IOp::band : IOp::bor, a->instr, b->instr));
                if (b->est < a->est) std::swap(a, b);
                auto n = std::make_unique<CNode>();
                n->kind = conj ? CNode::NK::c_and : CNode::NK::c_or;
                n->est = a->est + b->est + 1;
                n->f1 = std::move(a);
                n->f2 = std::move(b);
                return n;
            }
            case FK::f_not: {
                auto a = formula(f->f1);
                if (a->kind == CNode::NK::pure) return pure(emit(IOp::bnot, a->instr, -1));
                auto n = std::make_unique<CNode>();
                n->kind = CNode::NK::c_not;
                n->est = a->est + 1;
                n->f1 = std::move(a);
                return n;
            }
            case FK::implies: {
                auto a = formula(f->f1);
                auto b = formula(f->f2);
                if (a->kind == CNode::NK::pure && b->kind == CNode::NK::pure)
                    return pure(emit(IOp::bor, emit(IOp::bnot, a->instr, -1), b->instr));
                auto n = std::make_unique<CNode>();
                n->kind = CNode::NK::c_imp;
                n->est = a->est + b->est + 1;
                n->f1 = std::move(a);
                n->f2 = std::move(b);
                return n;
            }
            case FK::exists:
            case FK::forall: {
                auto n = std::make_unique<CNode>();
                n->kind = CNode::NK::quant;
                n->exists = f->kind == FK::exists;
                n->nvars = static_cast<int>(f->vars.size());
                for (const std::string& v : f->vars) {
                    Instr in;
                    in.op = IOp::vvar;
                    in.level = static_cast<int>(scope.size());
                    instrs.push_back(std::move(in));
                    int idx = static_cast<int>(instrs.size()) - 1;
                    n->var_instrs.push_back(idx);
                    scope.emplace_back(v, idx);
                }
                auto body = formula(f->f1);
                for (int i = 0; i < n->nvars; ++i) scope.pop_back();
                double mult = 1;
                for (int i = 0; i < n->nvars; ++i) mult = std::min(mult * q, 1e30);
                n->est = (body->kind == CNode::NK::pure ? 1 : body->est + 1) * mult;
                if (body->kind == CNode::NK::pure)
                    n->body_instr = body->instr;
                else
                    n->f1 = std::move(body);
                n->buckets.resize(static_cast<size_t>(n->nvars));
                return n;
            }
            case FK::exists_rel:
            case FK::forall_rel:
                throw precondition_error("eval_sentence: relativized quantifiers must be expanded first");
            case FK::macro:
                throw precondition_error("eval_sentence: macro node '" + f->macro_name + "' cannot be evaluated");
        }
        throw precondition_error("compile: bad formula node");
    }
};

// Places each instruction in the bucket of the quantifier level it reads
// (prelude when invariant). Dependencies are scheduled first, so every bucket
// is already in execution order. Each instruction reads variables of exactly
// one active quantifier chain, so one global done-mark suffices.
struct Scheduler {
    const std::vector<Instr>& instrs;
    std::vector<int> prelude;
    std::vector<char> done;
    std::vector<std::pair<CNode*, int>> chain;  // quantifier node, base slot

    explicit Scheduler(const std::vector<Instr>& is) : instrs(is), done(is.size(), 0) {
        for (size_t i = 0; i < is.size(); ++i)
            if (is[i].op == IOp::vvar) done[i] = 1;  // loops write these directly
    }

    void need(int idx) {
        if (idx < 0 || done[static_cast<size_t>(idx)]) return;
        done[static_cast<size_t>(idx)] = 1;
        const Instr& in = instrs[static_cast<size_t>(idx)];
        need(in.a);
        need(in.b);
        if (in.level < 0) {
            prelude.push_back(idx);
            return;
        }
        for (size_t i = chain.size(); i-- > 0;) {
            int base = chain[i].second;
            CNode* qn = chain[i].first;
            if (in.level >= base && in.level < base + qn->nvars) {
                qn->buckets[static_cast<size_t>(in.level - base)].push_back(idx);
                return;
            }
        }
        throw precondition_error("compile: instruction escapes its binder");
    }

    void walk(CNode& n, int depth) {
        switch (n.kind) {
            case CNode::NK::pure: need(n.instr); return;
            case CNode::NK::c_not: walk(*n.f1, depth); return;
            case CNode::NK::c_and:
            case CNode::NK::c_or:
            case CNode::NK::c_imp:
                walk(*n.f1, depth);
                walk(*n.f2, depth);
                return;
            case CNode::NK::quant:
                chain.emplace_back(&n, depth);
                if (n.body_instr >= 0)
                    need(n.body_instr);
                else
                    walk(*n.f1, depth + n.nvars);
                chain.pop_back();
                return;
        }
    }
};

// value domain backed by Zech log tables; values are enumeration ranks
struct ZechDom {
    std::shared_ptr<const algebra::ZechField> z;
    using V = std::uint32_t;
    std::size_t card() const { return z->card(); }
    V value(std::size_t i) const { return static_cast<V>(i); }
    V from_elem(const Elem& e) const { return static_cast<V>(algebra::elem_rank(e).get_ui()); }
    V zero() const { return 0; }
    V one() const { return z->one(); }
    V add(V a, V b) const { return z->add(a, b); }
    V mul(V a, V b) const { return z->mul(a, b); }
    V neg(V a) const { return z->neg(a); }
    static bool eq(V a, V b) { return a == b; }
};

// same ranks with the op tables materialized; worth it in quantifier loops
struct TableDom {
    static constexpr std::size_t kMaxCard = 512;
    std::size_t q;
    std::uint32_t one_;
    std::vector<std::uint32_t> addt, mult, negt;  // addt/mult are q*q, row-major

    explicit TableDom(const algebra::ZechField& z) : q(z.card()), one_(z.one()) {
        addt.resize(q * q);
        mult.resize(q * q);
        negt.resize(q);
        for (std::uint32_t a = 0; a < q; ++a) {
            negt[a] = z.neg(a);
            for (std::uint32_t b = 0; b < q; ++b) {
                addt[a * q + b] = z.add(a, b);
                mult[a * q + b] = z.mul(a, b);
            }
        }
    }

    using V = std::uint32_t;
    std::size_t card() const { return q; }
    V value(std::size_t i) const { return static_cast<V>(i); }
    V from_elem(const Elem& e) const { return static_cast<V>(algebra::elem_rank(e).get_ui()); }
    V zero() const { return 0; }
    V one() const { return one_; }
    V add(V a, V b) const { return addt[a * q + b]; }
    V mul(V a, V b) const { return mult[a * q + b]; }
    V neg(V a) const { return negt[a]; }
    static bool eq(V a, V b) { return a == b; }
};

// exact-element domain, for fields beyond the table cap
struct ElemDom {
    Field K;
    using V = Elem;
    std::size_t card() const { return algebra::field_card(K).get_ui(); }
    V value(std::size_t i) const { return algebra::enum_elem(K, Int(static_cast<unsigned long>(i))); }
    V from_elem(const Elem& e) const { return e; }
    V zero() const { return algebra::zero(K); }
    V one() const { return algebra::one(K); }
    V add(const V& a, const V& b) const { return algebra::add(a, b); }
    V mul(const V& a, const V& b) const { return algebra::mul(a, b); }
    V neg(const V& a) const { return algebra::neg(a); }
    static bool eq(const V& a, const V& b) { return algebra::elem_eq(a, b); }
};

template <class Dom>
struct Machine {
    const Dom& dom;
    const std::vector<Instr>& instrs;
    std::vector<typename Dom::V> vregs;
    std::vector<std::uint8_t> bregs;

    Machine(const Dom& d, const std::vector<Instr>& is)
        : dom(d), instrs(is), vregs(is.size(), d.zero()), bregs(is.size(), 0) {}

    void exec(const std::vector<int>& list) {
        for (int idx : list) {
            const Instr& in = instrs[static_cast<size_t>(idx)];
            size_t i = static_cast<size_t>(idx);
            size_t a = static_cast<size_t>(in.a);
            size_t b = static_cast<size_t>(in.b);
            switch (in.op) {
                case IOp::vconst: vregs[i] = dom.from_elem(in.constant); break;
                case IOp::vzero: vregs[i] = dom.zero(); break;
                case IOp::vone: vregs[i] = dom.one(); break;
                case IOp::vadd: vregs[i] = dom.add(vregs[a], vregs[b]); break;
                case IOp::vmul: vregs[i] = dom.mul(vregs[a], vregs[b]); break;
                case IOp::vneg: vregs[i] = dom.neg(vregs[a]); break;
                case IOp::beq: bregs[i] = Dom::eq(vregs[a], vregs[b]); break;
                case IOp::band: bregs[i] = bregs[a] && bregs[b]; break;
                case IOp::bor: bregs[i] = bregs[a] || bregs[b]; break;
                case IOp::bnot: bregs[i] = !bregs[a]; break;
                case IOp::vvar: break;
            }
        }
    }

    bool eval(const CNode& n) {
        switch (n.kind) {
            case CNode::NK::pure: return bregs[static_cast<size_t>(n.instr)];
            case CNode::NK::c_and: return eval(*n.f1) && eval(*n.f2);
            case CNode::NK::c_or: return eval(*n.f1) || eval(*n.f2);
            case CNode::NK::c_not: return !eval(*n.f1);
            case CNode::NK::c_imp: return !eval(*n.f1) || eval(*n.f2);
            case CNode::NK::quant: {
                bool want = n.exists;
                std::size_t q = dom.card();
                auto loop = [&](auto&& self, int d) -> bool {
                    size_t var = static_cast<size_t>(n.var_instrs[static_cast<size_t>(d)]);
                    const std::vector<int>& bucket = n.buckets[static_cast<size_t>(d)];
                    bool last = d + 1 == n.nvars;
                    for (std::size_t i = 0; i < q; ++i) {
                        vregs[var] = dom.value(i);
                        exec(bucket);
                        bool r;
                        if (!last)
                            r = self(self, d + 1);
                        else if (n.body_instr >= 0)
                            r = bregs[static_cast<size_t>(n.body_instr)];
                        else
                            r = eval(*n.f1);
                        if (r == want) return want;
                    }
                    return !want;
                };
                return loop(loop, 0);
            }
        }
        return false;
    }
};

template <class Dom>
bool run(const Dom& dom, const std::vector<Instr>& instrs, const std::vector<int>& prelude, CNode& root) {
    Machine<Dom> m(dom, instrs);
    m.exec(prelude);
    return m.eval(root);
}

}  // namespace

bool eval_sentence(const FormulaPtr& f, const Field& K, const std::map<std::string, Elem>& assignment) {
    if (!algebra::is_finite(K)) throw precondition_error("eval_sentence needs a finite field");
    auto zech = algebra::ZechField::get(K);
    double q = zech ? static_cast<double>(zech->card()) : 1e9;
    Compiler comp{K, assignment, q};
    auto root = comp.formula(f);
    Scheduler sched(comp.instrs);
    sched.walk(*root, 0);
    if (zech) {
        if (zech->card() <= TableDom::kMaxCard) return run(TableDom(*zech), comp.instrs, sched.prelude, *root);
        return run(ZechDom{zech}, comp.instrs, sched.prelude, *root);
    }
    return run(ElemDom{K}, comp.instrs, sched.prelude, *root);
}

}  // namespace valdef::fol
