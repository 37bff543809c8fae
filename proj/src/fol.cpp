#include <valdef/fol.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <unordered_map>

namespace valdef::fol {

namespace {

using TK = Term::Kind;
using FK = Formula::Kind;

bool valid_var_name(const std::string& s) {
    if (s.empty() || s == "0" || s == "1") return false;
    for (char ch : s)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\''))
            return false;
    return true;
}

TermPtr mk_term(TK k, std::string name, TermPtr a, TermPtr b) {
    auto t = std::make_shared<Term>();
    t->kind = k;
    t->name = std::move(name);
    t->a = std::move(a);
    t->b = std::move(b);
    return t;
}

FormulaPtr mk_formula(FK k) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    return f;
}

}  // namespace

TermPtr t_var(std::string name) {
    if (!valid_var_name(name)) throw precondition_error("bad variable name: " + name);
    return mk_term(TK::var, std::move(name), nullptr, nullptr);
}
TermPtr t_zero() { return mk_term(TK::zero, "", nullptr, nullptr); }
TermPtr t_one() { return mk_term(TK::one, "", nullptr, nullptr); }
TermPtr t_add(TermPtr a, TermPtr b) { return mk_term(TK::add, "", std::move(a), std::move(b)); }
TermPtr t_mul(TermPtr a, TermPtr b) { return mk_term(TK::mul, "", std::move(a), std::move(b)); }
TermPtr t_neg(TermPtr a) { return mk_term(TK::neg, "", std::move(a), nullptr); }

TermPtr t_int(long n) {
    if (n < 0) return t_neg(t_int(-n));
    if (n == 0) return t_zero();
    TermPtr acc = t_one();
    for (long i = 1; i < n; ++i) acc = t_add(acc, t_one());
    return acc;
}

int setref_arity(const SetRef& s) { return s.tag == SetRef::Tag::ubullet ? 2 : 1; }

FormulaPtr f_eq(TermPtr a, TermPtr b) {
    auto f = mk_formula(FK::equals);
    auto m = std::const_pointer_cast<Formula>(f);
    m->t1 = std::move(a);
    m->t2 = std::move(b);
    return f;
}

namespace {
FormulaPtr binary(FK k, FormulaPtr a, FormulaPtr b) {
    auto f = mk_formula(k);
    auto m = std::const_pointer_cast<Formula>(f);
    m->f1 = std::move(a);
    m->f2 = std::move(b);
    return f;
}

FormulaPtr binder(FK k, std::vector<std::string> vars, FormulaPtr body, std::optional<SetRef> set) {
    if (vars.empty()) throw precondition_error("quantifier needs at least one variable");
    for (const std::string& v : vars)
        if (!valid_var_name(v)) throw precondition_error("bad variable name: " + v);
    if (set && static_cast<int>(vars.size()) != setref_arity(*set))
        throw precondition_error("relativized quantifier arity mismatch");
    auto f = mk_formula(k);
    auto m = std::const_pointer_cast<Formula>(f);
    m->vars = std::move(vars);
    m->f1 = std::move(body);
    m->set = std::move(set);
    return f;
}
}  // namespace

FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return binary(FK::f_and, std::move(a), std::move(b)); }
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return binary(FK::f_or, std::move(a), std::move(b)); }
FormulaPtr f_imp(FormulaPtr a, FormulaPtr b) { return binary(FK::implies, std::move(a), std::move(b)); }

FormulaPtr f_not(FormulaPtr a) {
    auto f = mk_formula(FK::f_not);
    std::const_pointer_cast<Formula>(f)->f1 = std::move(a);
    return f;
}

FormulaPtr f_exists(std::vector<std::string> vars, FormulaPtr body) {
    return binder(FK::exists, std::move(vars), std::move(body), std::nullopt);
}
FormulaPtr f_forall(std::vector<std::string> vars, FormulaPtr body) {
    return binder(FK::forall, std::move(vars), std::move(body), std::nullopt);
}
FormulaPtr f_exists_rel(SetRef set, std::vector<std::string> vars, FormulaPtr body) {
    return binder(FK::exists_rel, std::move(vars), std::move(body), std::move(set));
}
FormulaPtr f_forall_rel(SetRef set, std::vector<std::string> vars, FormulaPtr body) {
    return binder(FK::forall_rel, std::move(vars), std::move(body), std::move(set));
}

FormulaPtr f_macro(std::string name, std::vector<TermPtr> args) {
    if (!valid_var_name(name)) throw precondition_error("bad macro name: " + name);
    auto f = mk_formula(FK::macro);
    auto m = std::const_pointer_cast<Formula>(f);
    m->macro_name = std::move(name);
    m->args = std::move(args);
    return f;
}

FormulaPtr f_and_all(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) throw precondition_error("empty conjunction");
    FormulaPtr acc = fs[0];
    for (size_t i = 1; i < fs.size(); ++i) acc = f_and(acc, fs[i]);
    return acc;
}

FormulaPtr f_or_all(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) throw precondition_error("empty disjunction");
    FormulaPtr acc = fs[0];
    for (size_t i = 1; i < fs.size(); ++i) acc = f_or(acc, fs[i]);
    return acc;
}

// --- structural equality -------------------------------------------------------

bool term_eq(const TermPtr& a, const TermPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case TK::var: return a->name == b->name;
        case TK::zero:
        case TK::one: return true;
        case TK::neg: return term_eq(a->a, b->a);
        case TK::add:
        case TK::mul: return term_eq(a->a, b->a) && term_eq(a->b, b->b);
    }
    return false;
}

namespace {
bool setref_eq(const SetRef& a, const SetRef& b) {
    if (a.tag != b.tag) return false;
    if (a.tag == SetRef::Tag::delta_u0) return a.u0_name == b.u0_name;
    return term_eq(a.delta, b.delta);
}
}  // namespace

bool formula_eq(const FormulaPtr& a, const FormulaPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case FK::equals: return term_eq(a->t1, b->t1) && term_eq(a->t2, b->t2);
        case FK::f_not: return formula_eq(a->f1, b->f1);
        case FK::f_and:
        case FK::f_or:
        case FK::implies: return formula_eq(a->f1, b->f1) && formula_eq(a->f2, b->f2);
        case FK::exists:
        case FK::forall: return a->vars == b->vars && formula_eq(a->f1, b->f1);
        case FK::exists_rel:
        case FK::forall_rel:
            return setref_eq(*a->set, *b->set) && a->vars == b->vars && formula_eq(a->f1, b->f1);
        case FK::macro: {
            if (a->macro_name != b->macro_name || a->args.size() != b->args.size()) return false;
            for (size_t i = 0; i < a->args.size(); ++i)
                if (!term_eq(a->args[i], b->args[i])) return false;
            return true;
        }
    }
    return false;
}

// --- printing -------------------------------------------------------------------

namespace {

void print_term_sexpr(const TermPtr& t, std::string& out) {
    switch (t->kind) {
        case TK::var: out += t->name; return;
        case TK::zero: out += "0"; return;
        case TK::one: out += "1"; return;
        case TK::add:
        case TK::mul:
            out += t->kind == TK::add ? "(+ " : "(* ";
            print_term_sexpr(t->a, out);
            out += " ";
            print_term_sexpr(t->b, out);
            out += ")";
            return;
        case TK::neg:
            out += "(- ";
            print_term_sexpr(t->a, out);
            out += ")";
            return;
    }
}

void print_set_sexpr(const SetRef& s, std::string& out) {
    switch (s.tag) {
        case SetRef::Tag::sigma: out += "(sigma "; break;
        case SetRef::Tag::udelta: out += "(udelta "; break;
        case SetRef::Tag::ubullet: out += "(ubullet "; break;
        case SetRef::Tag::delta_u0:
            out += "(delta-u0 " + s.u0_name + ")";
            return;
    }
    print_term_sexpr(s.delta, out);
    out += ")";
}

void print_formula_sexpr(const FormulaPtr& f, std::string& out) {
    switch (f->kind) {
        case FK::equals:
            out += "(= ";
            print_term_sexpr(f->t1, out);
            out += " ";
            print_term_sexpr(f->t2, out);
            out += ")";
            return;
        case FK::f_and:
        case FK::f_or:
        case FK::implies:
            out += f->kind == FK::f_and ? "(and " : f->kind == FK::f_or ? "(or " : "(imp ";
            print_formula_sexpr(f->f1, out);
            out += " ";
            print_formula_sexpr(f->f2, out);
            out += ")";
            return;
        case FK::f_not:
            out += "(not ";
            print_formula_sexpr(f->f1, out);
            out += ")";
            return;
        case FK::exists:
        case FK::forall:
        case FK::exists_rel:
        case FK::forall_rel: {
            bool rel = f->kind == FK::exists_rel || f->kind == FK::forall_rel;
            bool ex = f->kind == FK::exists || f->kind == FK::exists_rel;
            out += ex ? "(exists" : "(forall";
            if (rel) {
                out += "-rel ";
                print_set_sexpr(*f->set, out);
                out += " (";
            } else {
                out += " (";
            }
            for (size_t i = 0; i < f->vars.size(); ++i) {
                if (i) out += " ";
                out += f->vars[i];
            }
            out += ") ";
            print_formula_sexpr(f->f1, out);
            out += ")";
            return;
        }
        case FK::macro:
            out += "(macro " + f->macro_name;
            for (const TermPtr& a : f->args) {
                out += " ";
                print_term_sexpr(a, out);
            }
            out += ")";
            return;
    }
}

// unicode, for humans: precedence add(1) < mul(2) < neg(3) < atom(4)
int term_prec(const TermPtr& t) {
    switch (t->kind) {
        case TK::add: return 1;
        case TK::mul: return 2;
        case TK::neg: return 3;
        default: return 4;
    }
}

void print_term_uni(const TermPtr& t, std::string& out) {
    auto child = [&](const TermPtr& c, int min_prec) {
        if (term_prec(c) < min_prec) {
            out += "(";
            print_term_uni(c, out);
            out += ")";
        } else {
            print_term_uni(c, out);
        }
    };
    switch (t->kind) {
        case TK::var: out += t->name; return;
        case TK::zero: out += "0"; return;
        case TK::one: out += "1"; return;
        case TK::add:
            child(t->a, 1);
            out += " + ";
            child(t->b, 1);
            return;
        case TK::mul:
            child(t->a, 2);
            out += "·";
            child(t->b, 2);
            return;
        case TK::neg:
            out += "−";
            child(t->a, 4);
            return;
    }
}

std::string term_uni(const TermPtr& t) {
    std::string s;
    print_term_uni(t, s);
    return s;
}

// formula precedence: quantifier 0 < imp 1 < or 2 < and 3 < not 4 < atom 5
int formula_prec(const FormulaPtr& f) {
    switch (f->kind) {
        case FK::exists:
        case FK::forall:
        case FK::exists_rel:
        case FK::forall_rel: return 0;
        case FK::implies: return 1;
        case FK::f_or: return 2;
        case FK::f_and: return 3;
        case FK::f_not: return 4;
        default: return 5;
    }
}

void print_formula_uni(const FormulaPtr& f, std::string& out, bool rightmost);

void uni_child(const FormulaPtr& c, std::string& out, int min_prec, bool rightmost) {
    if (formula_prec(c) < min_prec && !(rightmost && formula_prec(c) == 0)) {
        out += "(";
        print_formula_uni(c, out, true);
        out += ")";
    } else {
        print_formula_uni(c, out, rightmost);
    }
}

std::string set_uni(const SetRef& s) {
    switch (s.tag) {
        case SetRef::Tag::sigma: return "Σ(" + term_uni(s.delta) + ")";
        case SetRef::Tag::udelta: return "U(" + term_uni(s.delta) + ")";
        case SetRef::Tag::ubullet: return "U•(" + term_uni(s.delta) + ")";
        case SetRef::Tag::delta_u0: return "ΔU0(" + s.u0_name + ")";
    }
    return "";
}

void print_formula_uni(const FormulaPtr& f, std::string& out, bool rightmost) {
    switch (f->kind) {
        case FK::equals:
            out += term_uni(f->t1) + " = " + term_uni(f->t2);
            return;
        case FK::f_not:
            out += "¬";
            if (f->f1->kind == FK::f_not || f->f1->kind == FK::macro) {
                print_formula_uni(f->f1, out, false);
            } else {
                out += "(";
                print_formula_uni(f->f1, out, true);
                out += ")";
            }
            return;
        case FK::f_and:
            uni_child(f->f1, out, 3, false);
            out += " ∧ ";
            uni_child(f->f2, out, 3, rightmost);
            return;
        case FK::f_or:
            uni_child(f->f1, out, 2, false);
            out += " ∨ ";
            uni_child(f->f2, out, 2, rightmost);
            return;
        case FK::implies:
            uni_child(f->f1, out, 2, false);
            out += " → ";
            uni_child(f->f2, out, 1, rightmost);
            return;
        case FK::exists:
        case FK::forall:
        case FK::exists_rel:
        case FK::forall_rel: {
            bool ex = f->kind == FK::exists || f->kind == FK::exists_rel;
            out += ex ? "∃" : "∀";
            if (f->vars.size() > 1) out += "(";
            for (size_t i = 0; i < f->vars.size(); ++i) {
                if (i) out += ",";
                out += f->vars[i];
            }
            if (f->vars.size() > 1) out += ")";
            if (f->set) out += "∈" + set_uni(*f->set);
            out += ". ";
            print_formula_uni(f->f1, out, rightmost);
            return;
        }
        case FK::macro: {
            out += f->macro_name + "(";
            for (size_t i = 0; i < f->args.size(); ++i) {
                if (i) out += ", ";
                out += term_uni(f->args[i]);
            }
            out += ")";
            return;
        }
    }
}

}  // namespace

std::string print_term(const TermPtr& t, PrintFormat format) {
    std::string out;
    if (format == PrintFormat::sexpr)
        print_term_sexpr(t, out);
    else
        print_term_uni(t, out);
    return out;
}

std::string print_formula(const FormulaPtr& f, PrintFormat format) {
    std::string out;
    if (format == PrintFormat::sexpr)
        print_formula_sexpr(f, out);
    else
        print_formula_uni(f, out, true);
    return out;
}

// --- parsing --------------------------------------------------------------------

namespace {

struct Token {
    std::string text;  // "(" / ")" / symbol
    int line;
    int col;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++col_;
                ++pos_;
            } else if (c == '(' || c == ')') {
                out.push_back({std::string(1, c), line_, col_});
                ++col_;
                ++pos_;
            } else if (sym_char(c)) {
                int start_col = col_;
                std::string t;
                while (pos_ < s_.size() && sym_char(s_[pos_])) {
                    t.push_back(s_[pos_]);
                    ++pos_;
                    ++col_;
                }
                out.push_back({std::move(t), line_, start_col});
            } else {
                throw parse_error("line " + std::to_string(line_) + ", col " + std::to_string(col_) +
                                  ": unexpected character '" + std::string(1, c) + "'");
            }
        }
        return out;
    }

private:
    static bool sym_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '+' ||
               c == '*' || c == '-' || c == '=';
    }

    const std::string& s_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(const std::string& text) : toks_(Lexer(text).run()) {}

    TermPtr term_top() {
        TermPtr t = term();
        expect_end();
        return t;
    }

    FormulaPtr formula_top() {
        FormulaPtr f = formula();
        expect_end();
        return f;
    }

private:
    std::vector<Token> toks_;
    size_t pos_ = 0;

    [[noreturn]] void fail_at(const Token& t, const std::string& msg) {
        throw parse_error("line " + std::to_string(t.line) + ", col " + std::to_string(t.col) + ": " + msg);
    }

    [[noreturn]] void fail_eof(const std::string& msg) { throw parse_error("unexpected end of input: " + msg); }

    const Token& next(const char* expecting) {
        if (pos_ >= toks_.size()) fail_eof(expecting);
        return toks_[pos_++];
    }

    const Token& peek(const char* expecting) {
        if (pos_ >= toks_.size()) fail_eof(expecting);
        return toks_[pos_];
    }

    void expect(const char* text) {
        const Token& t = next(text);
        if (t.text != text) fail_at(t, std::string("expected '") + text + "', got '" + t.text + "'");
    }

    void expect_end() {
        if (pos_ < toks_.size()) fail_at(toks_[pos_], "trailing input after the expression");
    }

    static bool is_term_head(const std::string& s) { return s == "+" || s == "*" || s == "-"; }

    // Structural interning keeps re-parsed emitter output as compact as the
    // builder-side DAG; children are interned first, so pointer identity is a
    // sound key. Local to one parse, so nodes never outlive their text's use.
    std::unordered_map<std::string, TermPtr> term_pool_;
    std::unordered_map<std::string, FormulaPtr> formula_pool_;

    static void key_ptr(std::string& key, const void* p) {
        key += std::to_string(reinterpret_cast<std::uintptr_t>(p));
        key += '|';
    }

    TermPtr intern(TermPtr t) {
        std::string key;
        key.reserve(32 + t->name.size());
        key += static_cast<char>('a' + static_cast<int>(t->kind));
        key += t->name;
        key += '|';
        key_ptr(key, t->a.get());
        key_ptr(key, t->b.get());
        return term_pool_.try_emplace(std::move(key), std::move(t)).first->second;
    }

    FormulaPtr intern(FormulaPtr f) {
        std::string key;
        key.reserve(64);
        key += static_cast<char>('a' + static_cast<int>(f->kind));
        key += '|';
        key_ptr(key, f->t1.get());
        key_ptr(key, f->t2.get());
        key_ptr(key, f->f1.get());
        key_ptr(key, f->f2.get());
        for (const auto& v : f->vars) {
            key += v;
            key += ',';
        }
        key += '|';
        if (f->set) {
            key += static_cast<char>('a' + static_cast<int>(f->set->tag));
            key_ptr(key, f->set->delta.get());
            key += f->set->u0_name;
        }
        key += '|';
        key += f->macro_name;
        key += '|';
        for (const auto& a : f->args) key_ptr(key, a.get());
        return formula_pool_.try_emplace(std::move(key), std::move(f)).first->second;
    }

    TermPtr term() { return intern(term_node()); }

    FormulaPtr formula() { return intern(formula_node()); }

    TermPtr term_node() {
        const Token& t = next("a term");
        if (t.text == ")") fail_at(t, "expected a term");
        if (t.text == "(") {
            const Token& head = next("a term operator");
            if (head.text == "+" || head.text == "*") {
                TermPtr a = term();
                TermPtr b = term();
                expect(")");
                return head.text == "+" ? t_add(a, b) : t_mul(a, b);
            }
            if (head.text == "-") {
                TermPtr a = term();
                expect(")");
                return t_neg(a);
            }
            fail_at(head, "expected a term operator (+ * -), got '" + head.text + "'");
        }
        if (t.text == "0") return t_zero();
        if (t.text == "1") return t_one();
        if (!valid_var_name(t.text)) fail_at(t, "not a variable name: '" + t.text + "'");
        return t_var(t.text);
    }

    SetRef set() {
        expect("(");
        const Token& head = next("a set tag");
        SetRef s;
        if (head.text == "sigma")
            s.tag = SetRef::Tag::sigma;
        else if (head.text == "udelta")
            s.tag = SetRef::Tag::udelta;
        else if (head.text == "ubullet")
            s.tag = SetRef::Tag::ubullet;
        else if (head.text == "delta-u0")
            s.tag = SetRef::Tag::delta_u0;
        else
            fail_at(head, "unknown set tag '" + head.text + "'");
        if (s.tag == SetRef::Tag::delta_u0) {
            const Token& name = next("a descriptor name");
            if (!valid_var_name(name.text)) fail_at(name, "bad descriptor name: '" + name.text + "'");
            s.u0_name = name.text;
        } else {
            s.delta = term();
        }
        expect(")");
        return s;
    }

    std::vector<std::string> var_list() {
        expect("(");
        std::vector<std::string> vars;
        while (true) {
            const Token& t = next("a variable or )");
            if (t.text == ")") break;
            if (!valid_var_name(t.text)) fail_at(t, "not a variable name: '" + t.text + "'");
            vars.push_back(t.text);
        }
        if (vars.empty()) {
            const Token& t = toks_[pos_ - 1];
            fail_at(t, "quantifier needs at least one variable");
        }
        return vars;
    }

    FormulaPtr formula_node() {
        const Token& t = next("a formula");
        if (t.text != "(")
            fail_at(t, "expected a formula, got '" + t.text + "' (terms are not formulas)");
        const Token& head = next("a formula head");
        if (head.text == "=") {
            TermPtr a = term();
            TermPtr b = term();
            expect(")");
            return f_eq(a, b);
        }
        if (head.text == "and" || head.text == "or" || head.text == "imp") {
            FormulaPtr a = formula();
            FormulaPtr b = formula();
            expect(")");
            return head.text == "and" ? f_and(a, b) : head.text == "or" ? f_or(a, b) : f_imp(a, b);
        }
        if (head.text == "not") {
            FormulaPtr a = formula();
            expect(")");
            return f_not(a);
        }
        if (head.text == "exists" || head.text == "forall") {
            std::vector<std::string> vars = var_list();
            FormulaPtr body = formula();
            expect(")");
            return head.text == "exists" ? f_exists(std::move(vars), body) : f_forall(std::move(vars), body);
        }
        if (head.text == "exists-rel" || head.text == "forall-rel") {
            SetRef s = set();
            std::vector<std::string> vars = var_list();
            if (static_cast<int>(vars.size()) != setref_arity(s))
                fail_at(head, "relativized quantifier arity mismatch: this set binds " +
                                  std::to_string(setref_arity(s)) + " variable(s), got " +
                                  std::to_string(vars.size()));
            FormulaPtr body = formula();
            expect(")");
            return head.text == "exists-rel" ? f_exists_rel(std::move(s), std::move(vars), body)
                                             : f_forall_rel(std::move(s), std::move(vars), body);
        }
        if (head.text == "macro") {
            const Token& name = next("a macro name");
            if (!valid_var_name(name.text)) fail_at(name, "bad macro name: '" + name.text + "'");
            std::vector<TermPtr> args;
            while (peek("a macro argument or )").text != ")") args.push_back(term());
            expect(")");
            return f_macro(name.text, std::move(args));
        }
        if (is_term_head(head.text))
            fail_at(head, "term operator '" + head.text + "' where a formula was expected");
        fail_at(head, "unknown formula head '" + head.text + "'");
    }
};

}  // namespace

TermPtr parse_term(const std::string& text) { return Parser(text).term_top(); }
FormulaPtr parse_formula(const std::string& text) { return Parser(text).formula_top(); }

// --- free variables / substitution --------------------------------------------------

std::set<std::string> term_vars(const TermPtr& t) {
    std::set<std::string> out;
    auto walk = [&](auto&& self, const TermPtr& n) -> void {
        if (!n) return;
        if (n->kind == TK::var) out.insert(n->name);
        self(self, n->a);
        self(self, n->b);
    };
    walk(walk, t);
    return out;
}

std::set<std::string> free_vars(const FormulaPtr& f) {
    std::set<std::string> out;
    auto walk = [&](auto&& self, const FormulaPtr& n, std::set<std::string> bound) -> void {
        switch (n->kind) {
            case FK::equals:
                for (const std::string& v : term_vars(n->t1))
                    if (!bound.count(v)) out.insert(v);
                for (const std::string& v : term_vars(n->t2))
                    if (!bound.count(v)) out.insert(v);
                return;
            case FK::f_not: self(self, n->f1, bound); return;
            case FK::f_and:
            case FK::f_or:
            case FK::implies:
                self(self, n->f1, bound);
                self(self, n->f2, bound);
                return;
            case FK::exists:
            case FK::forall:
            case FK::exists_rel:
            case FK::forall_rel: {
                if (n->set && n->set->delta)
                    for (const std::string& v : term_vars(n->set->delta))
                        if (!bound.count(v)) out.insert(v);
                std::set<std::string> inner = bound;
                for (const std::string& v : n->vars) inner.insert(v);
                self(self, n->f1, std::move(inner));
                return;
            }
            case FK::macro:
                for (const TermPtr& a : n->args)
                    for (const std::string& v : term_vars(a))
                        if (!bound.count(v)) out.insert(v);
                return;
        }
    };
    walk(walk, f, {});
    return out;
}

TermPtr term_substitute(const TermPtr& t, const std::string& var, const TermPtr& repl) {
    switch (t->kind) {
        case TK::var: return t->name == var ? repl : t;
        case TK::zero:
        case TK::one: return t;
        case TK::neg: {
            TermPtr a = term_substitute(t->a, var, repl);
            return a.get() == t->a.get() ? t : t_neg(a);
        }
        case TK::add:
        case TK::mul: {
            TermPtr a = term_substitute(t->a, var, repl);
            TermPtr b = term_substitute(t->b, var, repl);
            if (a.get() == t->a.get() && b.get() == t->b.get()) return t;
            return t->kind == TK::add ? t_add(a, b) : t_mul(a, b);
        }
    }
    return t;
}

namespace {
std::string fresh_name(std::string base, const std::set<std::string>& avoid) {
    while (avoid.count(base)) base += "'";
    return base;
}
}  // namespace

FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const TermPtr& repl) {
    switch (f->kind) {
        case FK::equals: return f_eq(term_substitute(f->t1, var, repl), term_substitute(f->t2, var, repl));
        case FK::f_not: return f_not(substitute(f->f1, var, repl));
        case FK::f_and: return f_and(substitute(f->f1, var, repl), substitute(f->f2, var, repl));
        case FK::f_or: return f_or(substitute(f->f1, var, repl), substitute(f->f2, var, repl));
        case FK::implies: return f_imp(substitute(f->f1, var, repl), substitute(f->f2, var, repl));
        case FK::macro: {
            std::vector<TermPtr> args;
            args.reserve(f->args.size());
            for (const TermPtr& a : f->args) args.push_back(term_substitute(a, var, repl));
            return f_macro(f->macro_name, std::move(args));
        }
        case FK::exists:
        case FK::forall:
        case FK::exists_rel:
        case FK::forall_rel: {
            // the set term sits outside the binder scope
            std::optional<SetRef> set = f->set;
            if (set && set->delta) set->delta = term_substitute(set->delta, var, repl);

            bool binds_var = std::find(f->vars.begin(), f->vars.end(), var) != f->vars.end();
            FormulaPtr body = f->f1;
            std::vector<std::string> vars = f->vars;
            if (!binds_var) {
                std::set<std::string> repl_vars = term_vars(repl);
                std::set<std::string> avoid = free_vars(body);
                for (const std::string& v : repl_vars) avoid.insert(v);
                for (const std::string& v : vars) avoid.insert(v);
                for (std::string& v : vars) {
                    if (repl_vars.count(v)) {
                        std::string nv = fresh_name(v, avoid);
                        avoid.insert(nv);
                        body = substitute(body, v, t_var(nv));
                        v = nv;
                    }
                }
                body = substitute(body, var, repl);
            }
            switch (f->kind) {
                case FK::exists: return f_exists(std::move(vars), body);
                case FK::forall: return f_forall(std::move(vars), body);
                case FK::exists_rel: return f_exists_rel(std::move(*set), std::move(vars), body);
                default: return f_forall_rel(std::move(*set), std::move(vars), body);
            }
        }
    }
    return f;
}

// --- normalization ---------------------------------------------------------------

namespace {

FormulaPtr normalize_rec(const FormulaPtr& f, std::set<std::string>& bound_on_path) {
    switch (f->kind) {
        case FK::equals:
        case FK::macro: return f;
        case FK::f_not: return f_not(normalize_rec(f->f1, bound_on_path));
        case FK::f_and:
        case FK::f_or:
        case FK::implies: {
            FormulaPtr a = normalize_rec(f->f1, bound_on_path);
            FormulaPtr b = normalize_rec(f->f2, bound_on_path);
            return f->kind == FK::f_and ? f_and(a, b) : f->kind == FK::f_or ? f_or(a, b) : f_imp(a, b);
        }
        case FK::exists:
        case FK::forall:
        case FK::exists_rel:
        case FK::forall_rel: {
            bool rel = f->set.has_value();
            FormulaPtr body = f->f1;
            std::vector<std::string> vars = f->vars;
            // de-shadow against everything bound above
            std::set<std::string> avoid = bound_on_path;
            for (const std::string& v : free_vars(body)) avoid.insert(v);
            for (std::string& v : vars) {
                if (bound_on_path.count(v)) {
                    std::string nv = fresh_name(v, avoid);
                    avoid.insert(nv);
                    body = substitute(body, v, t_var(nv));
                    v = nv;
                }
            }
            std::vector<std::string> added;
            for (const std::string& v : vars)
                if (bound_on_path.insert(v).second) added.push_back(v);
            FormulaPtr nbody = normalize_rec(body, bound_on_path);
            for (const std::string& v : added) bound_on_path.erase(v);

            if (rel) {
                SetRef s = *f->set;
                return f->kind == FK::exists_rel ? f_exists_rel(std::move(s), std::move(vars), nbody)
                                                 : f_forall_rel(std::move(s), std::move(vars), nbody);
            }
            // expand the sugar: one binder per variable, innermost last
            FormulaPtr acc = nbody;
            for (size_t i = vars.size(); i-- > 0;)
                acc = f->kind == FK::exists ? f_exists({vars[i]}, acc) : f_forall({vars[i]}, acc);
            return acc;
        }
    }
    return f;
}

}  // namespace

FormulaPtr normalize(const FormulaPtr& f) {
    std::set<std::string> bound;
    return normalize_rec(f, bound);
}

// --- statistics ------------------------------------------------------------------

namespace {

unsigned long long term_nodes(const TermPtr& t, std::unordered_map<const Term*, unsigned long long>& memo) {
    if (!t) return 0;
    auto it = memo.find(t.get());
    if (it != memo.end()) return it->second;
    unsigned long long n = 1 + term_nodes(t->a, memo) + term_nodes(t->b, memo);
    memo.emplace(t.get(), n);
    return n;
}

struct StatsWork {
    std::unordered_map<const Term*, unsigned long long> term_memo;
    std::unordered_map<const Formula*, unsigned long long> count_memo;
    std::unordered_map<const Formula*, unsigned long long> depth_memo;
    // alternation memo keyed by (node, polarity, last effective kind)
    std::unordered_map<const Formula*, unsigned long long> alt_memo[2][3];
    std::set<std::string> macros;
    std::set<const Formula*> visited_macros;
};

unsigned long long count_nodes(const FormulaPtr& f, StatsWork& w) {
    auto it = w.count_memo.find(f.get());
    if (it != w.count_memo.end()) return it->second;
    unsigned long long n = 1;
    switch (f->kind) {
        case FK::equals: n += term_nodes(f->t1, w.term_memo) + term_nodes(f->t2, w.term_memo); break;
        case FK::f_not: n += count_nodes(f->f1, w); break;
        case FK::f_and:
        case FK::f_or:
        case FK::implies: n += count_nodes(f->f1, w) + count_nodes(f->f2, w); break;
        case FK::exists:
        case FK::forall:
        case FK::exists_rel:
        case FK::forall_rel:
            if (f->set && f->set->delta) n += term_nodes(f->set->delta, w.term_memo);
            n += count_nodes(f->f1, w);
            break;
        case FK::macro:
            for (const TermPtr& a : f->args) n += term_nodes(a, w.term_memo);
            break;
    }
    w.count_memo.emplace(f.get(), n);
    return n;
}

unsigned long long depth(const FormulaPtr& f, StatsWork& w) {
    auto it = w.depth_memo.find(f.get());
    if (it != w.depth_memo.end()) return it->second;
    unsigned long long d = 0;
    switch (f->kind) {
        case FK::equals:
        case FK::macro: d = 0; break;
        case FK::f_not: d = depth(f->f1, w); break;
        case FK::f_and:
        case FK::f_or:
        case FK::implies: d = std::max(depth(f->f1, w), depth(f->f2, w)); break;
        default: d = 1 + depth(f->f1, w); break;
    }
    w.depth_memo.emplace(f.get(), d);
    return d;
}

// max number of effective-quantifier-kind switches along any path below f.
// pol: 0 positive, 1 negative. last: 0 none, 1 exists, 2 forall.
unsigned long long alternations(const FormulaPtr& f, int pol, int last, StatsWork& w) {
    auto& memo = w.alt_memo[pol][last];
    auto it = memo.find(f.get());
    if (it != memo.end()) return it->second;
    unsigned long long r = 0;
    switch (f->kind) {
        case FK::equals:
        case FK::macro: r = 0; break;
        case FK::f_not: r = alternations(f->f1, 1 - pol, last, w); break;
        case FK::f_and:
        case FK::f_or:
            r = std::max(alternations(f->f1, pol, last, w), alternations(f->f2, pol, last, w));
            break;
        case FK::implies:
            r = std::max(alternations(f->f1, 1 - pol, last, w), alternations(f->f2, pol, last, w));
            break;
        case FK::exists:
        case FK::forall:
        case FK::exists_rel:
        case FK::forall_rel: {
            bool ex = f->kind == FK::exists || f->kind == FK::exists_rel;
            int eff = (ex == (pol == 0)) ? 1 : 2;
            unsigned long long below = alternations(f->f1, pol, eff, w);
            r = (last != 0 && last != eff) ? below + 1 : below;
            break;
        }
    }
    memo.emplace(f.get(), r);
    return r;
}

void collect_macros(const FormulaPtr& f, StatsWork& w) {
    if (!w.visited_macros.insert(f.get()).second) return;
    switch (f->kind) {
        case FK::macro: w.macros.insert(f->macro_name); break;
        case FK::equals: break;
        case FK::f_not: collect_macros(f->f1, w); break;
        case FK::f_and:
        case FK::f_or:
        case FK::implies:
            collect_macros(f->f1, w);
            collect_macros(f->f2, w);
            break;
        default: collect_macros(f->f1, w); break;
    }
}

}  // namespace

FormulaStats stats(const FormulaPtr& f) {
    StatsWork w;
    FormulaStats s;
    s.node_count = count_nodes(f, w);
    s.quantifier_depth = depth(f, w);
    s.alternation_count = alternations(f, 0, 0, w);
    collect_macros(f, w);
    s.macro_names = std::move(w.macros);
    return s;
}

}  // namespace valdef::fol
