#pragma once

#include <valdef/algebra.hpp>
#include <valdef/common.hpp>

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

// First-order language of rings: syntax trees for terms and formulas with
// relativized quantifiers and opaque macro nodes, an S-expression
// parser/printer pair, capture-avoiding substitution, formula statistics and
// exhaustive evaluation over finite fields.
namespace valdef::fol {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Signature {0, 1, +, *, -}; no division (inverses are encoded
// existentially by emitters upstream).
struct Term {
    enum class Kind { var, zero, one, add, mul, neg };
    Kind kind;
    std::string name;  // var
    TermPtr a, b;      // add/mul children, neg child in a
};

TermPtr t_var(std::string name);
TermPtr t_zero();
TermPtr t_one();
TermPtr t_add(TermPtr a, TermPtr b);
TermPtr t_mul(TermPtr a, TermPtr b);
TermPtr t_neg(TermPtr a);
// integer literal as a signed sum of 1s (small n only)
TermPtr t_int(long n);

// Parameter-set reference for relativized quantifiers. The tag fixes the
// binder arity: ubullet binds a pair, the others bind one variable.
struct SetRef {
    enum class Tag { sigma, udelta, ubullet, delta_u0 };
    Tag tag;
    TermPtr delta;        // sigma / udelta / ubullet
    std::string u0_name;  // delta_u0
};

int setref_arity(const SetRef& s);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { equals, f_and, f_or, f_not, implies, exists, forall, exists_rel, forall_rel, macro };
    Kind kind;
    TermPtr t1, t2;                  // equals
    FormulaPtr f1, f2;               // connective children; quantifier body in f1
    std::vector<std::string> vars;   // quantifiers
    std::optional<SetRef> set;       // relativized quantifiers
    std::string macro_name;          // macro
    std::vector<TermPtr> args;       // macro
};

FormulaPtr f_eq(TermPtr a, TermPtr b);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_imp(FormulaPtr a, FormulaPtr b);
FormulaPtr f_exists(std::vector<std::string> vars, FormulaPtr body);
FormulaPtr f_forall(std::vector<std::string> vars, FormulaPtr body);
FormulaPtr f_exists_rel(SetRef set, std::vector<std::string> vars, FormulaPtr body);
FormulaPtr f_forall_rel(SetRef set, std::vector<std::string> vars, FormulaPtr body);
FormulaPtr f_macro(std::string name, std::vector<TermPtr> args);

// left fold of a nonempty list under and/or
FormulaPtr f_and_all(const std::vector<FormulaPtr>& fs);
FormulaPtr f_or_all(const std::vector<FormulaPtr>& fs);

bool term_eq(const TermPtr& a, const TermPtr& b);
bool formula_eq(const FormulaPtr& a, const FormulaPtr& b);

// --- text -------------------------------------------------------------------

enum class PrintFormat { sexpr, unicode };

// sexpr is the bit-exact canonical form (single spaces, lowercase heads);
// unicode (micro-symbols, middle dots) is for reading only
std::string print_term(const TermPtr& t, PrintFormat format = PrintFormat::sexpr);
std::string print_formula(const FormulaPtr& f, PrintFormat format = PrintFormat::sexpr);

// parse errors carry "line L, col C"
TermPtr parse_term(const std::string& text);
FormulaPtr parse_formula(const std::string& text);

// --- structure ---------------------------------------------------------------

std::set<std::string> free_vars(const FormulaPtr& f);
std::set<std::string> term_vars(const TermPtr& t);

TermPtr term_substitute(const TermPtr& t, const std::string& var, const TermPtr& repl);
// capture-avoiding; bound occurrences untouched, binders renamed (appending
// apostrophes) when repl's variables would be captured
FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const TermPtr& repl);

// expands every multi-variable binder into nested single binders and renames
// so no variable is bound twice on any root-to-leaf path
FormulaPtr normalize(const FormulaPtr& f);

struct FormulaStats {
    unsigned long long node_count = 0;       // term + formula nodes, tree multiplicity
    unsigned long long quantifier_depth = 0; // max binder nodes on a path
    unsigned long long alternation_count = 0;
    std::set<std::string> macro_names;
};

// alternation_count is polarity-aware: a quantifier under an odd number of
// negations (or on the left of an implication) counts as its dual, so the
// count matches the prenex picture rather than raw syntax
FormulaStats stats(const FormulaPtr& f);

// --- evaluation ----------------------------------------------------------------

// Tarskian truth over a finite field, exhaustive enumeration in canonical
// element order with short-circuiting. The formula must be macro-free and
// SetRef-free; free variables are read from `assignment`.
bool eval_sentence(const FormulaPtr& f, const algebra::Field& K,
                   const std::map<std::string, algebra::Elem>& assignment = {});

}  // namespace valdef::fol
