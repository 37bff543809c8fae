#include <valdef/algebra.hpp>

#include <cctype>
#include <sstream>

namespace valdef::algebra {

namespace {

using Kind = FieldDesc::Kind;

bool plain_nonneg_int(const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s)
        if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    return true;
}

// split "a,b,c" at top-level commas, ignoring commas nested in () or []
std::vector<std::string> split_top(const std::string& s) {
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

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

}  // namespace

// --- field text ---------------------------------------------------------------

std::string field_str(const Field& f) {
    switch (f->kind) {
        case Kind::fp: return "Fp:" + f->p.get_str();
        case Kind::q: return "Q";
        case Kind::fqquot: {
            std::string coeffs;
            for (size_t i = 0; i < f->modulus.size(); ++i) {
                if (i) coeffs += ",";
                coeffs += elem_str(f->modulus[i]);
            }
            if (f->base->kind == Kind::fp) {
                std::ostringstream os;
                os << "Fq:" << f->base->p.get_str() << "^" << (f->modulus.size() - 1) << "/[" << coeffs << "]";
                return os.str();
            }
            return "Quot(" + field_str(f->base) + ",[" + coeffs + "])";
        }
        case Kind::ratfunc: return "RatFunc(" + field_str(f->base) + "," + f->var + ")";
        case Kind::quadext: return "QuadExt(" + field_str(f->base) + "," + elem_str(*f->eps) + ")";
    }
    throw precondition_error("field_str: bad kind");
}

Field parse_field(const std::string& text) {
    std::string s = strip(text);
    if (s == "Q") return make_q();
    if (s.rfind("Fp:", 0) == 0) {
        std::string body = strip(s.substr(3));
        if (!plain_nonneg_int(body)) throw parse_error("bad prime in field text: " + s);
        return make_fp(Int(body));
    }
    if (s.rfind("Fq:", 0) == 0) {
        std::string body = s.substr(3);
        size_t caret = body.find('^');
        size_t slash = body.find('/');
        if (caret == std::string::npos || slash == std::string::npos || slash < caret)
            throw parse_error("bad finite field text: " + s);
        std::string ps = strip(body.substr(0, caret));
        std::string ks = strip(body.substr(caret + 1, slash - caret - 1));
        std::string ms = strip(body.substr(slash + 1));
        if (!plain_nonneg_int(ps) || !plain_nonneg_int(ks)) throw parse_error("bad finite field text: " + s);
        if (ms.size() < 2 || ms.front() != '[' || ms.back() != ']')
            throw parse_error("bad finite field modulus: " + s);
        std::vector<Int> coeffs;
        for (const std::string& part : split_top(ms.substr(1, ms.size() - 2))) {
            std::string t = strip(part);
            bool negative = !t.empty() && t[0] == '-';
            if (negative) t = strip(t.substr(1));
            if (!plain_nonneg_int(t)) throw parse_error("bad modulus coefficient in " + s);
            Int c(t);
            coeffs.push_back(negative ? Int(-c) : c);
        }
        unsigned long k = std::stoul(ks);
        if (coeffs.size() != k + 1) throw parse_error("modulus degree does not match exponent in " + s);
        return make_fq(Int(ps), coeffs);
    }
    if (s.rfind("RatFunc(", 0) == 0 && s.back() == ')') {
        auto parts = split_top(s.substr(8, s.size() - 9));
        if (parts.size() != 2) throw parse_error("RatFunc takes a base field and a variable: " + s);
        return make_ratfunc(parse_field(strip(parts[0])), strip(parts[1]));
    }
    if (s.rfind("QuadExt(", 0) == 0 && s.back() == ')') {
        auto parts = split_top(s.substr(8, s.size() - 9));
        if (parts.size() != 2) throw parse_error("QuadExt takes a base field and an element: " + s);
        Field base = parse_field(strip(parts[0]));
        Elem eps = parse_elem(base, strip(parts[1]));
        return make_quadext(base, eps);
    }
    throw parse_error("unrecognized field text: " + text);
}

// --- element text ---------------------------------------------------------------

std::string elem_str(const Elem& a) {
    const Field& f = a.field();
    switch (f->kind) {
        case Kind::fp: return std::get<Int>(a.rep()).get_str();
        case Kind::q: return std::get<Rat>(a.rep()).get_str();
        case Kind::fqquot: {
            // padded coefficient list, constant first
            int deg = field_deg(f);
            const auto& v = std::get<std::vector<Elem>>(a.rep());
            std::string out = "[";
            for (int i = 0; i < deg; ++i) {
                if (i) out += ",";
                out += i < static_cast<int>(v.size()) ? elem_str(v[i]) : elem_str(zero(f->base));
            }
            return out + "]";
        }
        case Kind::ratfunc: {
            Poly num = frac_num(a), den = frac_den(a);
            std::string ns = poly_str(num, f->var);
            if (poly_deg(den) == 0 && elem_eq(poly_lc(den), one(f->base))) return ns;
            return "(" + ns + ")/(" + poly_str(den, f->var) + ")";
        }
        case Kind::quadext: {
            Elem x = quad_x(a), y = quad_y(a);
            if (is_zero(y)) return elem_str(x);
            std::string ys = "(" + elem_str(y) + ")*sqrt";
            if (is_zero(x)) return ys;
            return "(" + elem_str(x) + ")+" + ys;
        }
    }
    throw precondition_error("elem_str: bad kind");
}

std::string poly_str(const Poly& p, const std::string& var) {
    if (poly_is_zero(p)) return "0";
    std::string out;
    for (int k = poly_deg(p); k >= 0; --k) {
        const Elem& c = p.c[static_cast<size_t>(k)];
        if (is_zero(c)) continue;
        if (!out.empty()) out += "+";
        std::string cs = elem_str(c);
        bool is_one = elem_eq(c, one(p.field));
        std::string coeff_part;
        if (!(is_one && k > 0)) coeff_part = plain_nonneg_int(cs) ? cs : "(" + cs + ")";
        std::string var_part;
        if (k == 1)
            var_part = var;
        else if (k > 1)
            var_part = var + "^" + std::to_string(k);
        if (!coeff_part.empty() && !var_part.empty())
            out += coeff_part + "*" + var_part;
        else
            out += coeff_part + var_part;
    }
    return out;
}

// --- expression parser ------------------------------------------------------------

namespace {

// Small recursive-descent parser over +,-,*,/,^, parentheses, integer
// literals, coefficient lists and the named constants (ratfunc variable,
// `w` finite generator, `sqrt` quadext root). Constants of subfields resolve
// through the tower.
class ElemParser {
public:
    ElemParser(const Field& f, const std::string& text) : field_(f), s_(text) {}

    Elem run() {
        Elem e = expr(field_);
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return e;
    }

private:
    const Field& field_;
    const std::string& s_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) {
        throw parse_error("element text, position " + std::to_string(pos_ + 1) + ": " + msg);
    }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    bool eat(char ch) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    Elem expr(const Field& f) {
        bool negate = eat('-');
        Elem acc = term(f);
        if (negate) acc = neg(acc);
        while (true) {
            if (eat('+'))
                acc = add(acc, term(f));
            else if (eat('-'))
                acc = sub(acc, term(f));
            else
                return acc;
        }
    }

    Elem term(const Field& f) {
        Elem acc = factor(f);
        while (true) {
            if (eat('*'))
                acc = mul(acc, factor(f));
            else if (eat('/'))
                acc = div(acc, factor(f));
            else
                return acc;
        }
    }

    Elem factor(const Field& f) {
        Elem base = atom(f);
        if (eat('^')) {
            bool negexp = eat('-');
            Int e = integer();
            base = pow_elem(base, negexp ? Int(-e) : e);
        }
        return base;
    }

    Int integer() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected an integer");
        return Int(s_.substr(start, pos_ - start));
    }

    Elem atom(const Field& f) {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Elem e = expr(f);
            if (!eat(')')) fail("expected )");
            return e;
        }
        if (c == '[') return bracket_list(f);
        if (std::isdigit(static_cast<unsigned char>(c))) return from_int(f, integer());
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            auto found = constant(f, name);
            if (!found) fail("unknown name: " + name);
            return *found;
        }
        fail("expected a value");
    }

    // resolve a named constant at this level or lift it from the base tower
    std::optional<Elem> constant(const Field& f, const std::string& name) {
        switch (f->kind) {
            case Kind::ratfunc:
                if (name == f->var) return poly_to_elem(f, poly_x(f->base));
                if (auto sub = constant(f->base, name)) return lift(f, *sub);
                return std::nullopt;
            case Kind::fqquot:
                if (name == "w") return Elem(f, Rep(std::vector<Elem>{zero(f->base), one(f->base)}));
                if (auto sub = constant(f->base, name)) return lift(f, *sub);
                return std::nullopt;
            case Kind::quadext:
                if (name == "sqrt") return make_quad(f, zero(f->base), one(f->base));
                if (auto sub = constant(f->base, name)) return lift(f, *sub);
                return std::nullopt;
            default: return std::nullopt;
        }
    }

    // [c0,c1,...]: coefficient list over the base of a quotient extension.
    // In bigger towers it denotes the extension element, lifted.
    Elem bracket_list(const Field& f) {
        if (f->kind == Kind::ratfunc || f->kind == Kind::quadext) return lift(f, bracket_list(f->base));
        if (f->kind != Kind::fqquot) fail("coefficient list outside a finite extension");
        if (!eat('[')) fail("expected [");
        std::vector<Elem> coeffs;
        if (!eat(']')) {
            while (true) {
                coeffs.push_back(expr(f->base));
                if (eat(']')) break;
                if (!eat(',')) fail("expected , or ]");
            }
        }
        if (static_cast<int>(coeffs.size()) > field_deg(f)) fail("coefficient list longer than the extension degree");
        std::vector<Elem> v = std::move(coeffs);
        while (!v.empty() && is_zero(v.back())) v.pop_back();
        return Elem(f, Rep(std::move(v)));
    }
};

}  // namespace

Elem parse_elem(const Field& f, const std::string& text) { return ElemParser(f, text).run(); }

Poly parse_poly(const Field& f, const std::string& var, const std::string& text) {
    Field rf = make_ratfunc(f, var);
    Elem e = parse_elem(rf, text);
    Poly den = frac_den(e);
    if (poly_deg(den) != 0) throw parse_error("expected a polynomial, got a proper fraction: " + text);
    return frac_num(e);
}

}  // namespace valdef::algebra
