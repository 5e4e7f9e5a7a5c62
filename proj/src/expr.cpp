#include "dtm/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "dtm/errors.hpp"

namespace dtm {

namespace {

ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

const char* fn_name(FnKind f) {
    switch (f) {
        case FnKind::Exp: return "exp";
        case FnKind::Ln: return "ln";
        case FnKind::Sin: return "sin";
        case FnKind::Cos: return "cos";
        case FnKind::Sqrt: return "sqrt";
        case FnKind::Powr: return "powr";
    }
    return "?";
}

} // namespace

ExprPtr make_const(double v) { return node({.kind = Expr::Kind::Const, .value = v}); }
ExprPtr make_indep() { return node({.kind = Expr::Kind::IndepVar}); }
ExprPtr make_state(std::string id) {
    return node({.kind = Expr::Kind::StateRef, .name = std::move(id)});
}
ExprPtr make_add(ExprPtr a, ExprPtr b) {
    return node({.kind = Expr::Kind::Add, .a = std::move(a), .b = std::move(b)});
}
ExprPtr make_sub(ExprPtr a, ExprPtr b) {
    return node({.kind = Expr::Kind::Sub, .a = std::move(a), .b = std::move(b)});
}
ExprPtr make_mul(ExprPtr a, ExprPtr b) {
    return node({.kind = Expr::Kind::Mul, .a = std::move(a), .b = std::move(b)});
}
ExprPtr make_div(ExprPtr a, ExprPtr b) {
    return node({.kind = Expr::Kind::Div, .a = std::move(a), .b = std::move(b)});
}
ExprPtr make_neg(ExprPtr a) { return node({.kind = Expr::Kind::Neg, .a = std::move(a)}); }
ExprPtr make_ipow(ExprPtr a, int n) {
    if (n < 0) throw SchemaError("integer power exponent must be >= 0");
    return node({.kind = Expr::Kind::IntPow, .a = std::move(a), .ipow = n});
}
ExprPtr make_func(FnKind fn, ExprPtr a, double r) {
    // sqrt is stored as the half power so one domain rule covers both.
    if (fn == FnKind::Sqrt) {
        fn = FnKind::Powr;
        r = 0.5;
    }
    return node({.kind = Expr::Kind::Func, .a = std::move(a), .fn = fn, .fr = r});
}

bool equal(const Expr& x, const Expr& y) {
    if (x.kind != y.kind) return false;
    switch (x.kind) {
        case Expr::Kind::Const: return x.value == y.value;
        case Expr::Kind::IndepVar: return true;
        case Expr::Kind::StateRef: return x.name == y.name;
        case Expr::Kind::Add:
        case Expr::Kind::Sub:
        case Expr::Kind::Mul:
        case Expr::Kind::Div: return equal(*x.a, *y.a) && equal(*x.b, *y.b);
        case Expr::Kind::Neg: return equal(*x.a, *y.a);
        case Expr::Kind::IntPow: return x.ipow == y.ipow && equal(*x.a, *y.a);
        case Expr::Kind::Func: return x.fn == y.fn && x.fr == y.fr && equal(*x.a, *y.a);
    }
    return false;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

struct Token {
    enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };
    Kind kind;
    std::string text;
    double num = 0.0;
    std::size_t offset = 0;
};

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            if (j < s.size() && s[j] == '.') {
                ++j;
                while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            }
            if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
                if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
                    ++k;
                    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
                    j = k;
                }
            }
            std::string text(s.substr(start, j - start));
            if (text == ".") throw ParseError("malformed number", start);
            out.push_back({Token::Kind::Number, text, std::strtod(text.c_str(), nullptr), start});
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
                ++j;
            out.push_back({Token::Kind::Ident, std::string(s.substr(start, j - start)), 0.0, start});
            i = j;
            continue;
        }
        Token::Kind k;
        switch (c) {
            case '+': k = Token::Kind::Plus; break;
            case '-': k = Token::Kind::Minus; break;
            case '*': k = Token::Kind::Star; break;
            case '/': k = Token::Kind::Slash; break;
            case '^': k = Token::Kind::Caret; break;
            case '(': k = Token::Kind::LParen; break;
            case ')': k = Token::Kind::RParen; break;
            case ',': k = Token::Kind::Comma; break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
        out.push_back({k, std::string(1, c), 0.0, start});
        ++i;
    }
    out.push_back({Token::Kind::End, "", 0.0, s.size()});
    return out;
}

// ---------------------------------------------------------------------------
// Parser

struct Parser {
    const std::vector<Token>& toks;
    const ParseSymbols& sym;
    std::size_t pos = 0;

    const Token& peek() const { return toks[pos]; }
    const Token& take() { return toks[pos++]; }
    bool at(Token::Kind k) const { return peek().kind == k; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, peek().offset);
    }

    void expect(Token::Kind k, const char* what) {
        if (!at(k)) fail(std::string("expected ") + what);
        ++pos;
    }

    ExprPtr parse_expression() {
        auto lhs = parse_term();
        while (at(Token::Kind::Plus) || at(Token::Kind::Minus)) {
            bool plus = take().kind == Token::Kind::Plus;
            auto rhs = parse_term();
            lhs = plus ? make_add(lhs, rhs) : make_sub(lhs, rhs);
        }
        return lhs;
    }

    ExprPtr parse_term() {
        auto lhs = parse_unary();
        while (at(Token::Kind::Star) || at(Token::Kind::Slash)) {
            bool mul = take().kind == Token::Kind::Star;
            auto rhs = parse_unary();
            lhs = mul ? make_mul(lhs, rhs) : make_div(lhs, rhs);
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (at(Token::Kind::Minus)) {
            ++pos;
            return make_neg(parse_unary());
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        auto base = parse_base();
        if (at(Token::Kind::Caret)) {
            ++pos;
            if (!at(Token::Kind::Number))
                fail("exponent must be a non-negative integer literal");
            const Token& t = take();
            double n = t.num;
            if (n != std::floor(n) || t.text.find_first_of(".eE") != std::string::npos)
                throw ParseError("exponent must be a non-negative integer literal", t.offset);
            return make_ipow(base, static_cast<int>(n));
        }
        return base;
    }

    double parse_rational_literal() {
        bool neg = false;
        if (at(Token::Kind::Minus)) {
            ++pos;
            neg = true;
        }
        if (!at(Token::Kind::Number)) fail("expected a numeric exponent");
        double num = take().num;
        if (at(Token::Kind::Slash)) {
            ++pos;
            if (!at(Token::Kind::Number)) fail("expected a denominator");
            const Token& d = take();
            if (d.num == 0.0) throw ParseError("zero denominator in exponent", d.offset);
            num /= d.num;
        }
        return neg ? -num : num;
    }

    ExprPtr parse_base() {
        if (at(Token::Kind::Number)) return make_const(take().num);
        if (at(Token::Kind::LParen)) {
            ++pos;
            auto inner = parse_expression();
            expect(Token::Kind::RParen, "')'");
            return inner;
        }
        if (at(Token::Kind::Ident)) {
            const Token& t = take();
            const std::string& id = t.text;
            bool call = at(Token::Kind::LParen);
            FnKind fn{};
            bool is_fn = true;
            if (id == "exp") fn = FnKind::Exp;
            else if (id == "ln") fn = FnKind::Ln;
            else if (id == "sin") fn = FnKind::Sin;
            else if (id == "cos") fn = FnKind::Cos;
            else if (id == "sqrt") fn = FnKind::Sqrt;
            else if (id == "powr") fn = FnKind::Powr;
            else is_fn = false;

            if (is_fn) {
                if (!call)
                    throw ParseError("reserved function name '" + id + "' needs arguments", t.offset);
                ++pos;  // (
                auto arg = parse_expression();
                double r = 0.0;
                if (fn == FnKind::Powr) {
                    expect(Token::Kind::Comma, "',' before the powr exponent");
                    r = parse_rational_literal();
                } else if (at(Token::Kind::Comma)) {
                    fail("'" + id + "' takes a single argument");
                }
                expect(Token::Kind::RParen, "')'");
                return make_func(fn, arg, r);
            }
            if (call) throw ParseError("unknown function '" + id + "'", t.offset);
            if (id == sym.indep) return make_indep();
            if (sym.known_states && !sym.known_states->count(id))
                throw ParseError("unknown identifier '" + id + "'", t.offset);
            return make_state(id);
        }
        fail("expected a number, identifier or '('");
    }
};

} // namespace

ExprPtr parse_expr(std::string_view text, const ParseSymbols& sym) {
    auto toks = lex(text);
    Parser p{toks, sym};
    auto e = p.parse_expression();
    if (!p.at(Token::Kind::End)) p.fail("trailing input after expression");
    return e;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int prec(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return 1;
        case Expr::Kind::Mul:
        case Expr::Kind::Div: return 2;
        case Expr::Kind::Neg: return 3;
        case Expr::Kind::IntPow: return 4;
        default: return 5;
    }
}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void print(const Expr& e, const std::string& indep, int min_prec, std::string& out) {
    bool parens = prec(e) < min_prec;
    if (parens) out += '(';
    switch (e.kind) {
        case Expr::Kind::Const: out += fmt_num(e.value); break;
        case Expr::Kind::IndepVar: out += indep; break;
        case Expr::Kind::StateRef: out += e.name; break;
        case Expr::Kind::Add:
            print(*e.a, indep, 1, out);
            out += " + ";
            print(*e.b, indep, 2, out);
            break;
        case Expr::Kind::Sub:
            print(*e.a, indep, 1, out);
            out += " - ";
            print(*e.b, indep, 2, out);
            break;
        case Expr::Kind::Mul:
            print(*e.a, indep, 2, out);
            out += " * ";
            print(*e.b, indep, 3, out);
            break;
        case Expr::Kind::Div:
            print(*e.a, indep, 2, out);
            out += " / ";
            print(*e.b, indep, 3, out);
            break;
        case Expr::Kind::Neg:
            out += '-';
            print(*e.a, indep, 3, out);
            break;
        case Expr::Kind::IntPow:
            print(*e.a, indep, 5, out);
            out += '^';
            out += std::to_string(e.ipow);
            break;
        case Expr::Kind::Func:
            if (e.fn == FnKind::Powr && e.fr == 0.5) {
                out += "sqrt(";
                print(*e.a, indep, 0, out);
                out += ')';
            } else {
                out += fn_name(e.fn);
                out += '(';
                print(*e.a, indep, 0, out);
                if (e.fn == FnKind::Powr) {
                    out += ", ";
                    out += fmt_num(e.fr);
                }
                out += ')';
            }
            break;
    }
    if (parens) out += ')';
}

} // namespace

std::string to_string(const Expr& e, const std::string& indep) {
    std::string out;
    print(e, indep, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Folding

namespace {

bool is_const(const ExprPtr& e, double v) {
    return e->kind == Expr::Kind::Const && e->value == v;
}

} // namespace

ExprPtr fold_constants(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Const:
        case Expr::Kind::IndepVar:
        case Expr::Kind::StateRef: return e;
        default: break;
    }
    ExprPtr a = e->a ? fold_constants(e->a) : nullptr;
    ExprPtr b = e->b ? fold_constants(e->b) : nullptr;
    bool ca = a && a->kind == Expr::Kind::Const;
    bool cb = b && b->kind == Expr::Kind::Const;

    switch (e->kind) {
        case Expr::Kind::Add:
            if (ca && cb) return make_const(a->value + b->value);
            if (is_const(a, 0.0)) return b;
            if (is_const(b, 0.0)) return a;
            return make_add(a, b);
        case Expr::Kind::Sub:
            if (ca && cb) return make_const(a->value - b->value);
            if (is_const(b, 0.0)) return a;
            if (is_const(a, 0.0)) return fold_constants(make_neg(b));
            return make_sub(a, b);
        case Expr::Kind::Mul:
            if (ca && cb) return make_const(a->value * b->value);
            if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
            if (is_const(a, 1.0)) return b;
            if (is_const(b, 1.0)) return a;
            return make_mul(a, b);
        case Expr::Kind::Div:
            if (ca && cb && b->value != 0.0) return make_const(a->value / b->value);
            if (is_const(b, 1.0)) return a;
            return make_div(a, b);
        case Expr::Kind::Neg:
            if (ca) return make_const(-a->value);
            if (a->kind == Expr::Kind::Neg) return a->a;
            return make_neg(a);
        case Expr::Kind::IntPow:
            if (e->ipow == 0) return make_const(1.0);
            if (e->ipow == 1) return a;
            if (ca) return make_const(std::pow(a->value, e->ipow));
            return make_ipow(a, e->ipow);
        case Expr::Kind::Func: return make_func(e->fn, a, e->fr);
        default: return e;
    }
}

bool is_pure(const Expr& e) {
    if (e.kind == Expr::Kind::StateRef) return false;
    if (e.a && !is_pure(*e.a)) return false;
    if (e.b && !is_pure(*e.b)) return false;
    return true;
}

void collect_states(const Expr& e, std::set<std::string>& out) {
    if (e.kind == Expr::Kind::StateRef) out.insert(e.name);
    if (e.a) collect_states(*e.a, out);
    if (e.b) collect_states(*e.b, out);
}

// ---------------------------------------------------------------------------
// Point evaluation

namespace {

template <class T>
T eval_impl(const Expr& e, T v, const std::function<double(const std::string&)>* state) {
    switch (e.kind) {
        case Expr::Kind::Const: return T(e.value);
        case Expr::Kind::IndepVar: return v;
        case Expr::Kind::StateRef:
            if constexpr (std::is_same_v<T, double>) {
                if (!state) throw NumericError("state reference in a pure context");
                return (*state)(e.name);
            } else {
                throw NumericError("state reference in a pure context");
            }
        case Expr::Kind::Add: return eval_impl(*e.a, v, state) + eval_impl(*e.b, v, state);
        case Expr::Kind::Sub: return eval_impl(*e.a, v, state) - eval_impl(*e.b, v, state);
        case Expr::Kind::Mul: return eval_impl(*e.a, v, state) * eval_impl(*e.b, v, state);
        case Expr::Kind::Div: return eval_impl(*e.a, v, state) / eval_impl(*e.b, v, state);
        case Expr::Kind::Neg: return -eval_impl(*e.a, v, state);
        case Expr::Kind::IntPow: {
            T base = eval_impl(*e.a, v, state);
            T acc = T(1.0);
            for (int i = 0; i < e.ipow; ++i) acc *= base;
            return acc;
        }
        case Expr::Kind::Func: {
            T x = eval_impl(*e.a, v, state);
            using std::cos;
            using std::exp;
            using std::log;
            using std::pow;
            using std::sin;
            switch (e.fn) {
                case FnKind::Exp: return exp(x);
                case FnKind::Sin: return sin(x);
                case FnKind::Cos: return cos(x);
                case FnKind::Ln:
                    if constexpr (std::is_same_v<T, double>)
                        if (x <= 0.0) throw NumericError("ln of a non-positive value");
                    return log(x);
                case FnKind::Sqrt:
                case FnKind::Powr: {
                    double r = e.fn == FnKind::Sqrt ? 0.5 : e.fr;
                    if constexpr (std::is_same_v<T, double>) {
                        if (r == 0.5 ? x < 0.0 : x <= 0.0)
                            throw NumericError("powr of a non-positive base");
                    }
                    return pow(x, T(r));
                }
            }
            return T(0.0);
        }
    }
    return T(0.0);
}

} // namespace

double eval_point(const Expr& e, double v,
                  const std::function<double(const std::string&)>& state) {
    return eval_impl<double>(e, v, &state);
}

std::complex<double> eval_point_complex(const Expr& e, std::complex<double> v) {
    return eval_impl<std::complex<double>>(e, v, nullptr);
}

} // namespace dtm
