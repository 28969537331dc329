#include "finsler/expr.hpp"

#include <charconv>
#include <cctype>
#include <cmath>
#include <numbers>

namespace finsler::expr {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string text;
    double number = 0.0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        if (pos_ >= src_.size()) return {Tok::End, start, ""};
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(start);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            return {Tok::Ident, start, std::string(src_.substr(start, pos_ - start))};
        }
        ++pos_;
        switch (c) {
            case '+': return {Tok::Plus, start, "+"};
            case '-': return {Tok::Minus, start, "-"};
            case '*': return {Tok::Star, start, "*"};
            case '/': return {Tok::Slash, start, "/"};
            case '^': return {Tok::Caret, start, "^"};
            case '(': return {Tok::LParen, start, "("};
            case ')': return {Tok::RParen, start, ")"};
            default: throw SyntaxError(std::string("unexpected character '") + c + "'", start);
        }
    }

private:
    Token number(std::size_t start) {
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                digits();
            else
                pos_ = save;  // "2e" followed by a non-digit: leave 'e' for the identifier lexer
        }
        const std::string_view text = src_.substr(start, pos_ - start);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size())
            throw SyntaxError("malformed number '" + std::string(text) + "'", start);
        return {Tok::Number, start, std::string(text), v};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

NodePtr make(NodeKind k, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

class Parser {
public:
    Parser(std::string_view src, const ParseOptions& opts) : lex_(src), opts_(opts) { advance(); }

    NodePtr parse_all() {
        NodePtr e = expression();
        if (cur_.kind != Tok::End) throw SyntaxError("unexpected token '" + cur_.text + "'", cur_.offset);
        return e;
    }

private:
    void advance() { cur_ = lex_.next(); }

    NodePtr expression() {
        NodePtr lhs = term();
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            const NodeKind k = cur_.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub;
            advance();
            lhs = make(k, lhs, term());
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = unary();
        while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
            const NodeKind k = cur_.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div;
            advance();
            lhs = make(k, lhs, unary());
        }
        return lhs;
    }

    NodePtr unary() {
        if (cur_.kind == Tok::Minus) {
            advance();
            return make(NodeKind::Neg, unary());
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (cur_.kind == Tok::Caret) {
            advance();
            return make(NodeKind::Pow, base, unary());
        }
        return base;
    }

    NodePtr primary() {
        const Token t = cur_;
        switch (t.kind) {
            case Tok::Number: {
                advance();
                auto n = std::make_shared<Node>();
                n->kind = NodeKind::Number;
                n->number = t.number;
                return n;
            }
            case Tok::LParen: {
                advance();
                NodePtr e = expression();
                expect(Tok::RParen, "')'");
                return e;
            }
            case Tok::Ident: return identifier(t);
            case Tok::End: throw SyntaxError("expected expression, found end of input", t.offset);
            default: throw SyntaxError("expected expression, found '" + t.text + "'", t.offset);
        }
    }

    NodePtr identifier(const Token& t) {
        advance();
        static const std::map<std::string, Func> funcs{
            {"sqrt", Func::Sqrt}, {"exp", Func::Exp}, {"log", Func::Log}, {"arctan", Func::Atan}, {"atan", Func::Atan}};
        if (auto f = funcs.find(t.text); f != funcs.end()) {
            if (cur_.kind != Tok::LParen)
                throw SyntaxError("expected '(' after function '" + t.text + "'", cur_.offset);
            advance();
            NodePtr arg = expression();
            expect(Tok::RParen, "')'");
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::Call;
            n->func = f->second;
            n->name = t.text == "atan" ? "arctan" : t.text;
            n->lhs = std::move(arg);
            return n;
        }
        for (std::size_t i = 0; i < opts_.variables.size(); ++i)
            if (opts_.variables[i] == t.text) {
                auto n = std::make_shared<Node>();
                n->kind = NodeKind::Variable;
                n->var = static_cast<int>(i);
                n->name = t.text;
                return n;
            }
        double value = 0.0;
        if (auto c = opts_.constants.find(t.text); c != opts_.constants.end())
            value = c->second;
        else if (t.text == "pi")
            value = std::numbers::pi;
        else
            throw UnknownIdentifierError(t.text, t.offset);
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::Constant;
        n->name = t.text;
        n->number = value;
        return n;
    }

    void expect(Tok k, const char* what) {
        if (cur_.kind != k) throw SyntaxError(std::string("expected ") + what, cur_.offset);
        advance();
    }

    Lexer lex_;
    const ParseOptions& opts_;
    Token cur_{Tok::End, 0, ""};
};

// Scalar helpers with domain checks, overloaded for double and Jet2.
double checked_sqrt(double x) {
    if (!(x >= 0.0)) throw DomainError("sqrt of negative value " + std::to_string(x));
    return std::sqrt(x);
}
double checked_log(double x) {
    if (!(x > 0.0)) throw DomainError("log needs a positive argument, got " + std::to_string(x));
    return std::log(x);
}
double checked_pow(double a, double r) {
    if (r == std::nearbyint(r)) return std::pow(a, r);
    if (!(a > 0.0) && !(a == 0.0 && r > 0.0))
        throw DomainError("non-integer power of non-positive base " + std::to_string(a));
    return std::pow(a, r);
}
double checked_div(double a, double b) {
    if (b == 0.0) throw SingularJetError("division by zero");
    return a / b;
}

Jet2 checked_sqrt(const Jet2& x) { return sqrt(x); }
Jet2 checked_log(const Jet2& x) { return log(x); }
Jet2 checked_pow(const Jet2& a, const Jet2& r) { return pow(a, r); }
Jet2 checked_div(const Jet2& a, const Jet2& b) { return a / b; }

template <class T>
T constant_like(double c, std::span<const T> vars);

template <>
double constant_like<double>(double c, std::span<const double>) {
    return c;
}

template <>
Jet2 constant_like<Jet2>(double c, std::span<const Jet2> vars) {
    if (vars.empty()) return Jet2::constant(c, 0, 0);
    return Jet2::constant(c, vars[0].order_u(), vars[0].order_v());
}

template <class T>
T eval_node(const Node& n, std::span<const T> vars) {
    using std::atan;
    using std::exp;
    switch (n.kind) {
        case NodeKind::Number:
        case NodeKind::Constant: return constant_like<T>(n.number, vars);
        case NodeKind::Variable: return vars[static_cast<std::size_t>(n.var)];
        case NodeKind::Neg: return -eval_node<T>(*n.lhs, vars);
        case NodeKind::Add: return eval_node<T>(*n.lhs, vars) + eval_node<T>(*n.rhs, vars);
        case NodeKind::Sub: return eval_node<T>(*n.lhs, vars) - eval_node<T>(*n.rhs, vars);
        case NodeKind::Mul: return eval_node<T>(*n.lhs, vars) * eval_node<T>(*n.rhs, vars);
        case NodeKind::Div: return checked_div(eval_node<T>(*n.lhs, vars), eval_node<T>(*n.rhs, vars));
        case NodeKind::Pow: return checked_pow(eval_node<T>(*n.lhs, vars), eval_node<T>(*n.rhs, vars));
        case NodeKind::Call: {
            const T a = eval_node<T>(*n.lhs, vars);
            switch (n.func) {
                case Func::Sqrt: return checked_sqrt(a);
                case Func::Exp: return exp(a);
                case Func::Log: return checked_log(a);
                case Func::Atan: return atan(a);
            }
        }
    }
    throw InvalidArgument("corrupt expression tree");
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

void render(const Node& n, std::string& out) {
    auto binary = [&](const char* op) {
        out += '(';
        render(*n.lhs, out);
        out += op;
        render(*n.rhs, out);
        out += ')';
    };
    switch (n.kind) {
        case NodeKind::Number:
            if (n.number < 0.0 || std::signbit(n.number)) {
                out += "(-" + format_number(-n.number) + ")";
            } else {
                out += format_number(n.number);
            }
            return;
        case NodeKind::Variable:
        case NodeKind::Constant: out += n.name; return;
        case NodeKind::Neg:
            out += "(-";
            render(*n.lhs, out);
            out += ')';
            return;
        case NodeKind::Add: binary(" + "); return;
        case NodeKind::Sub: binary(" - "); return;
        case NodeKind::Mul: binary(" * "); return;
        case NodeKind::Div: binary(" / "); return;
        case NodeKind::Pow: binary("^"); return;
        case NodeKind::Call:
            out += n.name + "(";
            render(*n.lhs, out);
            out += ')';
            return;
    }
}

}  // namespace

bool structurally_equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case NodeKind::Number: return a.number == b.number;
        case NodeKind::Variable: return a.var == b.var && a.name == b.name;
        case NodeKind::Constant: return a.name == b.name && a.number == b.number;
        case NodeKind::Neg: return structurally_equal(*a.lhs, *b.lhs);
        case NodeKind::Call: return a.func == b.func && structurally_equal(*a.lhs, *b.lhs);
        default: return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
    }
}

template <class T>
T Expr::eval(std::span<const T> vars) const {
    if (!root_) throw InvalidArgument("evaluating an empty expression");
    if (vars.size() != variables_.size())
        throw InvalidArgument("expression expects " + std::to_string(variables_.size()) + " variable(s)");
    return eval_node<T>(*root_, vars);
}

template double Expr::eval<double>(std::span<const double>) const;
template Jet2 Expr::eval<Jet2>(std::span<const Jet2>) const;

std::string Expr::to_string() const {
    std::string out;
    if (root_) render(*root_, out);
    return out;
}

Expr parse(std::string_view src, const ParseOptions& options) {
    Parser p(src, options);
    return Expr(p.parse_all(), options.variables);
}

Expr parse_t(std::string_view src, const std::map<std::string, double>& constants) {
    ParseOptions o;
    o.constants = constants;
    return parse(src, o);
}

double eval_expr(const Expr& e, double t) { return e(t); }
Jet2 eval_expr(const Expr& e, const Jet2& t) { return e(t); }

}  // namespace finsler::expr
