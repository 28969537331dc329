#pragma once

// A small arithmetic expression language for user-supplied functions.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | identifier | func '(' expr ')' | '(' expr ')'
//   func    := sqrt | exp | log | arctan | atan
//
// Identifiers are resolved while parsing: either one of the declared free
// variables (default: just `t`) or a named constant whose value is bound at
// parse time. `pi` is always available.

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finsler/jet2.hpp"

namespace finsler::expr {

enum class NodeKind { Number, Variable, Constant, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Func { Sqrt, Exp, Log, Atan };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind = NodeKind::Number;
    double number = 0.0;  // literal value, or bound value of a Constant
    int var = -1;         // Variable slot
    std::string name;     // Variable / Constant name
    Func func = Func::Sqrt;
    NodePtr lhs;
    NodePtr rhs;
};

bool structurally_equal(const Node& a, const Node& b);

struct ParseOptions {
    std::vector<std::string> variables{"t"};
    std::map<std::string, double> constants;
};

class Expr {
public:
    Expr() = default;
    Expr(NodePtr root, std::vector<std::string> variables)
        : root_(std::move(root)), variables_(std::move(variables)) {}

    const Node& root() const { return *root_; }
    const std::vector<std::string>& variables() const noexcept { return variables_; }
    bool empty() const noexcept { return root_ == nullptr; }

    /// Evaluate with one value per declared variable.
    template <class T>
    T eval(std::span<const T> vars) const;

    double operator()(double t) const { return eval<double>(std::span<const double>(&t, 1)); }
    Jet2 operator()(const Jet2& t) const { return eval<Jet2>(std::span<const Jet2>(&t, 1)); }

    /// Fully parenthesized rendering that parses back to the same tree.
    std::string to_string() const;

    friend bool operator==(const Expr& a, const Expr& b) {
        if (!a.root_ || !b.root_) return a.root_ == b.root_;
        return a.variables_ == b.variables_ && structurally_equal(*a.root_, *b.root_);
    }

private:
    NodePtr root_;
    std::vector<std::string> variables_;
};

/// Throws SyntaxError (with byte offset) or UnknownIdentifierError.
Expr parse(std::string_view src, const ParseOptions& options = {});

/// Convenience: parse with variable `t` and the given constants.
Expr parse_t(std::string_view src, const std::map<std::string, double>& constants = {});

double eval_expr(const Expr& e, double t);
Jet2 eval_expr(const Expr& e, const Jet2& t);

extern template double Expr::eval<double>(std::span<const double>) const;
extern template Jet2 Expr::eval<Jet2>(std::span<const Jet2>) const;

}  // namespace finsler::expr
