#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "priorlab/errors.hpp"

namespace priorlab::dsl {

struct SyntaxError : Error {
    SyntaxError(std::size_t at, std::string expected_set)
        : Error("syntax error at offset " + std::to_string(at) + ": expected " + expected_set),
          offset(at),
          expected(std::move(expected_set)) {}
    std::size_t offset;
    std::string expected;
};
struct UnknownFunctionError : Error {
    UnknownFunctionError(std::size_t at, const std::string& name)
        : Error("unknown function '" + name + "' at offset " + std::to_string(at)), offset(at) {}
    std::size_t offset;
};
struct ArityMismatchError : Error {
    ArityMismatchError(const std::string& name, int want, int got)
        : Error("function '" + name + "' expects " + std::to_string(want) + " argument(s), got " +
                std::to_string(got)) {}
};
struct UnboundVariableError : Error {
    explicit UnboundVariableError(const std::string& n)
        : Error("unbound variable '" + n + "'"), name(n) {}
    std::string name;
};
struct DomainError : Error {
    DomainError(const std::string& fn, double arg)
        : Error("domain error: " + fn + "(" + std::to_string(arg) + ")") {}
};

using Binding = std::map<std::string, double>;

enum class NodeKind { Literal, Variable, Constant, Unary, Binary, Call };
enum class BinOp { Add, Sub, Mul, Div, Pow, Lt, Le, Gt, Ge };
enum class Fn { Exp, Log, Sqrt, Abs, GammaFn, Factorial, Indicator };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind;
    double literal = 0.0;          // Literal
    std::string name;              // Variable / Constant
    BinOp op = BinOp::Add;         // Binary
    Fn fn = Fn::Exp;               // Call
    std::vector<NodePtr> children; // Unary: 1, Binary: 2, Call: arity
};

using DensityExpr = NodePtr;

namespace detail {

inline NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

struct FnInfo {
    Fn fn;
    int arity;
};

inline const std::map<std::string, FnInfo>& fn_table() {
    static const std::map<std::string, FnInfo> t = {
        {"exp", {Fn::Exp, 1}},           {"log", {Fn::Log, 1}},
        {"sqrt", {Fn::Sqrt, 1}},         {"abs", {Fn::Abs, 1}},
        {"gamma_fn", {Fn::GammaFn, 1}},  {"factorial", {Fn::Factorial, 1}},
        {"indicator", {Fn::Indicator, 1}}};
    return t;
}

inline const char* fn_name(Fn f) {
    switch (f) {
        case Fn::Exp: return "exp";
        case Fn::Log: return "log";
        case Fn::Sqrt: return "sqrt";
        case Fn::Abs: return "abs";
        case Fn::GammaFn: return "gamma_fn";
        case Fn::Factorial: return "factorial";
        default: return "indicator";
    }
}

// tokenizer
enum class Tok { Num, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma,
                 Lt, Le, Gt, Ge, End };

struct Token {
    Tok kind;
    std::size_t offset;
    double num = 0.0;
    std::string text;
};

inline std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        const std::size_t at = i;
        if ((c >= '0' && c <= '9') || c == '.') {
            std::size_t used = 0;
            double v;
            try {
                v = std::stod(src.substr(i), &used);
            } catch (const std::exception&) {
                throw SyntaxError(at, "number");
            }
            out.push_back({Tok::Num, at, v, src.substr(i, used)});
            i += used;
            continue;
        }
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   ((src[j] >= 'a' && src[j] <= 'z') || (src[j] >= 'A' && src[j] <= 'Z') ||
                    (src[j] >= '0' && src[j] <= '9') || src[j] == '_'))
                ++j;
            out.push_back({Tok::Name, at, 0.0, src.substr(i, j - i)});
            i = j;
            continue;
        }
        auto two = [&](char next) { return i + 1 < src.size() && src[i + 1] == next; };
        switch (c) {
            case '+': out.push_back({Tok::Plus, at}); ++i; break;
            case '-': out.push_back({Tok::Minus, at}); ++i; break;
            case '*': out.push_back({Tok::Star, at}); ++i; break;
            case '/': out.push_back({Tok::Slash, at}); ++i; break;
            case '^': out.push_back({Tok::Caret, at}); ++i; break;
            case '(': out.push_back({Tok::LParen, at}); ++i; break;
            case ')': out.push_back({Tok::RParen, at}); ++i; break;
            case ',': out.push_back({Tok::Comma, at}); ++i; break;
            case '<':
                if (two('=')) { out.push_back({Tok::Le, at}); i += 2; }
                else { out.push_back({Tok::Lt, at}); ++i; }
                break;
            case '>':
                if (two('=')) { out.push_back({Tok::Ge, at}); i += 2; }
                else { out.push_back({Tok::Gt, at}); ++i; }
                break;
            default: throw SyntaxError(at, "a token ('" + std::string(1, c) + "' is not valid)");
        }
    }
    out.push_back({Tok::End, src.size()});
    return out;
}

// recursive descent: comparison < additive < term < unary-minus < power
class Parser {
  public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    NodePtr run() {
        NodePtr e = comparison();
        expect(Tok::End, "end of input");
        return e;
    }

  private:
    const Token& cur() const { return toks_[pos_]; }
    bool accept(Tok k) {
        if (cur().kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(Tok k, const char* what) {
        if (!accept(k)) throw SyntaxError(cur().offset, what);
    }

    NodePtr comparison() {
        NodePtr lhs = additive();
        for (;;) {
            BinOp op;
            if (accept(Tok::Lt)) op = BinOp::Lt;
            else if (accept(Tok::Le)) op = BinOp::Le;
            else if (accept(Tok::Gt)) op = BinOp::Gt;
            else if (accept(Tok::Ge)) op = BinOp::Ge;
            else return lhs;
            NodePtr rhs = additive();
            lhs = make({NodeKind::Binary, 0.0, "", op, Fn::Exp, {lhs, rhs}});
        }
    }
    NodePtr additive() {
        NodePtr lhs = term();
        for (;;) {
            BinOp op;
            if (accept(Tok::Plus)) op = BinOp::Add;
            else if (accept(Tok::Minus)) op = BinOp::Sub;
            else return lhs;
            NodePtr rhs = term();
            lhs = make({NodeKind::Binary, 0.0, "", op, Fn::Exp, {lhs, rhs}});
        }
    }
    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            BinOp op;
            if (accept(Tok::Star)) op = BinOp::Mul;
            else if (accept(Tok::Slash)) op = BinOp::Div;
            else return lhs;
            NodePtr rhs = unary();
            lhs = make({NodeKind::Binary, 0.0, "", op, Fn::Exp, {lhs, rhs}});
        }
    }
    NodePtr unary() {
        if (accept(Tok::Minus)) {
            NodePtr arg = unary();
            return make({NodeKind::Unary, 0.0, "", BinOp::Sub, Fn::Exp, {arg}});
        }
        return power();
    }
    NodePtr power() {
        NodePtr base = atom();
        if (accept(Tok::Caret)) {
            NodePtr exp = unary();  // right-assoc, exponent may carry unary minus
            return make({NodeKind::Binary, 0.0, "", BinOp::Pow, Fn::Exp, {base, exp}});
        }
        return base;
    }
    NodePtr atom() {
        const Token t = cur();
        if (accept(Tok::Num)) return make({NodeKind::Literal, t.num});
        if (accept(Tok::Name)) {
            if (cur().kind == Tok::LParen) {
                auto it = fn_table().find(t.text);
                if (it == fn_table().end()) throw UnknownFunctionError(t.offset, t.text);
                ++pos_;  // consume '('
                std::vector<NodePtr> args;
                if (cur().kind != Tok::RParen) {
                    args.push_back(comparison());
                    while (accept(Tok::Comma)) args.push_back(comparison());
                }
                expect(Tok::RParen, "')'");
                if (int(args.size()) != it->second.arity)
                    throw ArityMismatchError(t.text, it->second.arity, int(args.size()));
                return make({NodeKind::Call, 0.0, "", BinOp::Add, it->second.fn,
                             std::move(args)});
            }
            if (t.text == "pi" || t.text == "e")
                return make({NodeKind::Constant, 0.0, t.text});
            return make({NodeKind::Variable, 0.0, t.text});
        }
        if (accept(Tok::LParen)) {
            NodePtr e = comparison();
            expect(Tok::RParen, "')'");
            return e;
        }
        throw SyntaxError(t.offset, "a number, name, or '('");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline DensityExpr parse(const std::string& source) {
    return detail::Parser(detail::lex(source)).run();
}

inline double evaluate(const DensityExpr& expr, const Binding& b) {
    switch (expr->kind) {
        case NodeKind::Literal:
            return expr->literal;
        case NodeKind::Constant:
            return expr->name == "pi" ? 3.14159265358979323846 : 2.71828182845904523536;
        case NodeKind::Variable: {
            auto it = b.find(expr->name);
            if (it == b.end()) throw UnboundVariableError(expr->name);
            return it->second;
        }
        case NodeKind::Unary:
            return -evaluate(expr->children[0], b);
        case NodeKind::Binary: {
            const double l = evaluate(expr->children[0], b);
            const double r = evaluate(expr->children[1], b);
            switch (expr->op) {
                case BinOp::Add: return l + r;
                case BinOp::Sub: return l - r;
                case BinOp::Mul: return l * r;
                case BinOp::Div: return l / r;
                case BinOp::Pow: {
                    const double v = std::pow(l, r);
                    if (std::isnan(v) && !std::isnan(l) && !std::isnan(r))
                        throw DomainError("pow", l);
                    return v;
                }
                case BinOp::Lt: return l < r ? 1.0 : 0.0;
                case BinOp::Le: return l <= r ? 1.0 : 0.0;
                case BinOp::Gt: return l > r ? 1.0 : 0.0;
                default: return l >= r ? 1.0 : 0.0;
            }
        }
        default: {  // Call
            const double a = evaluate(expr->children[0], b);
            switch (expr->fn) {
                case Fn::Exp: return std::exp(a);
                case Fn::Log:
                    if (!(a > 0.0)) throw DomainError("log", a);
                    return std::log(a);
                case Fn::Sqrt:
                    if (a < 0.0) throw DomainError("sqrt", a);
                    return std::sqrt(a);
                case Fn::Abs: return std::abs(a);
                case Fn::GammaFn:
                    if (a <= 0.0 && a == std::floor(a)) throw DomainError("gamma_fn", a);
                    return std::tgamma(a);
                case Fn::Factorial: {
                    const double k = std::round(a);
                    if (k < 0.0 || std::abs(a - k) > 1e-9) throw DomainError("factorial", a);
                    return std::tgamma(k + 1.0);
                }
                default:  // Indicator: nonzero condition value means on
                    return a != 0.0 ? 1.0 : 0.0;
            }
        }
    }
}

inline void collect_free(const DensityExpr& e, std::set<std::string>& out) {
    if (e->kind == NodeKind::Variable) out.insert(e->name);
    for (const auto& c : e->children) collect_free(c, out);
}

inline std::set<std::string> free_variables(const DensityExpr& e) {
    std::set<std::string> out;
    collect_free(e, out);
    return out;
}

namespace detail {

inline int precedence(const Node& n) {
    if (n.kind == NodeKind::Binary) {
        switch (n.op) {
            case BinOp::Lt: case BinOp::Le: case BinOp::Gt: case BinOp::Ge: return 1;
            case BinOp::Add: case BinOp::Sub: return 2;
            case BinOp::Mul: case BinOp::Div: return 3;
            case BinOp::Pow: return 5;
        }
    }
    if (n.kind == NodeKind::Unary) return 4;
    return 6;  // atoms
}

inline const char* op_text(BinOp op) {
    switch (op) {
        case BinOp::Add: return " + ";
        case BinOp::Sub: return " - ";
        case BinOp::Mul: return "*";
        case BinOp::Div: return "/";
        case BinOp::Pow: return "^";
        case BinOp::Lt: return " < ";
        case BinOp::Le: return " <= ";
        case BinOp::Gt: return " > ";
        default: return " >= ";
    }
}

inline void print(const Node& n, std::ostringstream& os, int parent_prec, bool right_side) {
    const int prec = precedence(n);
    // '^' is right-associative; everything else associates left
    const bool needs_paren =
        prec < parent_prec ||
        (prec == parent_prec && (right_side ? parent_prec != 5 : parent_prec == 5));
    if (needs_paren) os << '(';
    switch (n.kind) {
        case NodeKind::Literal: {
            std::ostringstream tmp;
            tmp.precision(17);
            tmp << n.literal;
            os << tmp.str();
            break;
        }
        case NodeKind::Variable:
        case NodeKind::Constant:
            os << n.name;
            break;
        case NodeKind::Unary:
            os << '-';
            print(*n.children[0], os, precedence(n) + 1, false);
            break;
        case NodeKind::Binary:
            print(*n.children[0], os, prec, false);
            os << op_text(n.op);
            print(*n.children[1], os, prec, true);
            break;
        case NodeKind::Call:
            os << fn_name(n.fn) << '(';
            for (std::size_t i = 0; i < n.children.size(); ++i) {
                if (i) os << ", ";
                print(*n.children[i], os, 0, false);
            }
            os << ')';
            break;
    }
    if (needs_paren) os << ')';
}

}  // namespace detail

inline std::string pretty_print(const DensityExpr& e) {
    std::ostringstream os;
    detail::print(*e, os, 0, false);
    return os.str();
}

}  // namespace priorlab::dsl
