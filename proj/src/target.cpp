#include "rieszflow/target.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "rieszflow/error.hpp"

namespace rieszflow {

struct TargetFn::Node {
    enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call } op = Op::Const;
    double value = 0.0;
    double (*fn)(double) = nullptr;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;

    [[nodiscard]] double eval(double x) const {
        switch (op) {
            case Op::Const: return value;
            case Op::Var: return x;
            case Op::Neg: return -lhs->eval(x);
            case Op::Add: return lhs->eval(x) + rhs->eval(x);
            case Op::Sub: return lhs->eval(x) - rhs->eval(x);
            case Op::Mul: return lhs->eval(x) * rhs->eval(x);
            case Op::Div: return lhs->eval(x) / rhs->eval(x);
            case Op::Pow: return std::pow(lhs->eval(x), rhs->eval(x));
            case Op::Call: return fn(lhs->eval(x));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const TargetFn::Node>;
using Op = TargetFn::Node::Op;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<TargetFn::Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

NodePtr constant(double v) {
    auto n = std::make_shared<TargetFn::Node>();
    n->value = v;
    return n;
}

struct FunctionEntry {
    const char* name;
    double (*fn)(double);
};

const std::vector<FunctionEntry>& functions() {
    static const std::vector<FunctionEntry> table = {
        {"sin", [](double v) { return std::sin(v); }},   {"cos", [](double v) { return std::cos(v); }},
        {"tan", [](double v) { return std::tan(v); }},   {"exp", [](double v) { return std::exp(v); }},
        {"log", [](double v) { return std::log(v); }},   {"sqrt", [](double v) { return std::sqrt(v); }},
        {"abs", [](double v) { return std::abs(v); }},   {"tanh", [](double v) { return std::tanh(v); }},
    };
    return table;
}

// expr   := term (('+' | '-') term)*
// term   := unary (('*' | '/') unary)*
// unary  := '-' unary | power
// power  := atom ('^' unary)?
// atom   := number | 'x' | 'pi' | 'e' | name '(' expr ')' | '(' expr ')'
class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    NodePtr parse() {
        NodePtr n = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("expression \"" + s_ + "\" at offset " + std::to_string(pos_) + ": " + what);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr n = term();
        for (;;) {
            if (accept('+')) {
                n = make(Op::Add, n, term());
            } else if (accept('-')) {
                n = make(Op::Sub, n, term());
            } else {
                return n;
            }
        }
    }

    NodePtr term() {
        NodePtr n = unary();
        for (;;) {
            if (accept('*')) {
                n = make(Op::Mul, n, unary());
            } else if (accept('/')) {
                n = make(Op::Div, n, unary());
            } else {
                return n;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Op::Neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept('^')) return make(Op::Pow, base, unary());
        return base;
    }

    NodePtr atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (accept('(')) {
            NodePtr n = expr();
            if (!accept(')')) fail("expected ')'");
            return n;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            return constant(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            if (name == "x") return make(Op::Var);
            if (name == "pi") return constant(std::numbers::pi);
            if (name == "e") return constant(std::numbers::e);
            for (const auto& f : functions()) {
                if (name == f.name) {
                    if (!accept('(')) fail("expected '(' after " + name);
                    auto n = std::make_shared<TargetFn::Node>();
                    n->op = Op::Call;
                    n->fn = f.fn;
                    n->lhs = expr();
                    if (!accept(')')) fail("expected ')'");
                    return n;
                }
            }
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string s_;
    std::size_t pos_ = 0;
};

}  // namespace

TargetFn TargetFn::shifted_gaussian(double center) {
    TargetFn f;
    f.kind_ = TargetKind::ShiftedGaussian;
    f.center_ = center;
    f.description_ = "shifted-gaussian:" + std::to_string(center);
    return f;
}

TargetFn TargetFn::sin_abs_gaussian() {
    TargetFn f;
    f.kind_ = TargetKind::SinAbsGaussian;
    f.description_ = "sin-abs-gaussian";
    return f;
}

TargetFn TargetFn::expression(const std::string& text) {
    TargetFn f;
    f.kind_ = TargetKind::Custom;
    f.expr_ = Parser(text).parse();
    f.description_ = "expr:" + text;
    return f;
}

TargetFn TargetFn::parse(const std::string& spec) {
    constexpr std::string_view kGauss = "shifted-gaussian:";
    constexpr std::string_view kExpr = "expr:";
    if (spec == "sin-abs-gaussian") return sin_abs_gaussian();
    if (spec.starts_with(kGauss)) {
        const std::string num = spec.substr(kGauss.size());
        char* end = nullptr;
        const double a = std::strtod(num.c_str(), &end);
        if (num.empty() || end != num.c_str() + num.size() || !std::isfinite(a)) {
            throw ParseError("bad shifted-gaussian center '" + num + "'");
        }
        return shifted_gaussian(a);
    }
    if (spec.starts_with(kExpr)) return expression(spec.substr(kExpr.size()));
    throw ParseError("unknown target '" + spec + "' (expected shifted-gaussian:A, sin-abs-gaussian or expr:STRING)");
}

double TargetFn::operator()(double x) const {
    switch (kind_) {
        case TargetKind::ShiftedGaussian: {
            const double d = x - center_;
            return std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * d * d);
        }
        case TargetKind::SinAbsGaussian:
            return std::sin(2.0 * std::abs(x)) * std::exp(-0.5 * x * x);
        case TargetKind::Custom:
            return expr_->eval(x);
    }
    return 0.0;
}

}  // namespace rieszflow
