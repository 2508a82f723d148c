#include "dhym/expression.hpp"

#include "dhym/errors.hpp"
#include "dhym/tolerances.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

namespace dhym {

struct Expression::Node {
    enum Kind { number, variable, negate, add, sub, mul, div, pow, call } kind;
    double value = 0.0;
    int index = 0;
    double (*fn)(double) = nullptr;
    std::vector<std::shared_ptr<const Node>> args;

    double eval(const std::array<double, 3>& x) const {
        switch (kind) {
            case number: return value;
            case variable: return x[index];
            case negate: return -args[0]->eval(x);
            case add: return args[0]->eval(x) + args[1]->eval(x);
            case sub: return args[0]->eval(x) - args[1]->eval(x);
            case mul: return args[0]->eval(x) * args[1]->eval(x);
            case div: return args[0]->eval(x) / args[1]->eval(x);
            case pow: return std::pow(args[0]->eval(x), args[1]->eval(x));
            case call: return fn(args[0]->eval(x));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make(Node::Kind k, std::vector<NodePtr> args) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->args = std::move(args);
    return n;
}

struct Function {
    const char* name;
    double (*fn)(double);
};

const Function kFunctions[] = {
    {"sin", [](double v) { return std::sin(v); }},   {"cos", [](double v) { return std::cos(v); }},
    {"tan", [](double v) { return std::tan(v); }},   {"atan", [](double v) { return std::atan(v); }},
    {"exp", [](double v) { return std::exp(v); }},   {"log", [](double v) { return std::log(v); }},
    {"sqrt", [](double v) { return std::sqrt(v); }}, {"abs", [](double v) { return std::abs(v); }},
    {"sinh", [](double v) { return std::sinh(v); }}, {"cosh", [](double v) { return std::cosh(v); }},
    {"tanh", [](double v) { return std::tanh(v); }},
};

// expr   := term (('+'|'-') term)*
// term   := unary (('*'|'/') unary)*
// unary  := ('-'|'+') unary | power
// power  := atom ('^' unary)?
class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream msg;
        msg << "expression '" << s_ << "': " << what << " at position " << pos_;
        throw InputError(msg.str());
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
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make(Node::add, {lhs, term()});
            else if (accept('-')) lhs = make(Node::sub, {lhs, term()});
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make(Node::mul, {lhs, unary()});
            else if (accept('/')) lhs = make(Node::div, {lhs, unary()});
            else return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Node::negate, {unary()});
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept('^')) return make(Node::pow, {base, unary()});
        return base;
    }

    NodePtr atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (accept('(')) {
            NodePtr e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            auto n = std::make_shared<Node>();
            n->kind = Node::number;
            n->value = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            auto n = std::make_shared<Node>();
            if (name == "pi") {
                n->kind = Node::number;
                n->value = kPi;
                return n;
            }
            const std::pair<const char*, int> vars[] = {{"x1", 0}, {"x2", 1}, {"x3", 2},
                                                        {"x", 0},  {"y", 1},  {"z", 2}};
            for (const auto& [v, idx] : vars) {
                if (name == v) {
                    n->kind = Node::variable;
                    n->index = idx;
                    return n;
                }
            }
            for (const auto& f : kFunctions) {
                if (name == f.name) {
                    if (!accept('(')) fail("expected '(' after " + name);
                    NodePtr arg = expr();
                    if (!accept(')')) fail("expected ')'");
                    n->kind = Node::call;
                    n->fn = f.fn;
                    n->args = {arg};
                    return n;
                }
            }
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }
        fail("unexpected character");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
    Expression e;
    e.text_ = text;
    e.root_ = Parser(e.text_).parse();
    return e;
}

double Expression::operator()(const std::array<double, 3>& x) const { return root_->eval(x); }

}  // namespace dhym
