#pragma once

// Tiny arithmetic expression language for phase targets and potentials on
// the torus. Variables x1, x2, x3 (aliases x, y, z), constant pi, functions
// sin cos tan atan exp log sqrt abs sinh cosh tanh, operators + - * / ^.

#include <array>
#include <memory>
#include <string>

namespace dhym {

class Expression {
public:
    /// Throws InputError with the offending position on a parse error.
    static Expression parse(const std::string& text);

    double operator()(const std::array<double, 3>& x) const;
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

}  // namespace dhym
