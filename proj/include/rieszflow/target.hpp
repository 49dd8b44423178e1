#pragma once

#include <memory>
#include <string>

namespace rieszflow {

enum class TargetKind { ShiftedGaussian, SinAbsGaussian, Custom };

// A function in L²(ℝ) to approximate.
class TargetFn {
public:
    /// π^{-1/4} e^{-(x-a)²/2}: unit L² norm, equal to γ_0(x − a).
    static TargetFn shifted_gaussian(double center);

    /// sin(2|x|) e^{-x²/2}.
    static TargetFn sin_abs_gaussian();

    /// Expression in x with + - * / ^, parentheses, pi, e, and the functions
    /// sin cos tan exp log sqrt abs tanh. Throws ParseError.
    static TargetFn expression(const std::string& text);

    /// "shifted-gaussian:A", "sin-abs-gaussian" or "expr:STRING".
    static TargetFn parse(const std::string& spec);

    [[nodiscard]] TargetKind kind() const noexcept { return kind_; }
    [[nodiscard]] double center() const noexcept { return center_; }
    [[nodiscard]] const std::string& description() const noexcept { return description_; }

    double operator()(double x) const;

    struct Node;

private:
    TargetFn() = default;

    TargetKind kind_ = TargetKind::SinAbsGaussian;
    double center_ = 0.0;
    std::string description_;
    std::shared_ptr<const Node> expr_;
};

}  // namespace rieszflow
