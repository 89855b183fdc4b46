#pragma once

#include <cmath>
#include <string_view>

namespace sdelab {

/// Gain f(u) in [0,1] modulating the noise in the nonlinear recursion.
enum class FeedbackKind {
    MinAbsOne,       ///< min(|u|, 1)
    Rational,        ///< |u| / (1 + |u|)
    SquareRational,  ///< u^2 / (1 + u^2)
    One,             ///< 1 (linear case)
};

struct FeedbackFunction {
    FeedbackKind kind = FeedbackKind::One;

    double operator()(double u) const noexcept {
        const double a = std::abs(u);
        switch (kind) {
            case FeedbackKind::MinAbsOne: return a < 1.0 ? a : 1.0;
            case FeedbackKind::Rational: return a / (1.0 + a);
            case FeedbackKind::SquareRational: return u * u / (1.0 + u * u);
            case FeedbackKind::One: return 1.0;
        }
        return 1.0;
    }

    bool operator==(const FeedbackFunction&) const = default;
};

std::string_view to_string(FeedbackKind kind);
FeedbackKind feedback_kind_from_string(std::string_view name);

}  // namespace sdelab
