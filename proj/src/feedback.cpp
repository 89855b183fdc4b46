#include "sdelab/feedback.hpp"

#include <string>

#include "sdelab/errors.hpp"

namespace sdelab {

std::string_view to_string(FeedbackKind kind) {
    switch (kind) {
        case FeedbackKind::MinAbsOne: return "min_abs_one";
        case FeedbackKind::Rational: return "rational";
        case FeedbackKind::SquareRational: return "square_rational";
        case FeedbackKind::One: return "one";
    }
    return "?";
}

FeedbackKind feedback_kind_from_string(std::string_view name) {
    if (name == "min_abs_one") return FeedbackKind::MinAbsOne;
    if (name == "rational") return FeedbackKind::Rational;
    if (name == "square_rational") return FeedbackKind::SquareRational;
    if (name == "one") return FeedbackKind::One;
    throw InvalidArgument("unknown feedback function '" + std::string(name) +
                          "' (expected min_abs_one, rational, square_rational or one)");
}

}  // namespace sdelab
