#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace sdelab {

/// Index-dependent noise parameter of the form c * n^p + d.
///
/// Parsed from a small whitelist of textual forms:
///   "c", "c*n^p", "c*n^p + d", "sqrt(n)", "1 - 1/n^2"
/// where c, d and p are decimal literals or fractions such as "-1/3".
/// Exponents may be parenthesised: "n^(-1/3)".
struct ScheduleExpr {
    double c = 0.0;
    double p = 0.0;
    double d = 0.0;

    static ScheduleExpr constant(double value) { return {value, 0.0, 0.0}; }
    static ScheduleExpr parse(std::string_view text);

    /// Value at index n >= 1.
    double operator()(std::uint64_t n) const;

    /// True when the value does not depend on n.
    bool is_constant() const noexcept { return p == 0.0 || c == 0.0; }

    /// Limit as n -> infinity (may be +-inf).
    double limit() const noexcept;

    /// Canonical text that parses back to an identical expression.
    std::string to_string() const;

    bool operator==(const ScheduleExpr&) const = default;
};

std::string format_double(double value);

}  // namespace sdelab
