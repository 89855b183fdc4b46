#include "sdelab/schedule.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "sdelab/errors.hpp"

namespace sdelab {

namespace {

class ScheduleParser {
public:
    explicit ScheduleParser(std::string_view text) {
        for (char ch : text)
            if (ch != ' ' && ch != '\t') buf_.push_back(ch);
    }

    ScheduleExpr parse() {
        if (buf_.empty()) fail("empty expression");
        ScheduleExpr out;
        if (consume("sqrt(n)")) {
            out = {1.0, 0.5, 0.0};
            parse_offset(out);
        } else if (peek_power()) {
            out = parse_power(1.0);
            parse_offset(out);
        } else {
            const double lead = parse_number();
            if (at_end()) return ScheduleExpr::constant(lead);
            if (consume("*")) {
                out = parse_power(lead);
                parse_offset(out);
            } else if (consume("-")) {
                // lead - c/n^p
                const double num = parse_number();
                if (!consume("/")) fail("expected '/' in 'a - b/n^p'");
                ScheduleExpr tail = parse_power(1.0);
                out = {-num, -tail.p, lead};
            } else {
                fail("unexpected trailing text");
            }
        }
        if (!at_end()) fail("unexpected trailing text");
        return out;
    }

private:
    bool at_end() const { return pos_ >= buf_.size(); }

    bool consume(std::string_view token) {
        if (std::string_view(buf_).substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    bool peek_power() const {
        std::size_t i = pos_;
        if (i < buf_.size() && (buf_[i] == '-' || buf_[i] == '+')) ++i;
        return i < buf_.size() && buf_[i] == 'n';
    }

    // [sign] n ^ exponent, scaled by `scale`.
    ScheduleExpr parse_power(double scale) {
        if (consume("-")) scale = -scale;
        else consume("+");
        if (!consume("n")) fail("expected 'n'");
        if (!consume("^")) return {scale, 1.0, 0.0};
        double exponent = 0.0;
        if (consume("(")) {
            exponent = parse_number();
            if (!consume(")")) fail("expected ')'");
        } else {
            exponent = parse_number();
        }
        return {scale, exponent, 0.0};
    }

    void parse_offset(ScheduleExpr& out) {
        if (at_end()) return;
        if (consume("+")) out.d = parse_number();
        else if (consume("-")) out.d = -parse_number();
        else fail("expected '+' or '-'");
    }

    double parse_literal() {
        const char* first = buf_.data() + pos_;
        const char* last = buf_.data() + buf_.size();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{}) fail("expected a number");
        pos_ += static_cast<std::size_t>(ptr - first);
        return value;
    }

    // literal or literal/literal; a '/' followed by 'n' is left for the caller.
    double parse_number() {
        bool negative = false;
        if (consume("+")) {
        } else if (consume("-")) {
            negative = true;
        }
        double value = parse_literal();
        if (pos_ + 1 < buf_.size() && buf_[pos_] == '/' && buf_[pos_ + 1] != 'n') {
            ++pos_;
            const double den = parse_literal();
            if (den == 0.0) fail("zero denominator");
            value /= den;
        }
        return negative ? -value : value;
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw InvalidArgument("schedule expression '" + buf_ + "': " + why);
    }

    std::string buf_;
    std::size_t pos_ = 0;
};

}  // namespace

ScheduleExpr ScheduleExpr::parse(std::string_view text) {
    ScheduleExpr expr = ScheduleParser(text).parse();
    if (expr.is_constant()) expr = constant(expr(1));
    return expr;
}

double ScheduleExpr::operator()(std::uint64_t n) const {
    if (c == 0.0) return d;
    if (p == 0.0) return c + d;
    const auto x = static_cast<double>(n);
    double power = 0.0;
    if (p == 0.5) power = std::sqrt(x);
    else if (p == 1.0) power = x;
    else if (p == -1.0) power = 1.0 / x;
    else if (p == -2.0) power = 1.0 / (x * x);
    else power = std::pow(x, p);
    return c * power + d;
}

double ScheduleExpr::limit() const noexcept {
    if (c == 0.0) return d;
    if (p == 0.0) return c + d;
    if (p < 0.0) return d;
    return c > 0.0 ? std::numeric_limits<double>::infinity()
                   : -std::numeric_limits<double>::infinity();
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

std::string ScheduleExpr::to_string() const {
    if (is_constant()) return format_double((*this)(1));
    std::string out = format_double(c) + "*n^" + format_double(p);
    if (d != 0.0) out += " + " + format_double(d);
    return out;
}

}  // namespace sdelab
