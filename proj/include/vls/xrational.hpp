#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <stdexcept>
#include <string>

namespace vls {

class RationalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An exact rational, or +inf. Arithmetic involving inf follows the usual
// extended-real rules; the indeterminate forms throw.
class XRational {
public:
    using Value = boost::multiprecision::cpp_rational;

    XRational() = default;
    XRational(long long v) : value_(v) {}  // NOLINT: integers convert implicitly
    XRational(long long num, long long den);
    explicit XRational(Value v) : value_(std::move(v)) {}

    static XRational infinity();
    // "6/5", "-3", "1.25", "inf", "∞"
    static XRational parse(const std::string& text);

    bool is_infinite() const { return inf_; }
    bool is_finite() const { return !inf_; }
    const Value& value() const;
    std::string numerator() const;
    std::string denominator() const;
    double to_double() const;
    std::string str() const;

    friend XRational operator+(const XRational& a, const XRational& b);
    friend XRational operator-(const XRational& a, const XRational& b);
    friend XRational operator*(const XRational& a, const XRational& b);
    friend XRational operator/(const XRational& a, const XRational& b);
    XRational operator-() const;

    friend bool operator==(const XRational& a, const XRational& b);
    friend std::strong_ordering operator<=>(const XRational& a, const XRational& b);

private:
    Value value_{0};
    bool inf_ = false;
};

// t' = t/(t-1) with 1' = inf and inf' = 1; defined for t >= 1.
XRational conj(const XRational& t);
XRational min(const XRational& a, const XRational& b);
XRational max(const XRational& a, const XRational& b);
XRational midpoint(const XRational& a, const XRational& b);

std::ostream& operator<<(std::ostream& os, const XRational& x);

}  // namespace vls
