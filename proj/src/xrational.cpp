#include "vls/xrational.hpp"

#include <cctype>
#include <ostream>

namespace vls {

using boost::multiprecision::cpp_int;

XRational::XRational(long long num, long long den) {
    if (den == 0) throw RationalError("zero denominator");
    value_ = Value(num, den);
}

XRational XRational::infinity() {
    XRational x;
    x.inf_ = true;
    return x;
}

XRational XRational::parse(const std::string& raw) {
    std::string t;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.empty()) throw RationalError("empty rational");
    if (t == "inf" || t == "+inf" || t == "infinity" || t == "\xE2\x88\x9E") return infinity();
    auto parse_int = [&](const std::string& s) {
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) throw RationalError("malformed rational '" + raw + "'");
        for (std::size_t k = i; k < s.size(); ++k)
            if (!std::isdigit(static_cast<unsigned char>(s[k]))) throw RationalError("malformed rational '" + raw + "'");
        // cpp_int reads a leading 0 as octal
        std::string digits = s.substr(i);
        digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
        return s[0] == '-' ? cpp_int(-cpp_int(digits)) : cpp_int(digits);
    };
    if (auto slash = t.find('/'); slash != std::string::npos) {
        const cpp_int num = parse_int(t.substr(0, slash));
        const std::string ds = t.substr(slash + 1);
        if (ds.empty() || ds[0] == '-' || ds[0] == '+') throw RationalError("malformed rational '" + raw + "'");
        const cpp_int den = parse_int(ds);
        if (den == 0) throw RationalError("zero denominator");
        return XRational(Value(num, den));
    }
    if (auto dot = t.find('.'); dot != std::string::npos) {
        const std::string whole = t.substr(0, dot);
        const std::string frac = t.substr(dot + 1);
        if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos)
            throw RationalError("malformed rational '" + raw + "'");
        const bool neg = !whole.empty() && whole[0] == '-';
        const std::string digits = (whole.empty() || whole == "-" || whole == "+" ? std::string("0") : whole) + frac;
        cpp_int num = parse_int(digits);
        if (neg && num > 0) num = -num;
        cpp_int den = 1;
        for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
        return XRational(Value(num, den));
    }
    return XRational(Value(parse_int(t)));
}

const XRational::Value& XRational::value() const {
    if (inf_) throw RationalError("infinite value has no rational representation");
    return value_;
}

std::string XRational::numerator() const { return boost::multiprecision::numerator(value()).str(); }
std::string XRational::denominator() const { return boost::multiprecision::denominator(value()).str(); }

double XRational::to_double() const {
    if (inf_) return std::numeric_limits<double>::infinity();
    return value_.convert_to<double>();
}

std::string XRational::str() const {
    if (inf_) return "inf";
    const auto den = boost::multiprecision::denominator(value_);
    if (den == 1) return boost::multiprecision::numerator(value_).str();
    return boost::multiprecision::numerator(value_).str() + "/" + den.str();
}

XRational operator+(const XRational& a, const XRational& b) {
    if (a.inf_ || b.inf_) return XRational::infinity();
    return XRational(XRational::Value(a.value_ + b.value_));
}

XRational operator-(const XRational& a, const XRational& b) {
    if (b.inf_) throw RationalError(a.inf_ ? "inf - inf is undefined" : "negative infinity is not representable");
    if (a.inf_) return XRational::infinity();
    return XRational(XRational::Value(a.value_ - b.value_));
}

XRational operator*(const XRational& a, const XRational& b) {
    if (a.inf_ || b.inf_) {
        const XRational& other = a.inf_ ? b : a;
        if (other.inf_ || other.value_ > 0) return XRational::infinity();
        throw RationalError(other.value_ == 0 ? "0 * inf is undefined" : "negative infinity is not representable");
    }
    return XRational(XRational::Value(a.value_ * b.value_));
}

XRational operator/(const XRational& a, const XRational& b) {
    if (b.inf_) {
        if (a.inf_) throw RationalError("inf / inf is undefined");
        return XRational(0);
    }
    if (b.value_ == 0) throw RationalError("division by zero");
    if (a.inf_) {
        if (b.value_ > 0) return XRational::infinity();
        throw RationalError("negative infinity is not representable");
    }
    return XRational(XRational::Value(a.value_ / b.value_));
}

XRational XRational::operator-() const {
    if (inf_) throw RationalError("negative infinity is not representable");
    return XRational(Value(-value_));
}

bool operator==(const XRational& a, const XRational& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const XRational& a, const XRational& b) {
    if (a.inf_ || b.inf_) {
        if (a.inf_ == b.inf_) return std::strong_ordering::equal;
        return a.inf_ ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

XRational conj(const XRational& t) {
    if (t.is_infinite()) return XRational(1);
    if (t == XRational(1)) return XRational::infinity();
    if (t < XRational(1)) throw RationalError("conjugate exponent requires t >= 1, got " + t.str());
    return t / (t - XRational(1));
}

XRational min(const XRational& a, const XRational& b) { return b < a ? b : a; }
XRational max(const XRational& a, const XRational& b) { return a < b ? b : a; }

XRational midpoint(const XRational& a, const XRational& b) {
    if (a.is_infinite() || b.is_infinite()) throw RationalError("midpoint of an unbounded interval");
    return (a + b) / XRational(2);
}

std::ostream& operator<<(std::ostream& os, const XRational& x) { return os << x.str(); }

}  // namespace vls
