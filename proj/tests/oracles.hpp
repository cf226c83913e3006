#pragma once

// Reference computations written independently of the library: plain loops,
// 128-bit fractions and brute-force scans. Tests compare the library against these.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

struct Frac {
    __int128 n = 0;
    __int128 d = 1;
    bool inf = false;

    Frac() = default;
    Frac(long long v) : n(v) {}
    Frac(long long a, long long b) : n(a), d(b) { norm(); }
    static Frac infinity() {
        Frac f;
        f.inf = true;
        return f;
    }

    void norm() {
        if (d == 0) throw std::domain_error("zero denominator");
        if (d < 0) n = -n, d = -d;
        __int128 a = n < 0 ? -n : n, b = d;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) n /= a, d /= a;
    }

    friend Frac operator+(Frac a, Frac b) {
        if (a.inf || b.inf) return infinity();
        Frac r;
        r.n = a.n * b.d + b.n * a.d;
        r.d = a.d * b.d;
        r.norm();
        return r;
    }
    friend Frac operator-(Frac a, Frac b) {
        if (b.inf) throw std::domain_error("inf subtraction");
        if (a.inf) return a;
        Frac r;
        r.n = a.n * b.d - b.n * a.d;
        r.d = a.d * b.d;
        r.norm();
        return r;
    }
    friend Frac operator*(Frac a, Frac b) {
        if (a.inf || b.inf) return infinity();
        Frac r;
        r.n = a.n * b.n;
        r.d = a.d * b.d;
        r.norm();
        return r;
    }
    friend Frac operator/(Frac a, Frac b) {
        if (b.inf) return Frac(0);
        if (a.inf) return a;
        Frac r;
        r.n = a.n * b.d;
        r.d = a.d * b.n;
        r.norm();
        return r;
    }
    friend bool operator==(Frac a, Frac b) { return a.inf == b.inf && (a.inf || (a.n == b.n && a.d == b.d)); }
    friend bool operator<(Frac a, Frac b) {
        if (a.inf) return false;
        if (b.inf) return true;
        return a.n * b.d < b.n * a.d;
    }

    std::string str() const {
        if (inf) return "inf";
        auto s = [](__int128 v) {
            bool neg = v < 0;
            if (neg) v = -v;
            std::string r;
            do r.insert(r.begin(), char('0' + int(v % 10))); while ((v /= 10) != 0);
            return neg ? "-" + r : r;
        };
        return d == 1 ? s(n) : s(n) + "/" + s(d);
    }
};

// t' with 1' = inf, inf' = 1
inline Frac conj(Frac t) {
    if (t.inf) return Frac(1);
    if (t == Frac(1)) return Frac::infinity();
    return t / (t - Frac(1));
}

// Trapezoid cell weights on N equally spaced nodes of [lo, hi].
inline std::vector<double> trapezoid(double lo, double hi, int n) {
    const double h = (hi - lo) / (n - 1);
    std::vector<double> w(n, h);
    w.front() = w.back() = h / 2;
    return w;
}

// ρ(f/λ) + sup over the infinite-exponent nodes of |f|/λ.
inline double scaled_modular(const std::vector<double>& f, const std::vector<double>& p, const std::vector<double>& q,
                             double lambda) {
    double s = 0.0, sup = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = std::abs(f[i]) / lambda;
        if (std::isinf(p[i]))
            sup = std::max(sup, a);
        else if (a > 0.0)
            s += q[i] * std::pow(a, p[i]);
    }
    return s + sup;
}

// Luxemburg norm by nested grid scans of λ: each pass brackets the crossing
// ρ(f/λ) = 1 among 64 equally spaced λ values, then rescans that cell.
inline double luxemburg_scan(const std::vector<double>& f, const std::vector<double>& p,
                             const std::vector<double>& q) {
    double hi = 1.0;
    while (scaled_modular(f, p, q, hi) > 1.0) hi *= 2.0;
    double lo = hi;
    while (scaled_modular(f, p, q, lo) <= 1.0) {
        lo /= 2.0;
        if (lo < 1e-300) return 0.0;
    }
    for (int pass = 0; pass < 40 && hi - lo > 1e-15 * hi; ++pass) {
        const int m = 64;
        double new_lo = lo, new_hi = hi;
        for (int k = 1; k <= m; ++k) {
            const double x = lo + (hi - lo) * k / m;
            if (scaled_modular(f, p, q, x) <= 1.0) {
                new_hi = x;
                new_lo = lo + (hi - lo) * (k - 1) / m;
                break;
            }
        }
        lo = new_lo;
        hi = new_hi;
    }
    return hi;
}

// Uncentered maximal function over every interval [x_i, x_j], i < j, plus the
// node's own value, with trapezoid cell weights. O(N^3).
inline std::vector<double> maximal_all_intervals(const std::vector<double>& f, const std::vector<double>& q) {
    const std::size_t n = f.size();
    std::vector<double> pre(n + 1, 0.0), mass(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        pre[i + 1] = pre[i] + q[i] * std::abs(f[i]);
        mass[i + 1] = mass[i] + q[i];
    }
    std::vector<double> m(n);
    for (std::size_t k = 0; k < n; ++k) m[k] = std::abs(f[k]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = (pre[j + 1] - pre[i]) / (mass[j + 1] - mass[i]);
            for (std::size_t k = i; k <= j; ++k) m[k] = std::max(m[k], avg);
        }
    return m;
}

// Classical A_p quantity (⨍w)(⨍w^{1-p'})^{p-1} on [x_i, x_j], maximised over all intervals.
inline double ap_constant_all_intervals(const std::vector<double>& w, const std::vector<double>& q, double p) {
    const std::size_t n = w.size();
    const double e = 1.0 - p / (p - 1.0);
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double m = 0.0, a = 0.0, b = 0.0;
        for (std::size_t j = i; j < n; ++j) {
            m += q[j];
            a += q[j] * w[j];
            b += q[j] * std::pow(w[j], e);
            if (j > i) best = std::max(best, (a / m) * std::pow(b / m, p - 1.0));
        }
    }
    return best;
}

}  // namespace oracle
