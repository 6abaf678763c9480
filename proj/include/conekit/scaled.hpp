#pragma once

#include <cmath>

namespace conekit {

// mantissa * 2^exponent, used where Bessel values leave double range.
struct Scaled {
    double mantissa = 0.0;
    long exponent = 0;

    static Scaled of(double v) {
        Scaled s{v, 0};
        s.normalize();
        return s;
    }

    void normalize() {
        if (mantissa == 0.0 || !std::isfinite(mantissa)) return;
        int e = 0;
        mantissa = std::frexp(mantissa, &e);
        exponent += e;
    }

    double to_double() const {
        if (exponent > 2000) return mantissa > 0 ? HUGE_VAL : -HUGE_VAL;
        if (exponent < -2000) return 0.0 * mantissa;
        return std::ldexp(mantissa, static_cast<int>(exponent));
    }

    // natural log of |value|
    double log_abs() const { return std::log(std::fabs(mantissa)) + exponent * 0.69314718055994530942; }

    friend Scaled operator*(Scaled a, Scaled b) {
        Scaled r{a.mantissa * b.mantissa, a.exponent + b.exponent};
        r.normalize();
        return r;
    }
    friend Scaled operator/(Scaled a, Scaled b) {
        Scaled r{a.mantissa / b.mantissa, a.exponent - b.exponent};
        r.normalize();
        return r;
    }
    friend Scaled operator*(Scaled a, double b) { return a * Scaled::of(b); }
};

// e^x without overflow for large |x|
inline Scaled scaled_exp(double x) {
    if (std::fabs(x) < 600.0) return Scaled::of(std::exp(x));
    // Cody-Waite split of ln 2; k * ln2_hi is exact for |k| < 2^21
    const double ln2_hi = 6.93147180369123816490e-01;
    const double ln2_lo = 1.90821492927058770002e-10;
    double k = std::floor(x / 0.69314718055994530942);
    Scaled s{std::exp((x - k * ln2_hi) - k * ln2_lo), static_cast<long>(k)};
    s.normalize();
    return s;
}

}  // namespace conekit
