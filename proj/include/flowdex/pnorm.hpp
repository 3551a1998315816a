#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <string>
#include <string_view>

#include "flowdex/errors.hpp"

namespace flowdex {

/// Shortest round-trippable decimal for a double (17 significant digits).
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// p in [1, inf]. Infinity is a distinct state, not a large exponent.
class PNorm {
public:
    explicit PNorm(double p) {
        if (std::isnan(p) || p < 1.0) throw InvalidArgument("p must lie in [1, inf]");
        if (std::isinf(p)) {
            infinite_ = true;
            p_ = std::numeric_limits<double>::infinity();
        } else {
            p_ = p;
        }
    }

    static PNorm infinity() { return PNorm(std::numeric_limits<double>::infinity()); }

    /// "inf" / "infinity" or a decimal >= 1.
    static PNorm parse(std::string_view s) {
        if (s == "inf" || s == "infinity" || s == "Inf") return infinity();
        std::string str(s);
        char* end = nullptr;
        double v = std::strtod(str.c_str(), &end);
        if (str.empty() || end != str.c_str() + str.size()) throw InvalidArgument("bad p value \"" + str + "\"");
        return PNorm(v);
    }

    bool is_infinite() const noexcept { return infinite_; }
    double p() const noexcept { return p_; }
    /// 1/p, with 1/inf = 0.
    double reciprocal() const noexcept { return infinite_ ? 0.0 : 1.0 / p_; }

    double operator()(std::span<const double> x) const {
        double mx = 0.0;
        for (double v : x) mx = std::max(mx, std::abs(v));
        if (infinite_ || mx == 0.0) return mx;
        if (p_ == 1.0) {
            double s = 0.0;
            for (double v : x) s += std::abs(v);
            return s;
        }
        if (p_ == 2.0) {
            double s = 0.0;
            for (double v : x) s += v * v;
            return std::sqrt(s);
        }
        // scaled to avoid overflow for large p
        double s = 0.0;
        for (double v : x) s += std::pow(std::abs(v) / mx, p_);
        return mx * std::pow(s, 1.0 / p_);
    }

    std::string to_string() const { return infinite_ ? "inf" : format_double(p_); }

    friend bool operator==(const PNorm& a, const PNorm& b) { return a.infinite_ == b.infinite_ && (a.infinite_ || a.p_ == b.p_); }

private:
    double p_ = 2.0;
    bool infinite_ = false;
};

inline double pnorm(std::span<const double> x, const PNorm& p) { return p(x); }

}  // namespace flowdex
