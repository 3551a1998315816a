#pragma once

// Scalar bound functions for 3-dimensional flows and the numerical checks
// behind the uniform 1 + sqrt(2) bound.
//
//   g1(p) = 5/4 * 2^(1 - 1/p)
//   g2(p) = [ (2^-1/p + 3^-1/p)^p + (2^-1/p - 3^-1/p)^p + 1/3 ]^(1/p)
//   g3(p) = 2^(1/p)

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "flowdex/errors.hpp"
#include "flowdex/pnorm.hpp"
#include "flowdex/report.hpp"

namespace flowdex::analysis {

/// g2 has no elementary closed form at infinity; it is evaluated at this exponent
/// instead. g2(1024) = 1.99825..., about 1.7e-3 below the limit 2.
inline constexpr double kG2InfinityProxy = 1024.0;

/// a(p) = (2^p - 1)^(1/p), a(inf) = 2.
inline double a_of_p(const PNorm& p) {
    if (p.is_infinite()) return 2.0;
    const double q = p.p();
    // (2^p - 1)^(1/p) = 2 * (1 - 2^-p)^(1/p), stable for large p
    return 2.0 * std::pow(-std::expm1(-q * std::log(2.0)), 1.0 / q);
}

inline double g1(const PNorm& p) { return 1.25 * std::pow(2.0, 1.0 - p.reciprocal()); }

inline double g2_finite(double p) {
    const double a = std::pow(2.0, -1.0 / p);
    const double b = std::pow(3.0, -1.0 / p);
    return std::pow(std::pow(a + b, p) + std::pow(a - b, p) + 1.0 / 3.0, 1.0 / p);
}

inline double g2(const PNorm& p) { return g2_finite(p.is_infinite() ? kG2InfinityProxy : p.p()); }

inline double g3(const PNorm& p) { return std::pow(2.0, p.reciprocal()); }

struct GCurveSample {
    double p;
    double g1;
    double g2;
    double g3;
    double min_g;
};

inline GCurveSample g_funcs(const PNorm& p) {
    GCurveSample s{p.p(), g1(p), g2(p), g3(p), 0.0};
    s.min_g = std::min({s.g1, s.g2, s.g3});
    return s;
}

/// Root of g1 - g2 on [1, 2] by bisection.
inline double crossover_p0(double tolerance = 1e-9) {
    auto diff = [](double p) { return g1(PNorm(p)) - g2_finite(p); };
    double lo = 1.0, hi = 2.0;
    double flo = diff(lo), fhi = diff(hi);
    if (!(flo < 0.0 && fhi > 0.0)) throw InternalConsistency("g1 - g2 has no sign change on [1, 2]");
    while (hi - lo > tolerance) {
        double mid = 0.5 * (lo + hi);
        if (diff(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Interval bound on [1, 1.6]. Dividing g2^p by 3^-1 gives
//   g2(p) = [ (F1(p) + F2(p) + 1) / 3 ]^(1/p),  F1 = (s^(1/p) + 1)^p, F2 = (s^(1/p) - 1)^p
// with s = (2^-1/p / 3^-1/p)^p = 3/2. F1 increases and F2 decreases in p.

inline constexpr double kIntervalRatio = 1.5;

inline double F1(double p) { return std::pow(std::pow(kIntervalRatio, 1.0 / p) + 1.0, p); }
inline double F2(double p) { return std::pow(std::pow(kIntervalRatio, 1.0 / p) - 1.0, p); }

/// Upper bound for g2 on [p1, p2].
inline double phi_interval(double p1, double p2) {
    if (!(p1 >= 1.0 && p1 <= p2)) throw InvalidArgument("phi_interval needs 1 <= p1 <= p2");
    return std::pow((F1(p2) + F2(p1) + 1.0) / 3.0, 1.0 / p1);
}

inline double x_of_p(double p) { return std::pow(2.0, -1.0 / p) + std::pow(3.0, -1.0 / p); }
inline double y_of_p(double p) { return std::pow(2.0, -1.0 / p) - std::pow(3.0, -1.0 / p); }

/// I(p) = [x^2 + y^2] - [x^p + y^p]; nonnegative on [1.6, 2].
inline double I_of_p(double p) {
    const double x = x_of_p(p), y = y_of_p(p);
    return (x * x + y * y) - (std::pow(x, p) + std::pow(y, p));
}

inline double h_of_m(double m) { return 2.0 * (std::pow(3.0, m) - std::pow(2.0, m)) + 1.0 / 3.0; }

/// Unique minimizer of h: log_{3/2}(log_3 2), about -1.13.
inline double m0() { return std::log(std::log(2.0) / std::log(3.0)) / std::log(1.5); }

struct PhiEntry {
    double p1;
    double p2;
    double phi;
};

/// Subintervals of [1, 1.6] used for the interval bound.
inline constexpr std::array<std::pair<double, double>, 5> kPhiSubintervals{
    {{1.0, 1.1}, {1.1, 1.25}, {1.25, 1.4}, {1.4, 1.5}, {1.5, 1.6}}};

struct G2BoundReport {
    std::vector<PhiEntry> phi_table;
    double I_min_on_grid = 0.0;     // min of I on [1.6, 2]
    double g2_max_on_grid = 0.0;    // max of g2 on [1, 2]
    double h_at_minus_one = 0.0;
    double h_at_minus_five_quarters = 0.0;
    double h_max_on_grid = 0.0;     // max of h on [-5/4, -1]
    double m0 = 0.0;
    double eighty_milli_quantity = 0.0;  // x(1.6)^1.6 ln x(1.6) + y(1.6)^1.6 ln y(2)
    bool F1_nondecreasing = false;  // on [1, 1.6]
    bool F2_nonincreasing = false;
    bool x_increasing = false;      // on [1, 2]
    bool y_decreasing = false;
    Report checks;

    bool passed() const { return checks.ok(); }
};

/// Evaluates every numerical claim behind g2 <= sqrt(2) on [1, 2] on a uniform grid.
inline G2BoundReport verify_g2_bound(double step = 1e-3) {
    if (!(step > 0.0)) throw InvalidArgument("grid step must be positive");
    constexpr double kSlack = 1e-12;
    const double sqrt2 = std::sqrt(2.0);
    G2BoundReport r;

    auto grid = [step](double lo, double hi) {
        std::vector<double> pts;
        const auto count = static_cast<long>(std::llround((hi - lo) / step));
        for (long i = 0; i <= count; ++i) pts.push_back(i == count ? hi : lo + static_cast<double>(i) * step);
        return pts;
    };

    for (auto [p1, p2] : kPhiSubintervals) {
        double phi = phi_interval(p1, p2);
        r.phi_table.push_back({p1, p2, phi});
        if (!(phi < sqrt2)) r.checks.fail("Phi(" + format_double(p1) + ", " + format_double(p2) + ") >= sqrt 2");
    }

    r.I_min_on_grid = 1e300;
    for (double p : grid(1.6, 2.0)) r.I_min_on_grid = std::min(r.I_min_on_grid, I_of_p(p));
    if (r.I_min_on_grid < -kSlack) r.checks.fail("I(p) < 0 on [1.6, 2]");

    r.g2_max_on_grid = 0.0;
    for (double p : grid(1.0, 2.0)) r.g2_max_on_grid = std::max(r.g2_max_on_grid, g2_finite(p));
    if (r.g2_max_on_grid > sqrt2 + kSlack) r.checks.fail("g2 exceeds sqrt 2 on [1, 2]");

    r.h_at_minus_one = h_of_m(-1.0);
    r.h_at_minus_five_quarters = h_of_m(-1.25);
    if (std::abs(r.h_at_minus_one) > kSlack) r.checks.fail("h(-1) != 0");
    if (!(r.h_at_minus_five_quarters <= -0.001)) r.checks.fail("h(-5/4) > -0.001");
    r.h_max_on_grid = -1e300;
    for (double m : grid(-1.25, -1.0)) r.h_max_on_grid = std::max(r.h_max_on_grid, h_of_m(m));
    if (r.h_max_on_grid > kSlack) r.checks.fail("h > 0 on [-5/4, -1]");

    r.m0 = m0();
    // h'(m0) = 0
    const double dh = 2.0 * (std::log(3.0) * std::pow(3.0, r.m0) - std::log(2.0) * std::pow(2.0, r.m0));
    if (std::abs(dh) > 1e-12) r.checks.fail("m0 is not a stationary point of h");

    const double x16 = x_of_p(1.6), y16 = y_of_p(1.6), y2 = y_of_p(2.0);
    r.eighty_milli_quantity = std::pow(x16, 1.6) * std::log(x16) + std::pow(y16, 1.6) * std::log(y2);
    if (!(r.eighty_milli_quantity > 0.08)) r.checks.fail("x(1.6)^1.6 ln x(1.6) + y(1.6)^1.6 ln y(2) <= 0.08");

    auto monotone = [&](double lo, double hi, auto f, int sign) {
        auto pts = grid(lo, hi);
        for (std::size_t i = 1; i < pts.size(); ++i)
            if (sign * (f(pts[i]) - f(pts[i - 1])) < -kSlack) return false;
        return true;
    };
    r.F1_nondecreasing = monotone(1.0, 1.6, F1, +1);
    r.F2_nonincreasing = monotone(1.0, 1.6, F2, -1);
    r.x_increasing = monotone(1.0, 2.0, x_of_p, +1);
    r.y_decreasing = monotone(1.0, 2.0, y_of_p, -1);
    if (!r.F1_nondecreasing) r.checks.fail("F1 not nondecreasing on [1, 1.6]");
    if (!r.F2_nonincreasing) r.checks.fail("F2 not nonincreasing on [1, 1.6]");
    if (!r.x_increasing) r.checks.fail("x(p) not increasing on [1, 2]");
    if (!r.y_decreasing) r.checks.fail("y(p) not decreasing on [1, 2]");
    if (!(x16 > 1.0)) r.checks.fail("x(1.6) <= 1");
    if (!(y_of_p(1.0) > 0.0 && std::abs(y_of_p(1.0) - 1.0 / 6.0) < kSlack)) r.checks.fail("y(1) != 1/6");
    return r;
}

/// The four window inequalities of the two-dimensional vector table column with a = a(p).
struct TableInequalities {
    std::array<double, 4> middle{};  // middle term of each inequality
    double upper = 0.0;              // 2^p
    std::array<bool, 4> holds{};
    bool convexity_holds = false;    // 3^p + 2^p - 1 <= 4^p

    bool all() const { return convexity_holds && std::all_of(holds.begin(), holds.end(), [](bool b) { return b; }); }
};

inline TableInequalities check_table_inequalities(double p) {
    if (!(p >= 1.0) || std::isinf(p)) throw InvalidArgument("check_table_inequalities needs finite p >= 1");
    constexpr double kRel = 1e-12;
    const double ap = std::pow(a_of_p(PNorm(p)), p);
    const double two_p = std::pow(2.0, p);
    TableInequalities t;
    t.upper = two_p;
    t.middle = {ap, (1.0 + ap) / two_p, 1.0 + ap, (std::pow(3.0, p) + ap) / two_p};
    for (std::size_t i = 0; i < 4; ++i)
        t.holds[i] = t.middle[i] >= 1.0 - kRel && t.middle[i] <= two_p * (1.0 + kRel);
    t.convexity_holds = std::pow(3.0, p) + two_p - 1.0 <= std::pow(4.0, p) * (1.0 + kRel);
    return t;
}

/// CSV of g1, g2, g3 on a uniform grid of steps+1 points.
inline std::string emit_curves_csv(double p_min, double p_max, int steps) {
    if (!(p_min >= 1.0 && p_min < p_max) || steps < 1) throw InvalidArgument("need 1 <= p_min < p_max and steps >= 1");
    std::ostringstream os;
    os << "p,g1,g2,g3,min_g,bound\n";
    for (int i = 0; i <= steps; ++i) {
        double p = i == steps ? p_max : p_min + (p_max - p_min) * static_cast<double>(i) / steps;
        auto s = g_funcs(PNorm(p));
        os << format_double(p) << ',' << format_double(s.g1) << ',' << format_double(s.g2) << ','
           << format_double(s.g3) << ',' << format_double(s.min_g) << ',' << format_double(1.0 + s.min_g) << '\n';
    }
    return os.str();
}

}  // namespace flowdex::analysis
