#include "dao/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <sstream>

namespace dao {

namespace {

std::string format_general(double value) {
    std::ostringstream out;
    out << value;
    return out.str();
}

constexpr int kMaxIterations = 10000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

double gamma_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kMaxIterations; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) {
            break;
        }
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper tail Q(a, x) by Lentz's continued fraction.
double gamma_continued_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) {
            d = kTiny;
        }
        c = b + an / c;
        if (std::abs(c) < kTiny) {
            c = kTiny;
        }
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) {
            break;
        }
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double beta_continued_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) {
        d = kTiny;
    }
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m < kMaxIterations; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) {
            d = kTiny;
        }
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) {
            c = kTiny;
        }
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) {
            d = kTiny;
        }
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) {
            c = kTiny;
        }
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) {
            break;
        }
    }
    return h;
}

// Adaptive Simpson on [lo, hi].
template <typename F>
double simpson(F&& f, double lo, double hi, double fa, double fm, double fb, double whole,
               double tol, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid);
    const double rm = 0.5 * (mid + hi);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (mid - lo) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (hi - mid) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return simpson(f, lo, mid, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson(f, mid, hi, fm, frm, fb, right, tol / 2, depth - 1);
}

template <typename F>
double integrate(F&& f, double lo, double hi, double tol) {
    const double fa = f(lo);
    const double fb = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, lo, hi, fa, fm, fb, whole, tol, 50);
}

} // namespace

double regularized_gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) {
        throw std::invalid_argument("regularized_gamma_p needs a > 0 and x >= 0");
    }
    if (x == 0.0) {
        return 0.0;
    }
    if (x < a + 1.0) {
        return gamma_series(a, x);
    }
    return 1.0 - gamma_continued_fraction(a, x);
}

double regularized_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0 || x < 0.0 || x > 1.0) {
        throw std::invalid_argument("regularized_beta needs a, b > 0 and x in [0, 1]");
    }
    if (x == 0.0 || x == 1.0) {
        return x;
    }
    const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                  a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double chi2_cdf(int dof, double x) {
    if (dof < 1) {
        throw std::invalid_argument("chi-square needs dof >= 1");
    }
    if (x <= 0.0) {
        return 0.0;
    }
    return regularized_gamma_p(0.5 * dof, 0.5 * x);
}

double chi2_quantile(int dof, double p) {
    if (dof < 1) {
        throw std::invalid_argument("chi-square needs dof >= 1");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("chi-square quantile needs p in (0, 1)");
    }
    double lo = 0.0;
    double hi = std::max(1.0, static_cast<double>(dof));
    while (chi2_cdf(dof, hi) < p) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > 1e-11) {
        const double mid = 0.5 * (lo + hi);
        if (chi2_cdf(dof, mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double student_t_two_sided_p(double t, double dof) {
    if (dof <= 0.0) {
        throw std::invalid_argument("Student t needs dof > 0");
    }
    if (std::isinf(t)) {
        return 0.0;
    }
    return regularized_beta(0.5 * dof, 0.5, dof / (dof + t * t));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double studentized_range_cdf(double q, int groups) {
    if (groups < 2) {
        throw std::invalid_argument("studentized range needs at least 2 groups");
    }
    if (q <= 0.0) {
        return 0.0;
    }
    // P(range < q) = k * integral phi(z) [Phi(z) - Phi(z - q)]^(k-1) dz
    const auto integrand = [q, groups](double z) {
        const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
        const double width = normal_cdf(z) - normal_cdf(z - q);
        return groups * phi * std::pow(std::max(0.0, width), groups - 1);
    };
    return std::min(1.0, integrate(integrand, -12.0, 12.0 + q, 1e-13));
}

double nemenyi_q(double alpha, int methods) {
    if (methods < 2) {
        throw std::invalid_argument("Nemenyi test needs at least 2 methods");
    }
    if (!(alpha >= 1e-6 && alpha < 1.0)) {
        throw std::invalid_argument("Nemenyi critical values need alpha in [1e-6, 1), got " + format_general(alpha));
    }
    double lo = 0.0;
    double hi = 20.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (1.0 - studentized_range_cdf(mid, methods) > alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi) / std::numbers::sqrt2;
}

} // namespace dao
