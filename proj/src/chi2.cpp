#include "fdilab/chi2.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fdilab {
namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-15;

// Lower incomplete gamma by power series, valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper incomplete gamma by Lentz continued fraction, valid for x >= a + 1.
double gamma_q_contfrac(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double regularized_gamma_p(double a, double x) {
    if (a <= 0.0) throw std::invalid_argument("gamma shape must be positive");
    if (x < 0.0) throw std::invalid_argument("gamma argument must be nonnegative");
    if (x == 0.0) return 0.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_contfrac(a, x);
}

double chi_square_cdf(double x, double k) {
    if (x <= 0.0) return 0.0;
    return regularized_gamma_p(0.5 * k, 0.5 * x);
}

double chi_square_quantile(double p, double k) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("quantile probability must be in (0,1)");
    if (k <= 0.0) throw std::invalid_argument("degrees of freedom must be positive");

    // Wilson-Hilferty starting point, then safeguarded Newton on the CDF.
    const double z = [&] {
        // rational approximation for the standard normal quantile (Acklam)
        const double q = p - 0.5;
        if (std::abs(q) <= 0.425) {
            const double r = 0.180625 - q * q;
            return q *
                   (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                         67265.770927008700853) *
                            r +
                        45921.953931549871457) *
                           r +
                       13731.693765509461125) *
                          r +
                      1971.5909503065514427) *
                         r +
                     133.14166789178437745) *
                        r +
                    3.387132872796366608) /
                   (((((((5226.495278852545703 * r + 28729.085735721942674) * r +
                         39307.89580009271061) *
                            r +
                        21213.794301586595867) *
                           r +
                       5394.1960214247511077) *
                          r +
                      687.1870074920579083) *
                         r +
                     42.313330701600911252) *
                        r +
                    1.0);
        }
        double r = p < 0.5 ? p : 1.0 - p;
        r = std::sqrt(-std::log(r));
        double v;
        if (r <= 5.0) {
            r -= 1.6;
            v = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                      0.24178072517745061177) *
                         r +
                     1.27045825245236838258) *
                        r +
                    3.64784832476320460504) *
                       r +
                   5.7694972214606914055) *
                      r +
                  4.6303378461565452959) *
                     r +
                 1.42343711074968357734) /
                (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                      0.0151986665636164571966) *
                         r +
                     0.14810397642748007459) *
                        r +
                    0.68976733498510000455) *
                       r +
                   1.6763848301838038494) *
                      r +
                  2.05319162663775882187) *
                     r +
                 1.0);
        } else {
            r -= 5.0;
            v = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                      0.0012426609473880784386) *
                         r +
                     0.026532189526576123093) *
                        r +
                    0.29656057182850489123) *
                       r +
                   1.7848265399172913358) *
                      r +
                  5.4637849111641143699) *
                     r +
                 6.6579046435011037772) /
                (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                      1.8463183175100546818e-5) *
                         r +
                     7.868691311456132591e-4) *
                        r +
                    0.0148753612908506148525) *
                       r +
                   0.13692988092273580531) *
                      r +
                  0.59983220655588793769) *
                     r +
                 1.0);
        }
        return p < 0.5 ? -v : v;
    }();

    const double c = 2.0 / (9.0 * k);
    double x = k * std::pow(1.0 - c + z * std::sqrt(c), 3.0);
    if (x <= 0.0) x = 0.5 * k; // Wilson-Hilferty can underflow for tiny p

    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
        const double f = chi_square_cdf(x, k) - p;
        if (f > 0.0)
            hi = x;
        else
            lo = x;
        // chi-square pdf at x
        const double logpdf = (0.5 * k - 1.0) * std::log(x) - 0.5 * x -
                              std::lgamma(0.5 * k) - 0.5 * k * std::log(2.0);
        const double pdf = std::exp(logpdf);
        double step = pdf > 0.0 ? f / pdf : 0.0;
        double next = x - step;
        if (!(next > lo && next < hi) || pdf == 0.0)
            next = std::isinf(hi) ? x * 2.0 : 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-13 * std::max(1.0, x)) return next;
        x = next;
    }
    return x;
}

} // namespace fdilab
