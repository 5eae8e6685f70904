#include "psmatch/stats.hpp"

#include <cmath>

#include "psmatch/errors.hpp"

namespace psmatch {

namespace {

double poly7(const double* c, double r) {
    // c[0] + c[1] r + ... + c[7] r^7 by Horner
    double v = c[7];
    for (int i = 6; i >= 0; --i) v = v * r + c[i];
    return v;
}

} // namespace

// Wichura's algorithm AS 241, PPND16 variant: three rational
// approximations, one for the central region and two for the tails.
double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("norm_quantile: p must lie strictly inside (0,1)");

    static const double a[8] = {
        3.3871328727963666080e0,  1.3314166789178437745e2,
        1.9715909503065514427e3,  1.3731693765509461125e4,
        4.5921953931549871457e4,  6.7265770927008700853e4,
        3.3430575583588128105e4,  2.5090809287301226727e3};
    static const double b[8] = {
        1.0,                      4.2313330701600911252e1,
        6.8718700749205790830e2,  5.3941960214247511077e3,
        2.1213794301586595867e4,  3.9307895800092710610e4,
        2.8729085735721942674e4,  5.2264952788528545610e3};
    static const double c[8] = {
        1.42343711074968357734e0, 4.63033784615654529590e0,
        5.76949722146069140550e0, 3.64784832476320460504e0,
        1.27045825245236838258e0, 2.41780725177450611770e-1,
        2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static const double d[8] = {
        1.0,                      2.05319162663775882187e0,
        1.67638483018380384940e0, 6.89767334985100004550e-1,
        1.48103976427480074590e-1, 1.51986665636164571966e-2,
        5.47593808499534494600e-4, 1.05075007164441684324e-9};
    static const double e[8] = {
        6.65790464350110377720e0, 5.46378491116411436990e0,
        1.78482653991729133580e0, 2.96560571828504891230e-1,
        2.65321895265761230930e-2, 1.24266094738807843860e-3,
        2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static const double f[8] = {
        1.0,                      5.99832206555887937690e-1,
        1.36929880922735805310e-1, 1.48753612908506148525e-2,
        7.86869131145613259100e-4, 1.84631831751005468180e-5,
        1.42151175831644588870e-7, 2.04426310338993978564e-15};

    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * poly7(a, r) / poly7(b, r);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = poly7(c, r) / poly7(d, r);
    } else {
        r -= 5.0;
        val = poly7(e, r) / poly7(f, r);
    }
    return q < 0.0 ? -val : val;
}

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double sample_variance(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n < 2)
        throw ShapeError("sample_variance: need at least two values");
    KahanSum mean_acc;
    for (double x : v) mean_acc.add(x);
    const double mean = mean_acc.value() / static_cast<double>(n);
    KahanSum ss;
    for (double x : v) ss.add((x - mean) * (x - mean));
    return ss.value() / static_cast<double>(n - 1);
}

// Nodes by Newton iteration on the Legendre recurrence, started from the
// Chebyshev-like guess; converges in a handful of steps for any order.
std::vector<QuadratureNode> gauss_legendre(int order, double a, double b) {
    if (order < 1)
        throw DomainError("gauss_legendre: order must be positive");
    if (!(a < b))
        throw DomainError("gauss_legendre: need a < b");

    const int n = order;
    std::vector<QuadratureNode> out(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    const double xm = 0.5 * (b + a);
    const double xl = 0.5 * (b - a);
    for (int i = 0; i < half; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p0 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        const double w = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        out[static_cast<std::size_t>(i)] = {xm - xl * z, w};
        out[static_cast<std::size_t>(n - 1 - i)] = {xm + xl * z, w};
    }
    return out;
}

} // namespace psmatch
