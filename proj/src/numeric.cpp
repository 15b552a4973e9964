#include "plreg/numeric.hpp"

#include <algorithm>
#include <cmath>

#include "plreg/errors.hpp"

namespace plreg {

namespace {

// 15-point Kronrod nodes/weights on [-1,1] with the embedded 7-point Gauss rule.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct GkResult {
    double kronrod;
    double err;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double resg = 0.0, resk = 0.0;
    const double fc = f(c);
    resk = kWgk[7] * fc;
    resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double f1 = f(c - x);
        const double f2 = f(c + x);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    return {resk * h, std::abs((resk - resg) * h)};
}

double integrate_rec(const std::function<double(double)>& f, double a, double b,
                     double tol, int depth, int& budget) {
    const GkResult r = gk15(f, a, b);
    if (r.err <= tol || depth <= 0 || budget <= 0) return r.kronrod;
    budget -= 2;
    const double c = 0.5 * (a + b);
    return integrate_rec(f, a, c, 0.5 * tol, depth - 1, budget) +
           integrate_rec(f, c, b, 0.5 * tol, depth - 1, budget);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth) {
    if (!(a <= b)) throw domain_error("integrate: empty interval");
    if (a == b) return 0.0;
    int budget = 20000;  // caps pathological subdivision near singularities
    return integrate_rec(f, a, b, tol, max_depth, budget);
}

double integrate_to_inf(const std::function<double(double)>& f, double a,
                        double tol) {
    // x = a + t/(1-t) maps (0,1) -> (a, inf); dx = dt/(1-t)^2.
    auto g = [&](double t) {
        const double om = 1.0 - t;
        const double x = a + t / om;
        const double fx = f(x);
        return fx / (om * om);
    };
    return integrate(g, 0.0, 1.0, tol);
}

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 RootOptions opts) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw numerical_error("find_root: root not bracketed");
    double x = lo;
    for (int it = 0; it < opts.max_iter; ++it) {
        // secant proposal, clipped to the current bracket
        double xs = (std::abs(fhi - flo) > 0.0)
                        ? (lo - flo * (hi - lo) / (fhi - flo))
                        : 0.5 * (lo + hi);
        const double width = hi - lo;
        if (!(xs > lo + 0.01 * width) || !(xs < hi - 0.01 * width))
            xs = 0.5 * (lo + hi);
        const double fx = f(xs);
        x = xs;
        if (std::abs(fx) <= opts.ftol) return xs;
        if (flo * fx < 0.0) {
            hi = xs;
            fhi = fx;
        } else {
            lo = xs;
            flo = fx;
        }
        if (hi - lo <= opts.xtol * std::max(1.0, std::abs(xs))) break;
    }
    return x;
}

double norm_pdf(double z) {
    return 0.3989422804014326779 * std::exp(-0.5 * z * z);
}

double norm_cdf(double z) { return 0.5 * std::erfc(-z * 0.7071067811865475244); }

namespace {

// Acklam's rational approximation for the initial guess.
double norm_quantile_approx(double p) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double norm_quantile(double u) {
    if (!(u > 0.0 && u < 1.0)) throw domain_error("norm_quantile: u outside (0,1)");
    double z = norm_quantile_approx(u);
    // one Halley refinement step
    for (int i = 0; i < 2; ++i) {
        const double e = norm_cdf(z) - u;
        const double f = norm_pdf(z);
        if (f <= 0.0) break;
        const double step = e / f;
        z -= step / (1.0 + 0.5 * z * step);
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    return z;
}

}  // namespace plreg
