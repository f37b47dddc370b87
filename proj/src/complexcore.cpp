#include "subspectra/complexcore.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "subspectra/errors.hpp"

namespace subspectra {

BranchSpec::BranchSpec(cplx point, double angle, int orient)
    : branch_point(point), cut_angle(angle), orientation(orient) {
    // pi/2 itself is admitted: it is the default cut and keeps the right half-plane inside.
    if (!(angle > 0.0 && angle <= pi / 2)) throw DegenerateInput("cut angle must lie in (0, pi/2]");
    if (orient != 1 && orient != -1) throw DegenerateInput("orientation must be +1 or -1");
}

Membership membership(cplx s, const BranchSpec& b) {
    Membership m;
    const cplx w = s - b.branch_point;
    if (w == cplx(0.0, 0.0)) return m;
    const double lo = b.lower(), hi = b.upper();
    double a = std::arg(w);
    if (a <= lo) a += 2 * pi;
    if (a >= hi) a -= 2 * pi;
    m.inside = a > lo && a < hi;
    m.arg = a;
    m.near_cut = std::min(std::abs(a - lo), std::abs(hi - a)) < kCutProximity;
    m.right_half = s.real() > b.branch_point.real();
    return m;
}

bool in_branch(cplx s, const BranchSpec& b) { return membership(s, b).inside; }

double branch_arg(cplx s, const BranchSpec& b) {
    const Membership m = membership(s, b);
    if (!m.inside) throw BranchViolation("point lies on the cut or at the branch point");
    return m.arg;
}

cplx principal_power(cplx s, double p, const BranchSpec& b) {
    const double a = branch_arg(s, b);
    const double r = std::abs(s - b.branch_point);
    return std::pow(r, p) * cplx(std::cos(p * a), std::sin(p * a));
}

double rgamma(double x) {
    if (x <= 0.0 && x == std::floor(x)) return 0.0;
    if (x > 171.0) return 0.0;
    return 1.0 / std::tgamma(x);
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Partial {
    cplx value;
    double error;
    bool ok;
};

Partial ml_series(double g, cplx z, double tol) {
    if (z == cplx(0.0)) return {1.0, 0.0, true};
    const double logr = std::log(std::abs(z)), th = std::arg(z);
    cplx sum = 1.0;
    double abssum = 1.0, prev = 1.0;
    int quiet = 0;
    for (int n = 1; n < 4000; ++n) {
        const double logmag = n * logr - std::lgamma(1.0 + n * g);
        const double mag = std::exp(logmag);
        const cplx term = std::polar(mag, n * th);
        sum += term;
        abssum += mag;
        const bool decreasing = mag < prev;
        prev = mag;
        if (decreasing && mag <= tol * std::max(std::abs(sum), 1e-300)) {
            if (++quiet >= 3) {
                const double err = 2 * mag + 8 * kEps * abssum;
                return {sum, err, err <= tol * std::max(std::abs(sum), 1e-300) * 10};
            }
        } else {
            quiet = 0;
        }
    }
    return {sum, std::numeric_limits<double>::infinity(), false};
}

Partial ml_asymptotic(double g, cplx z, double tol) {
    cplx sum = 0.0;
    double last = std::numeric_limits<double>::infinity();
    double err = last;
    const cplx zinv = 1.0 / z;
    cplx zk = 1.0;
    for (int k = 1; k < 400; ++k) {
        zk *= zinv;
        const double rg = rgamma(1.0 - k * g);
        if (rg == 0.0) continue;
        const cplx term = -zk * rg;
        const double mag = std::abs(term);
        if (mag > last) break;  // optimal truncation
        sum += term;
        last = mag;
        err = mag;
        if (mag <= tol * std::max(std::abs(sum), 1e-300) * 0.1) break;
    }
    if (std::abs(std::arg(z)) < pi * g) {
        const cplx e = std::exp(std::pow(z, 1.0 / g)) / g;
        sum += e;
    }
    return {sum, err, err <= tol * std::max(std::abs(sum), 1e-300)};
}

// E_g(-x) for x > 0 as a positive integral over the Hankel-contour collapse.
Partial ml_integral(double g, double x, double tol) {
    const double c = std::cos(g * pi);
    auto f = [&](double u) {
        const double den = u * u + 2 * u * c + 1.0;
        return std::exp(-std::pow(x * u, 1.0 / g)) / den;
    };
    std::vector<double> cuts{0.0};
    if (-c > 0) cuts.push_back(-c);
    cuts.push_back(1.0 / x);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const double qtol = std::max(tol * 1e-2, 1e-15);
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double e = 0.0;
        total += ts.integrate(f, cuts[i], cuts[i + 1], qtol, &e);
        err += e;
    }
    double e = 0.0;
    total += es.integrate(f, cuts.back(), std::numeric_limits<double>::infinity(), qtol, &e);
    err += e;
    const double pref = std::sin(g * pi) / (g * pi);
    const double val = pref * total;
    const double abserr = pref * err + 16 * kEps * std::abs(val);
    return {val, abserr, abserr <= tol * std::abs(val) * 10};
}

}  // namespace

MLResult mittag_leffler(double gamma, cplx z, double tol) {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw DegenerateInput("Mittag-Leffler needs gamma in (0,1]");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DegenerateInput("non-finite argument");
    MLResult r;
    if (gamma == 1.0) {
        r.value = std::exp(z);
        r.regime = MLRegime::Exponential;
        r.error_estimate = kEps * std::abs(r.value);
        return r;
    }
    const double az = std::abs(z);
    const bool neg_real = z.imag() == 0.0 && z.real() < 0.0;

    Partial primary{};
    if (az <= 5.0) {
        primary = ml_series(gamma, z, tol);
        r.regime = MLRegime::Series;
        if (!primary.ok && neg_real) {
            primary = ml_integral(gamma, -z.real(), tol);
            r.regime = MLRegime::Integral;
        }
    } else if (neg_real) {
        primary = ml_integral(gamma, -z.real(), tol);
        r.regime = MLRegime::Integral;
    } else {
        primary = ml_asymptotic(gamma, z, tol);
        r.regime = MLRegime::Asymptotic;
    }

    if (az >= 4.0 && az <= 8.0) {
        const Partial s = ml_series(gamma, z, tol);
        const Partial a = ml_asymptotic(gamma, z, tol);
        if (std::isfinite(s.error) && std::isfinite(a.error)) {
            const double scale = std::max(std::abs(s.value), 1e-300);
            r.overlap_disagreement = std::abs(s.value - a.value) / scale;
            r.overlap_warning = r.overlap_disagreement > 0.01;
        }
    }

    if (!primary.ok)
        throw ConvergenceFailure("Mittag-Leffler: no regime reached the requested tolerance");
    r.value = primary.value;
    r.error_estimate = primary.error;
    return r;
}

namespace {

GreenResult green_series(double xi, double mu, double pref) {
    // n-th coefficient uses 1/Gamma(1-mu-mu n) = Gamma(mu(n+1)) sin(pi mu (n+1)) / pi.
    const long double lx = xi > 0 ? std::log(static_cast<long double>(xi)) : 0.0L;
    const long double lpi = 3.14159265358979323846264338327950288L;
    long double sum = 0.0L, abssum = 0.0L, bound = 0.0L;
    for (int n = 0; n < 3000; ++n) {
        if (n > 0 && xi == 0.0) {
            bound = 0.0L;  // the series is exact at the origin
            break;
        }
        const long double a = static_cast<long double>(mu) * (n + 1);
        const long double logmag = n * lx + std::lgamma(a) - std::lgamma(static_cast<long double>(n) + 1.0L);
        bound = std::exp(logmag) / lpi;
        const long double term = ((n % 2) ? -1.0L : 1.0L) * bound * std::sin(lpi * a);
        sum += term;
        abssum += std::fabs(term);
        if (n > 4 && n > 2 * xi && bound < 1e-22L * (std::fabs(sum) + 1e-300L)) break;
    }
    GreenResult g;
    g.value = static_cast<double>(pref * sum / 2.0L);
    g.truncation_bound = static_cast<double>(pref * (bound + 8 * LDBL_EPSILON * abssum) / 2.0L);
    g.method_used = GreenMethod::Series;
    return g;
}

GreenResult green_asymptotic(double xi, double mu, double pref) {
    const double a0 = 1.0 / (std::sqrt(2 * pi) * std::pow(1 - mu, mu) * std::pow(mu, 0.5 - mu));
    const double y = (1 - mu) * std::pow(std::pow(mu, mu) * xi, 1.0 / (1 - mu));
    GreenResult g;
    g.value = pref * a0 * std::pow(y, mu - 0.5) * std::exp(-y) / 2.0;
    // Leading correction is relatively O(1/Y); exact for the Gaussian case.
    g.truncation_bound = (mu == 0.5) ? 1e-15 * g.value : g.value / std::max(y, 1e-300);
    g.method_used = GreenMethod::Asymptotic;
    return g;
}

// Positive integral representation over phi in (0, pi); free of cancellation for any xi > 0.
GreenResult green_integral(double xi, double mu, double pref) {
    const double X = std::pow(xi, 1.0 / (1 - mu));
    auto f = [&](double phi) {
        const double ratio = std::sin(mu * phi) / std::sin(phi);
        const double A = std::pow(ratio, 1.0 / (1 - mu)) * std::sin((1 - mu) * phi) / std::sin(mu * phi);
        if (!std::isfinite(A)) return 0.0;
        return A * std::exp(-X * A);
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    double err = 0.0;
    const double total = ts.integrate(f, 0.0, pi, 1e-14, &err);
    const double scale = pref * std::pow(xi, mu / (1 - mu)) / (pi * (1 - mu)) / 2.0;
    GreenResult g;
    g.value = scale * total;
    g.truncation_bound = scale * err + 16 * kEps * g.value;
    g.method_used = GreenMethod::Integral;
    return g;
}

}  // namespace

GreenResult green_subdiffusion(double x, double t, double d, double gamma, GreenMethod method) {
    if (!(t > 0.0)) throw DegenerateInput("Green's function needs t > 0");
    if (!(d > 0.0)) throw DegenerateInput("Green's function needs d > 0");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw DegenerateInput("Green's function needs gamma in (0,1]");
    const double mu = gamma / 2;
    const double scale = std::sqrt(d * std::pow(t, gamma));
    const double xi = std::abs(x) / scale;
    const double pref = 1.0 / scale;
    if (method == GreenMethod::Asymptotic) return green_asymptotic(xi, mu, pref);
    if (method == GreenMethod::Integral) return green_integral(xi, mu, pref);
    GreenResult s = green_series(xi, mu, pref);
    const bool ok = s.value > 0 && s.truncation_bound <= 1e-8 * s.value;
    if (ok) return s;
    if (method == GreenMethod::Series)
        throw ConvergenceFailure("Green's function series loses accuracy at this |x|/sqrt(d t^gamma)");
    return green_integral(xi, mu, pref);
}

double green_origin_limit(double d, double gamma) {
    return 1.0 / (2 * std::sqrt(d) * std::tgamma(1 - gamma / 2));
}

}  // namespace subspectra
