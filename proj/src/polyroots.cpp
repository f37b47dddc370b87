#include "subspectra/polyroots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "subspectra/errors.hpp"

namespace subspectra {

cplx poly_eval(const std::vector<cplx>& c, cplx z) {
    cplx p = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) p = p * z + *it;
    return p;
}

void poly_eval_deriv(const std::vector<cplx>& c, cplx z, cplx& p, cplx& dp) {
    p = 0.0;
    dp = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
    }
}

std::vector<cplx> companion_roots(const std::vector<cplx>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    if (n < 1) return {};
    // Rescale z = rho*y so the constant and leading coefficients have equal size.
    const double rho = std::pow(std::abs(c[0]) / std::abs(c[n]), 1.0 / n);
    std::vector<cplx> b(n + 1);
    double scale = 1.0;
    for (int k = 0; k <= n; ++k) {
        b[k] = c[k] * scale;
        scale *= rho;
    }
    const cplx lead = b[n];
    bool real = true;
    for (auto& v : b) {
        v /= lead;
        if (v.imag() != 0.0) real = false;
    }
    std::vector<cplx> out(n);
    if (real) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
        for (int i = 0; i < n; ++i) m(i, n - 1) = -b[i].real();
        Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
        if (es.info() != Eigen::Success) throw RootFindingFailure("companion eigen-solve did not converge");
        for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()[i] * rho;
    } else {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
        for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
        for (int i = 0; i < n; ++i) m(i, n - 1) = -b[i];
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
        if (es.info() != Eigen::Success) throw RootFindingFailure("companion eigen-solve did not converge");
        for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()[i] * rho;
    }
    return out;
}

namespace {

// Starting points on circles whose radii come from the upper convex hull of
// (k, log|c_k|).
std::vector<cplx> newton_polygon_start(const std::vector<cplx>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    std::vector<int> hull;
    auto lg = [&](int k) { return c[k] == cplx(0.0) ? -1e300 : std::log(std::abs(c[k])); };
    for (int k = 0; k <= n; ++k) {
        if (c[k] == cplx(0.0)) continue;
        while (hull.size() >= 2) {
            const int i = hull[hull.size() - 2], j = hull.back();
            const double cross = (j - i) * (lg(k) - lg(i)) - (k - i) * (lg(j) - lg(i));
            if (cross >= 0) hull.pop_back();
            else break;
        }
        hull.push_back(k);
    }
    std::vector<cplx> z;
    z.reserve(n);
    const double offset = 0.4;
    for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
        const int i = hull[h], j = hull[h + 1], cnt = j - i;
        const double r = std::exp((lg(i) - lg(j)) / cnt);
        for (int t = 0; t < cnt; ++t)
            z.push_back(std::polar(r, 2 * pi * t / cnt + 2 * pi * h / n + offset));
    }
    return z;
}

}  // namespace

std::vector<cplx> aberth_roots(const std::vector<cplx>& c, const std::vector<cplx>* start,
                               int max_iterations) {
    const int n = static_cast<int>(c.size()) - 1;
    std::vector<cplx> z = (start && static_cast<int>(start->size()) == n) ? *start : newton_polygon_start(c);
    // Coincident starting points would stall the iteration; spread them apart.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (std::abs(z[i] - z[j]) < 1e-10 * (1 + std::abs(z[i])))
                z[i] += std::polar(1e-6 * (1 + std::abs(z[i])), 0.7 + i);
    std::vector<bool> done(n, false);
    std::vector<double> last_step(n, 0.0);
    for (int it = 0; it < max_iterations; ++it) {
        int active = 0;
        for (int i = 0; i < n; ++i) {
            if (done[i]) continue;
            cplx p, dp;
            poly_eval_deriv(c, z[i], p, dp);
            // Stop once the residual is at the rounding level of the Horner evaluation.
            double scale = 0.0;
            const double az = std::abs(z[i]);
            for (int k = n; k >= 0; --k) scale = scale * az + std::abs(c[k]);
            if (std::abs(p) <= 4 * std::numeric_limits<double>::epsilon() * scale) {
                done[i] = true;
                continue;
            }
            const cplx ratio = p / dp;
            cplx sum = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != i) sum += 1.0 / (z[i] - z[j]);
            const cplx w = ratio / (1.0 - ratio * sum);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
            z[i] -= w;
            last_step[i] = std::abs(w) / std::max(std::abs(z[i]), 1e-300);
            if (std::abs(w) <= 4e-16 * std::max(std::abs(z[i]), 1e-300)) done[i] = true;
            else ++active;
        }
        if (active == 0) return z;
    }
    // Clustered roots converge only linearly; accept once every step is small.
    if (*std::max_element(last_step.begin(), last_step.end()) < 1e-7) return z;
    throw RootFindingFailure("Aberth iteration did not converge");
}

std::vector<cplx> poly_roots(const std::vector<cplx>& coeffs, const PolyRootOptions& opt) {
    std::vector<cplx> c = coeffs;
    while (!c.empty() && c.back() == cplx(0.0)) c.pop_back();
    if (c.size() <= 1) {
        if (c.empty()) throw DegenerateInput("zero polynomial");
        return {};
    }
    std::vector<cplx> roots;
    std::size_t lowest = 0;
    while (c[lowest] == cplx(0.0)) ++lowest;
    roots.assign(lowest, cplx(0.0));
    c.erase(c.begin(), c.begin() + static_cast<long>(lowest));
    const int n = static_cast<int>(c.size()) - 1;
    if (n == 0) return roots;

    std::vector<cplx> r;
    if (n <= opt.companion_max_degree && !opt.warm_start) {
        r = companion_roots(c);
    } else {
        const std::vector<cplx>* start = nullptr;
        std::vector<cplx> ws;
        if (opt.warm_start) {
            for (auto v : *opt.warm_start)
                if (v != cplx(0.0)) ws.push_back(v);
            if (static_cast<int>(ws.size()) == n) start = &ws;
        }
        try {
            r = aberth_roots(c, start, opt.max_iterations);
        } catch (const RootFindingFailure&) {
            if (start) r = aberth_roots(c, nullptr, opt.max_iterations);
            else throw;
        }
    }
    // Newton polish; keep a step only if it lowers the residual.
    for (auto& z : r) {
        cplx p, dp;
        poly_eval_deriv(c, z, p, dp);
        for (int k = 0; k < 4 && dp != cplx(0.0); ++k) {
            const cplx zn = z - p / dp;
            cplx pn, dpn;
            poly_eval_deriv(c, zn, pn, dpn);
            if (std::abs(pn) >= std::abs(p)) break;
            z = zn;
            p = pn;
            dp = dpn;
        }
    }
    roots.insert(roots.end(), r.begin(), r.end());
    return roots;
}

}  // namespace subspectra
