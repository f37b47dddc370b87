#include <algorithm>
#include <random>

#include "doctest.h"
#include "subspectra/polyroots.hpp"

using namespace subspectra;

namespace {

// Ascending coefficients of prod (z - r_i).
std::vector<cplx> from_roots(const std::vector<cplx>& r) {
    std::vector<cplx> c{1.0};
    for (const cplx& x : r) {
        std::vector<cplx> n(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            n[i + 1] += c[i];
            n[i] -= x * c[i];
        }
        c = n;
    }
    return c;
}

// Greedy matching distance between two root sets of equal size.
double match_error(std::vector<cplx> a, std::vector<cplx> b) {
    double worst = 0;
    for (const cplx& x : a) {
        auto it = std::min_element(b.begin(), b.end(),
                                   [&](cplx p, cplx q) { return std::abs(p - x) < std::abs(q - x); });
        worst = std::max(worst, std::abs(*it - x));
        b.erase(it);
    }
    return worst;
}

}  // namespace

TEST_CASE("Horner evaluation and derivative") {
    const std::vector<cplx> c{1.0, -2.0, 0.0, 3.0};  // 1 - 2z + 3z^3
    cplx p, dp;
    poly_eval_deriv(c, cplx(0.5, 1), p, dp);
    const cplx z(0.5, 1);
    CHECK(std::abs(p - (1.0 - 2.0 * z + 3.0 * z * z * z)) < 1e-14);
    CHECK(std::abs(dp - (-2.0 + 9.0 * z * z)) < 1e-14);
    CHECK(std::abs(poly_eval(c, z) - p) < 1e-15);
}

TEST_CASE("roots of a quadratic match the formula") {
    // z^2 + z + 1: primitive cube roots of unity.
    const auto r = poly_roots({1.0, 1.0, 1.0});
    REQUIRE(r.size() == 2);
    CHECK(match_error(r, {std::polar(1.0, 2 * pi / 3), std::polar(1.0, -2 * pi / 3)}) < 1e-14);
}

TEST_CASE("exact zero roots are returned exactly") {
    const auto r = poly_roots({0.0, 0.0, -1.0, 1.0});  // z^2 (z - 1)
    REQUIRE(r.size() == 3);
    CHECK(std::count(r.begin(), r.end(), cplx(0.0)) == 2);
}

TEST_CASE("random polynomials: companion and Aberth paths recover the roots") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int deg : {5, 20, 60, 140, 200}) {
        std::vector<cplx> roots;
        for (int i = 0; i < deg; ++i) roots.emplace_back(u(rng), u(rng));
        const auto c = from_roots(roots);
        const auto found = poly_roots(c);
        REQUIRE(found.size() == static_cast<std::size_t>(deg));
        // Backward error: each found root is a near-zero of the polynomial relative to its scale.
        for (const cplx& z : found) {
            double scale = 0, zp = 1;
            for (const cplx& ci : c) {
                scale += std::abs(ci) * zp;
                zp *= std::abs(z);
            }
            CHECK(std::abs(poly_eval(c, z)) <= 1e-10 * scale);
        }
        if (deg <= 20) CHECK(match_error(found, roots) < 1e-8);
    }
}

TEST_CASE("roots of unity of high degree") {
    const int n = 180;
    std::vector<cplx> c(n + 1, 0.0);
    c[0] = -1.0;
    c[n] = 1.0;
    std::vector<cplx> exact;
    for (int k = 0; k < n; ++k) exact.push_back(std::polar(1.0, 2 * pi * k / n));
    CHECK(match_error(poly_roots(c), exact) < 1e-10);
}

TEST_CASE("warm start from a nearby polynomial") {
    std::vector<cplx> roots;
    for (int k = 0; k < 150; ++k) roots.push_back(std::polar(1.0 + 0.001 * k, 0.7 * k));
    const auto c = from_roots(roots);
    const auto cold = poly_roots(c);
    std::vector<cplx> shifted = roots;
    for (auto& r : shifted) r *= 1.0001;
    PolyRootOptions opt;
    opt.warm_start = &cold;
    const auto warm = poly_roots(from_roots(shifted), opt);
    CHECK(match_error(warm, shifted) < 1e-6);
}
