#include <algorithm>

#include "doctest.h"
#include "subspectra/errors.hpp"
#include "subspectra/spectra.hpp"

using namespace subspectra;

namespace {
const ReactionMatrix A_cc(0.5, -3.0 / 16, 8, -1);
const ReactionMatrix A_nr(1, 1, -17.0 / 8, -2);

AnomalousExponent G(const char* g) { return AnomalousExponent::parse_gamma(g); }

std::vector<double> grid(double step, int n) {
    std::vector<double> q;
    for (int i = 0; i <= n; ++i) q.push_back(step * i);
    return q;
}

ModelSpec model_a(const ReactionMatrix& A, double d, const char* g) {
    ModelSpec m;
    m.kind = ModelKind::SsSystem;
    m.a = ModelAParams::system(A, d, G(g));
    return m;
}

double nearest(const std::vector<ClassifiedRoot>& roots, cplx s) {
    double best = INFINITY;
    for (const auto& r : roots) best = std::min(best, std::abs(r.s - s));
    return best;
}
}  // namespace

TEST_CASE("model kind names round trip") {
    for (auto k : {ModelKind::Regular, ModelKind::SsScalar, ModelKind::SsSystem, ModelKind::CaScalar,
                   ModelKind::CaSystem, ModelKind::Subdiffusion})
        CHECK(parse_model_kind(to_string(k)) == k);
    CHECK_THROWS_AS(parse_model_kind("model-c"), ConfigError);
    CHECK(std::string(to_string(PointSource::scaled_curve)) == "scaled-curve");
}

TEST_CASE("model A scan: classes agree with recomputed membership and lambda_sup is the maximum") {
    const auto m = model_a(A_cc, 30, "5/6");
    const auto s = scan(m, grid(0.02, 150), 2);
    CHECK(s.errors.empty());
    CHECK(s.grid.size() == 151);
    double top = -INFINITY;
    int visible = 0;
    for (const auto& p : s.points) {
        if (p.cls == SpectrumClass::OutsideBranch) continue;
        ++visible;
        CHECK(in_branch(p.s, m.a.branch));
        CHECK((p.cls == SpectrumClass::Spectrum) == (p.s.real() > 0));
        top = std::max(top, p.s.real());
    }
    CHECK(visible > 151);
    CHECK(s.lambda_sup == top);
    CHECK(compute_lambda_sup(s.points) == top);
    CHECK(s.lambda_sup > 0);  // d = 30 exceeds the regular threshold
}

TEST_CASE("model A with d above the regular threshold is unstable for every exponent") {
    for (const char* g : {"1/4", "1/2", "5/6", "19/20"}) {
        const auto s = scan(model_a(A_cc, 25, g), grid(0.05, 60));
        CHECK(s.lambda_sup > 0);
    }
}

TEST_CASE("scan without diffusion keeps the reaction root") {
    ModelSpec m;
    m.kind = ModelKind::SsScalar;
    m.a = ModelAParams::scalar_model(-0.7, 0.0, G("2/3"));
    const auto s = scan(m, grid(0.5, 4));
    for (const auto& p : s.points)
        if (p.cls != SpectrumClass::OutsideBranch) CHECK(std::abs(p.s - cplx(-0.7)) < 1e-10);
}

TEST_CASE("regular scan matches the quadratic roots") {
    ModelSpec m;
    m.kind = ModelKind::Regular;
    m.a = ModelAParams::system(A_cc, 30, AnomalousExponent());
    const auto q = grid(0.1, 20);
    const auto s = scan(m, q);
    CHECK(s.points.size() == 2 * q.size());
    for (const auto& p : s.points) {
        const auto r = regular_roots(A_cc, 30, p.q);
        CHECK(std::min(std::abs(r[0] - p.s), std::abs(r[1] - p.s)) < 1e-12);
    }
}

TEST_CASE("model B scan records q and uses continuation") {
    ModelSpec m;
    m.kind = ModelKind::CaSystem;
    m.b = ModelBParams::system(A_nr, 15, G("4/5"));
    const auto s = scan(m, grid(0.1, 20));
    CHECK(!s.points.empty());
    for (const auto& p : s.points) {
        CHECK(p.source == PointSource::continuation);
        CHECK(p.cls == classify_model_b(m.b, p.s));
    }
}

TEST_CASE("large-wavenumber approximants: scalar closed form and branch flags") {
    // s + d q^2 s^delta = a: small root ~ (a / (d q^2))^{1/delta}.
    const auto p = ModelAParams::scalar_model(0.8, 2.0, G("1/2"));
    const auto as = asymptotic_model_a(p, 50.0);
    const double expected = std::pow(0.8 / (2.0 * 2500.0), 2.0);
    CHECK(as.s0_plus.s.real() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(as.s0_plus.cls == SpectrumClass::Spectrum);
    double best = INFINITY;
    for (const auto& r : roots_model_a(p, 50.0).roots) best = std::min(best, std::abs(r.s - as.s0_plus.s) / expected);
    CHECK(best < 1e-3);

    // delta >= theta1 / (pi + theta1) = 1/3 puts both large roots outside the branch.
    const auto q = ModelAParams::system(A_cc, 30, G("1/2"));
    const auto big = asymptotic_model_a(q, 100.0);
    CHECK(big.s_inf1.cls == SpectrumClass::OutsideBranch);
    CHECK(big.s_inf2.cls == SpectrumClass::OutsideBranch);
    auto flat = ModelAParams::system(A_cc, 1.0, G("1/2"));
    flat.d = 0.0;
    CHECK_THROWS_AS(asymptotic_model_a(flat, 10.0), DegenerateQuadratic);
}

TEST_CASE("large-wavenumber approximants converge to true roots as q grows") {
    const auto p = ModelAParams::system(A_cc, 30, G("3/4"));
    double prev[4] = {INFINITY, INFINITY, INFINITY, INFINITY};
    for (double q : {5.0, 10.0, 20.0, 40.0}) {
        const auto a = asymptotic_model_a(p, q);
        const auto r = roots_model_a(p, q).roots;
        const AsymptoticRoot* pts[] = {&a.s_inf1, &a.s_inf2, &a.s0_plus, &a.s0_minus};
        for (int i = 0; i < 4; ++i) {
            const double e = nearest(r, pts[i]->s) / std::abs(pts[i]->s);
            CHECK(e < 0.75 * prev[i]);
            prev[i] = e;
        }
    }
}

TEST_CASE("scaled unstable curve") {
    const auto below = ModelAParams::system(A_cc, 19.0, G("9/10"));
    CHECK(scaled_unstable_curve(below).q.empty());
    const auto p = ModelAParams::system(A_cc, 21.0, G("9/10"));
    const auto c = scaled_unstable_curve(p);
    REQUIRE(!c.q.empty());
    for (std::size_t i = 0; i < c.q.size(); ++i) {
        CHECK(c.s[i] > 0);
        CHECK(std::abs(eval_ss(p, c.s[i], c.q[i])) < 1e-9);
        CHECK(c.q[i] >= c.q_min - 1e-12);
    }
    // With the exponent close to 1 the rescaled wavenumber approaches kappa.
    const auto near1 = scaled_unstable_curve(ModelAParams::system(A_cc, 21.0, G("999/1000")));
    for (std::size_t i = 0; i < near1.q.size(); i += 100)
        CHECK(near1.q[i] == doctest::Approx(near1.kappa[i]).epsilon(0.02));
}

TEST_CASE("convergence distance") {
    const Window w{-3, 1, -2, 2};
    CHECK(w.contains(cplx(0, 0)));
    CHECK_FALSE(w.contains(cplx(2, 0)));
    const auto m = model_a(A_cc, 30, "5/6");
    const auto one = convergence_distance(m, {AnomalousExponent()}, w, grid(0.05, 60));
    REQUIRE(one[0].distance.has_value());
    CHECK(*one[0].distance == 0.0);
    const auto r = convergence_distance(m, {G("5/6"), G("19/20")}, w, grid(0.05, 60), 4);
    REQUIRE(r[0].distance.has_value());
    REQUIRE(r[1].distance.has_value());
    CHECK(*r[1].distance < *r[0].distance);
    CHECK(r[0].gamma == "5/6");
    // An empty window yields no distance rather than zero.
    const auto e = convergence_distance(m, {G("5/6")}, Window{50, 60, 50, 60}, grid(0.05, 60));
    CHECK_FALSE(e[0].distance.has_value());
    CHECK(!e[0].note.empty());
}

TEST_CASE("region labels walk through the expected regions as d grows") {
    const double delta = 0.1;
    const auto at = [&](double d) { return region_classify(A_cc, delta, d, pi / 2); };
    CHECK(at(15).s0_outside);
    CHECK(at(15).label == 'H');
    CHECK(at(18).s0_pseudo);
    CHECK(at(18).label == 'G');
    CHECK(at(19.5).s0_complex_unstable);
    CHECK(at(19.5).label == 'F');
    CHECK(at(20).s0_real_positive);
    CHECK(at(20).label == 'E');
    for (double d : {1.0, 10.0, 17.0, 19.0, 25.0}) {
        const auto r = at(d);
        CHECK(r.sinf_in_branch);
        CHECK(int(r.s0_real_positive) + int(r.s0_complex_unstable) + int(r.s0_pseudo) + int(r.s0_outside) == 1);
        CHECK(r.d_tilde < r.d_delta_inf);
        CHECK(r.d_delta_inf < r.d_c);
    }
    // The large roots leave the branch at delta = theta1 / (pi + theta1).
    CHECK(region_classify(A_cc, 0.34, 20, pi / 2).label < 'E');
    CHECK(region_classify(A_cc, 0.32, 20, pi / 2).label >= 'E');
    CHECK(region_classify(A_cc, 0.05, 20, 1e-3).label < 'E');
}
