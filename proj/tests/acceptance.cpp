// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "subspectra/errors.hpp"
#include "subspectra/spectra.hpp"
#include "subspectra/timedomain.hpp"
#include "subspectra/turing.hpp"

using namespace subspectra;

namespace {

const ReactionMatrix A_cc(0.5, -3.0 / 16, 8, -1);
const ReactionMatrix A_nr(1, 1, -17.0 / 8, -2);

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
    }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome criterion1() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto t = thresholds_model_a(A_cc, 0.1);
    const double ms = seconds_since(t0) * 1e3;
    o.check(std::abs(t.d_c - 19.798) <= 1e-3, fmt("d_c = %.6f", t.d_c));
    o.check(ms < 10.0, fmt("runtime %.3f ms", ms));
    return o;
}

Outcome criterion2() {
    Outcome o;
    const auto t = thresholds_model_a(A_cc, 0.1, pi / 2);
    o.check(std::abs(t.d_delta_inf - 19.40) <= 0.05, fmt("d_delta_inf = %.4f", t.d_delta_inf));
    o.check(std::abs(t.d_tilde - 16.46) <= 0.05, fmt("d_tilde = %.4f", t.d_tilde));
    bool ordered = true;
    for (int i = 1; i <= 19; ++i) {
        const auto s = thresholds_model_a(A_cc, 0.05 * i, pi / 2);
        if (!(s.d_tilde < s.d_delta_inf && s.d_delta_inf < s.d_c)) ordered = false;
    }
    o.check(ordered, "ordering d_tilde < d_delta_inf < d_c on delta = 0.05..0.95");
    return o;
}

Outcome criterion3() {
    Outcome o;
    const double gcc = gamma_min_cc(A_cc), gnr = gamma_min_nr(A_nr), dnr = critical_ratio(A_nr);
    o.check(std::abs(gcc - 0.69) <= 0.005, fmt("gamma_cc = %.5f", gcc));
    o.check(std::abs(gnr - 0.27) <= 0.005, fmt("gamma_nr = %.5f", gnr));
    o.check(std::abs(dnr - 3.28) <= 0.005, fmt("d_c(A_nr) = %.5f", dnr));
    return o;
}

Outcome criterion4() {
    Outcome o;
    const double dc = critical_ratio(A_cc);
    const auto t = thresholds_model_b(A_cc, 0.8);
    o.check(t.d_gamma && std::abs(*t.d_gamma - 136.177) <= 0.01, fmt("d_gamma(4/5) = %.5f", t.d_gamma.value_or(NAN)));
    const auto t1 = thresholds_model_b(A_cc, 0.999);
    o.check(t1.d_gamma && std::abs(*t1.d_gamma - dc) <= 0.1, fmt("d_gamma(0.999) - d_c = %.4f", t1.d_gamma.value_or(NAN) - dc));
    const auto t2 = thresholds_model_b(A_cc, gamma_min_cc(A_cc) + 0.01);
    o.check(t2.d_gamma && *t2.d_gamma > 10 * dc, fmt("d_gamma(gamma_min + 0.01) = %.2f", t2.d_gamma.value_or(NAN)));
    return o;
}

std::vector<double> logs_of(const GLSeries& s) {
    std::vector<double> y(s.t.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = s.log_abs(i, 0);
    return y;
}

Outcome criterion5() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    ModelSpec m;
    m.kind = ModelKind::SsScalar;
    m.a = ModelAParams::scalar_model(-1.0, 1.0, AnomalousExponent::parse_gamma("1/2"));
    const auto init = FourierInitialData::scalar(1.0, 1.0);
    const auto grid = geometric_grid(1.0, 1e4);
    const GLSeries s = gl_evolve(m, init, grid);
    const double secs = seconds_since(t0);
    const auto y = logs_of(s);
    const auto fit = fit_decay_exponent(grid, y, 1e2, 1e4);
    const auto pred = classify_decay_a(m.a, init);
    const double ratio = std::exp(y.back()) / (std::abs(pred.coefficient[0]) * std::pow(1e4, -1.5));
    o.check(std::abs(fit.power + 1.5) <= 0.1, fmt("slope %.4f", fit.power));
    o.check(pred.kind == DecayKind::AlgebraicDecay && pred.poly_power == -1.5, "predicted power -3/2");
    o.check(std::abs(ratio - 1) <= 0.1, fmt("GL / (C_alg t^-1.5) at t=1e4 = %.4f (C_alg = %.6f)", ratio, pred.coefficient[0].real()));
    o.check(secs < 60, fmt("runtime %.1f s (step %.3g, step-halving gap %.2e)", secs, s.step, s.richardson_error));
    return o;
}

Outcome criterion6() {
    Outcome o;
    const auto grid = geometric_grid(1.0, 1e4);
    {
        ModelSpec m;
        m.kind = ModelKind::CaScalar;
        m.b = ModelBParams::scalar_model(-0.5, 1.0, AnomalousExponent::parse_gamma("3/4"));
        const GLSeries s = gl_evolve(m, FourierInitialData::scalar(1.0, 1.0), grid);
        const auto fit = fit_decay_exponent(grid, logs_of(s), 1e2, 1e4, cplx(-0.5));
        o.check(std::abs(fit.power + 0.75) <= 0.05, fmt("model B scalar residual slope %.4f", fit.power));
    }
    {
        // Subdiffusion with q chosen so that d q^2 t^gamma exceeds 1e3 inside the window.
        const double gamma = 0.5, q = 10.0;
        ModelSpec m;
        m.kind = ModelKind::Subdiffusion;
        m.a = ModelAParams::scalar_model(0.0, 1.0, AnomalousExponent::parse_gamma("1/2"));
        const GLSeries s = gl_evolve(m, FourierInitialData::scalar(1.0, q), grid);
        const auto y = logs_of(s);
        const auto fit = fit_decay_exponent(grid, y, 1e2, 1e4);
        o.check(std::abs(fit.power + gamma) <= 0.05, fmt("subdiffusion slope %.4f", fit.power));
        double worst_ml = 0, worst_asym = 0;
        int used = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double x = q * q * std::pow(grid[i], gamma);
            if (x <= 1e3) continue;
            ++used;
            const double gl = std::exp(y[i]);
            const double ml = mittag_leffler(gamma, -x).value.real();
            const double asym = 1.0 / (x * std::tgamma(1 - gamma));
            worst_ml = std::max(worst_ml, std::abs(gl / ml - 1));
            worst_asym = std::max(worst_asym, std::abs(gl / asym - 1));
        }
        o.check(used > 0 && worst_asym <= 0.02,
                fmt("%g samples with x > 1e3: max deviation from asymptote %.2e, from Mittag-Leffler %.2e", used,
                    worst_asym, worst_ml));
    }
    return o;
}

Outcome criterion7() {
    Outcome o;
    const Window win{-3, 1, -2, 2};
    {
        ModelSpec m;
        m.kind = ModelKind::SsSystem;
        m.a = ModelAParams::system(A_cc, 30.0, AnomalousExponent::parse_gamma("5/6"));
        std::vector<double> q;
        for (int n = 0; n <= 150; ++n) q.push_back(0.02 * n);
        const auto r = convergence_distance(m, {AnomalousExponent::parse_gamma("5/6"), AnomalousExponent::parse_gamma("19/20"),
                                                AnomalousExponent::parse_gamma("299/300")},
                                            win, q, 200, 3);
        std::string vals;
        bool dec = true;
        for (std::size_t i = 0; i < r.size(); ++i) {
            vals += (i ? ", " : "") + (r[i].distance ? fmt("%.4f", *r[i].distance) : std::string("none"));
            if (!r[i].distance || (i && !(r[i].distance < r[i - 1].distance))) dec = false;
        }
        o.check(dec, "model A distances strictly decreasing [" + vals + "]");
        const bool small = r.back().distance && *r.back().distance < 0.05;
        o.check(small, "model A final distance < 0.05");
    }
    for (auto [A, name] : {std::pair{A_cc, "cc"}, std::pair{A_nr, "nr"}}) {
        for (double d : {15.0, 20.0}) {
            ModelSpec m;
            m.kind = ModelKind::CaSystem;
            m.b = ModelBParams::system(A, d, AnomalousExponent::parse_gamma("4/5"));
            m.continuation.seed_box = std::pair{cplx(-3.2, -2.2), cplx(1.2, 2.2)};
            std::vector<double> q;
            for (int n = 0; n <= 50; ++n) q.push_back(0.08 * n);
            const auto r = convergence_distance(m, {AnomalousExponent::parse_gamma("4/5"), AnomalousExponent::parse_gamma("9/10"),
                                                    AnomalousExponent::parse_gamma("19/20")},
                                                win, q, 2, 3);
            std::string vals;
            bool dec = true;
            for (std::size_t i = 0; i < r.size(); ++i) {
                vals += (i ? ", " : "") + (r[i].distance ? fmt("%.4f", *r[i].distance) : std::string("none"));
                if (!r[i].distance || (i && !(r[i].distance < r[i - 1].distance))) dec = false;
            }
            o.check(dec, std::string("model B ") + name + fmt(" d=%g decreasing [", d) + vals + "]");
        }
    }
    return o;
}

Outcome criterion8() {
    Outcome o;
    for (double d : {20.0, 21.0, 22.0}) {
        const auto p = ModelAParams::system(A_cc, d, AnomalousExponent::parse_gamma("9/10"));
        const auto c = scaled_unstable_curve(p);
        double worst = 0, top = 0;
        for (std::size_t i = 0; i < c.q.size(); ++i) {
            worst = std::max(worst, std::abs(eval_ss(p, c.s[i], c.q[i])));
            top = std::max(top, c.s[i]);
        }
        // Closed-form maximum of the largest real regular root over the wavenumber:
        // eliminating k = kappa^2 from D = 0 and dD/dk = 0 gives a quadratic in s.
        const double T = A_cc.trace(), det = A_cc.det();
        const double e = A_cc.a1 * d + A_cc.a4, b = 1 + d;
        // k = (e - b s) / (2d) substituted into s^2 - (T - b k) s + d k^2 - e k + det = 0.
        const double c2 = 1 - b * b / (4 * d);
        const double c1 = -T + b * e / (2 * d);
        const double c0 = det - e * e / (4 * d);
        const double disc = c1 * c1 - 4 * c2 * c0;
        const double s_hi = (-c1 + std::sqrt(disc)) / (2 * c2), s_lo = (-c1 - std::sqrt(disc)) / (2 * c2);
        double exact = -1;
        for (double s : {s_hi, s_lo}) {
            const double k = (e - b * s) / (2 * d);
            if (s > 0 && k > 0) exact = std::max(exact, s);
        }
        o.check(!c.q.empty() && worst < 1e-9, fmt("d=%g: max |D_ss| on curve %.2e", d, worst));
        o.check(std::abs(top - exact) <= 1e-10, fmt("d=%g: curve max %.15f vs regular max %.15f", d, top, exact));
    }
    return o;
}

double nearest_relative(const std::vector<ClassifiedRoot>& roots, cplx s) {
    double best = INFINITY;
    for (const auto& r : roots) best = std::min(best, std::abs(r.s - s) / std::abs(r.s));
    return best;
}

Outcome criterion9() {
    Outcome o;
    const auto p = ModelAParams::system(A_cc, 30.0, AnomalousExponent::parse_gamma("3/4"), pi / 2);
    auto errors = [&](double q) {
        const auto a = asymptotic_model_a(p, q);
        const auto r = roots_model_a(p, q).roots;
        return std::array<double, 4>{nearest_relative(r, a.s_inf1.s), nearest_relative(r, a.s_inf2.s),
                                     nearest_relative(r, a.s0_plus.s), nearest_relative(r, a.s0_minus.s)};
    };
    const auto e100 = errors(100);
    const char* names[] = {"s_inf1", "s_inf2", "s0+", "s0-"};
    for (int i = 0; i < 4; ++i) o.check(e100[i] < 0.01, fmt("q=100 ", 0) + names[i] + fmt(" rel. error %.2e", e100[i]));
    const auto e4 = errors(4), e8 = errors(8), e16 = errors(16);
    double worst = 0;
    for (int i = 0; i < 4; ++i) worst = std::max({worst, e8[i] / e4[i], e16[i] / e8[i]});
    o.check(worst <= 0.75, fmt("worst contraction ratio for q = 4 -> 8 -> 16: %.3g", worst));
    return o;
}

Outcome criterion10() {
    Outcome o;
    const auto t = thresholds_model_b(A_cc, 0.8);
    const double d = *t.d_gamma, qg2 = *t.q_gamma_sq;
    const double step = 1e-4;
    double best = -INFINITY, best_q2 = 0;
    for (double q2 = step; q2 <= 2 * qg2; q2 += step) {
        double top = -INFINITY;
        for (auto s : taylor_roots_b(t, A_cc, d, std::sqrt(q2))) top = std::max(top, s.real());
        if (top > best) {
            best = top;
            best_q2 = q2;
        }
    }
    o.check(std::abs(best) <= 1e-6, fmt("max Re s = %.2e", best));
    o.check(std::abs(best_q2 - qg2) <= step, fmt("attained at q^2 = %.6f vs q_gamma^2 = %.6f", best_q2, qg2));
    return o;
}

Outcome criterion11() {
    Outcome o;
    // Partial-fraction reconstruction on a verification circle.
    {
        double worst = 0;
        std::vector<std::pair<ModelAParams, FourierInitialData>> cases = {
            {ModelAParams::system(A_cc, 30, AnomalousExponent::parse_gamma("5/6")), FourierInitialData::system(1.0, 0.5, 1.0)},
            {ModelAParams::system(A_nr, 5, AnomalousExponent::parse_gamma("2/3")), FourierInitialData::system(0.3, -1.0, 0.7)},
            {ModelAParams::scalar_model(-1, 1, AnomalousExponent::parse_gamma("1/2")), FourierInitialData::scalar(1.0, 1.0)},
            // Double root: z^2 + z + 1/4.
            {ModelAParams::scalar_model(-0.25, 1, AnomalousExponent::parse_gamma("1/2")), FourierInitialData::scalar(1.0, 1.0)},
        };
        for (const auto& [p, init] : cases) {
            const auto pf = pf_coefficients_a(p, init);
            double rmax = 0;
            for (auto z : pf.roots) rmax = std::max(rmax, std::abs(z));
            for (int k = 0; k < 37; ++k) {
                const cplx z = std::polar(1.5 * rmax, 2 * pi * (k + 0.3) / 37);
                const auto a = pf.reconstruct(z), b = psi_model_a(p, init, z);
                for (int c = 0; c < pf.components; ++c) worst = std::max(worst, std::abs(a[c] - b[c]) / std::abs(b[c]));
            }
        }
        o.check(worst <= 1e-8, fmt("partial-fraction reconstruction %.2e", worst));
    }
    {
        const double b_cc = thresholds_model_b(A_cc, gamma_min_cc(A_cc)).beta2;
        const double b_nr = thresholds_model_b(A_nr, gamma_min_nr(A_nr)).beta2;
        o.check(std::abs(b_cc) <= 1e-9 && std::abs(b_nr) <= 1e-9, fmt("beta2 at gamma_min: %.1e, %.1e", b_cc, b_nr));
    }
    {
        double worst = 0;
        for (auto A : {A_cc, A_nr}) {
            const auto p = ModelBParams::system(A, 15, AnomalousExponent::parse_gamma("4/5"));
            const auto bc = pf_coefficients_b(p, FourierInitialData::system(1.0, 0.4, 0.8));
            worst = std::max(worst, std::abs(bc.psi[bc.n - 1][0]));
        }
        o.check(worst <= 1e-10, fmt("psi_n = %.1e", worst));
    }
    {
        double worst = 0;
        for (auto g : {"1/2", "5/6", "2/3"}) {
            const auto init = FourierInitialData::system(1.0, -0.3, 0.9);
            const auto a = pf_coefficients_a(ModelAParams::system(A_cc, 30, AnomalousExponent::parse_gamma(g), pi / 3), init);
            const auto b = pf_coefficients_a(ModelAParams::system(A_cc, 30, AnomalousExponent::parse_gamma(g), pi / 2), init);
            for (int c = 0; c < 2; ++c) worst = std::max(worst, std::abs(a.c_alg[c] - b.c_alg[c]) / std::abs(b.c_alg[c]));
        }
        o.check(worst <= 1e-8, fmt("C_alg theta1 dependence %.1e", worst));
    }
    {
        std::mt19937_64 rng(20261016);
        std::uniform_real_distribution<double> ua(0.05, 5.0), ud(0.1, 3.0);
        const char* gam[] = {"1/2", "2/3", "3/4", "5/6", "9/10"};
        int bad = 0;
        for (int i = 0; i < 50; ++i) {
            const double a = ua(rng), d = ud(rng);
            const auto p = ModelAParams::scalar_model(a, d, AnomalousExponent::parse_gamma(gam[i % 5]));
            double prev = INFINITY;
            for (int k = 0; k <= 20; ++k) {
                const double q = 0.25 * k;
                int count = 0;
                double s = 0;
                for (const auto& r : roots_model_a(p, q).roots)
                    if (r.cls != SpectrumClass::OutsideBranch && std::abs(r.s.imag()) <= 1e-9 * (1 + std::abs(r.s)) &&
                        r.s.real() > 0) {
                        ++count;
                        s = r.s.real();
                    }
                if (count != 1 || !(s < prev || (k == 0))) ++bad;
                prev = s;
            }
        }
        o.check(bad == 0, fmt("scalar positive root unique and decreasing in q: %g violations over 50 draws", bad));
    }
    return o;
}

}  // namespace

int main() {
    const std::vector<std::function<Outcome()>> crit = {criterion1, criterion2, criterion3, criterion4,
                                                        criterion5, criterion6, criterion7, criterion8,
                                                        criterion9, criterion10, criterion11};
    int failed = 0;
    for (std::size_t i = 0; i < crit.size(); ++i) {
        Outcome o;
        try {
            o = crit[i]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failed;
        std::printf("criterion %zu: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, crit.size());
    return failed == 0 ? 0 : 1;
}
