#include "subspectra/timedomain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "subspectra/errors.hpp"

namespace subspectra {

const char* to_string(DecayKind k) {
    switch (k) {
        case DecayKind::ExponentialGrowth: return "ExponentialGrowth";
        case DecayKind::ExponentialDecay: return "ExponentialDecay";
        case DecayKind::AlgebraicDecay: return "AlgebraicDecay";
        case DecayKind::BranchPointDecay: return "BranchPointDecay";
    }
    return "?";
}

namespace {

constexpr int kContourNodes = 64;
constexpr double kZeroCoefficient = 1e-12;

double norm2(const Vec2c& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

// Numerator polynomials of the model A solution, ascending in z.
std::array<std::vector<cplx>, 2> numerators_a(const ModelAParams& p, const FourierInitialData& init) {
    const int m = p.exponent.m, l = p.exponent.ell;
    const double q2 = init.q * init.q;
    if (p.scalar) return {std::vector<cplx>{init.u0[0]}, {}};
    const auto& A = p.reaction;
    std::vector<cplx> p1(m + 1, 0.0), p2(m + 1, 0.0);
    const cplx u1 = init.u0[0], u2 = init.u0[1];
    p1[m] += u1;
    p1[l] += p.d * q2 * u1;
    p1[0] += -A.a4 * u1 + A.a2 * u2;
    p2[m] += u2;
    p2[l] += q2 * u2;
    p2[0] += -A.a1 * u2 + A.a3 * u1;
    return {p1, p2};
}

}  // namespace

Vec2c psi_model_a(const ModelAParams& p, const FourierInitialData& init, cplx z) {
    const auto num = numerators_a(p, init);
    const cplx Q = poly_eval(model_a_polynomial(p, init.q), z);
    Vec2c out{poly_eval(num[0], z) / Q, cplx(0.0)};
    if (!p.scalar) out[1] = poly_eval(num[1], z) / Q;
    return out;
}

Vec2c PartialFractionA::reconstruct(cplx z) const {
    Vec2c out{};
    for (std::size_t j = 0; j < roots.size(); ++j) {
        cplx f = 1.0;
        for (std::size_t k = 0; k < alpha[j].size(); ++k) {
            f /= (z - roots[j]);
            for (int c = 0; c < components; ++c) out[c] += alpha[j][k][c] * f;
        }
    }
    return out;
}

PartialFractionA pf_coefficients_a(const ModelAParams& p, const FourierInitialData& init) {
    if (init.q == 0.0) throw DegenerateInput("zero wavenumber: the mode follows the reaction matrix exponential");
    if (p.scalar && p.a == 0.0) throw DegenerateInput("zero reaction: the origin is a pole, use branch-point decay");
    PartialFractionA out;
    out.components = p.scalar ? 1 : 2;
    out.m = p.exponent.m;
    const int m = out.m;

    const auto Q = model_a_polynomial(p, init.q);
    if (Q[0] == cplx(0.0)) throw DegenerateInput("singular reaction matrix");
    std::vector<cplx> dQ(Q.size() - 1);
    for (std::size_t k = 1; k < Q.size(); ++k) dQ[k - 1] = Q[k] * static_cast<double>(k);
    const auto num = numerators_a(p, init);
    const auto ra = roots_model_a(p, init.q);
    out.warnings = ra.warnings;

    for (std::size_t j = 0; j < ra.roots.size(); ++j) {
        const auto& r = ra.roots[j];
        out.roots.push_back(r.z);
        out.multiplicity.push_back(r.multiplicity);
        out.cls.push_back(r.cls);
        if (r.multiplicity > 1 && r.cluster_radius > 1e-9 && r.cluster_radius < 1e-7) {
            std::ostringstream w;
            w << "NearDefectiveRoot: cluster radius " << r.cluster_radius << " at z=" << r.z;
            out.warnings.push_back(w.str());
        }
    }

    for (std::size_t j = 0; j < out.roots.size(); ++j) {
        const cplx zj = out.roots[j];
        const int K = out.multiplicity[j];
        std::vector<Vec2c> a(K, Vec2c{});
        if (K == 1) {
            const cplx d = poly_eval(dQ, zj);
            for (int c = 0; c < out.components; ++c) a[0][c] = poly_eval(num[c], zj) / d;
        } else {
            // Laurent coefficients on a small circle around the cluster.
            double gap = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < out.roots.size(); ++i)
                if (i != j) gap = std::min(gap, std::abs(out.roots[i] - zj));
            const double rho = std::isfinite(gap) ? 0.1 * gap : 0.1 * std::max(1.0, std::abs(zj));
            for (int nu = 0; nu < kContourNodes; ++nu) {
                const cplx dz = std::polar(rho, 2 * pi * (nu + 0.5) / kContourNodes);
                const Vec2c psi = psi_model_a(p, init, zj + dz);
                cplx pw = dz;
                for (int k = 0; k < K; ++k) {
                    for (int c = 0; c < out.components; ++c) a[k][c] += psi[c] * pw / double(kContourNodes);
                    pw *= dz;
                }
            }
        }
        out.alpha.push_back(a);
    }

    // Branch-cut term: coefficient of z^1 in the Taylor series of Psi(z^m) divided by Gamma(-1/m).
    const double pref = std::sin(pi / m) / pi * std::tgamma(1.0 + 1.0 / m);
    for (std::size_t j = 0; j < out.roots.size(); ++j) {
        const cplx mz = -out.roots[j];
        cplx pw = 1.0 / (mz * mz);
        for (std::size_t k = 0; k < out.alpha[j].size(); ++k) {
            for (int c = 0; c < out.components; ++c)
                out.c_alg[c] += pref * out.alpha[j][k][c] * static_cast<double>(k + 1) * pw;
            pw /= mz;
        }
    }

    // Dominant in-branch pole with a nonzero residue.
    double scale = std::max(norm2(init.u0), 1e-300);
    for (std::size_t j = 0; j < out.roots.size(); ++j) {
        if (out.cls[j] == SpectrumClass::OutsideBranch) continue;
        const int K = out.multiplicity[j];
        const cplx zj = out.roots[j];
        const cplx s = std::pow(zj, m);
        const cplx jac = static_cast<double>(m) * std::pow(zj, m - 1);
        Vec2c c{};
        cplx f = std::pow(jac, K) / std::tgamma(static_cast<double>(K));
        for (int k = 0; k < out.components; ++k) c[k] = out.alpha[j][K - 1][k] * f;
        if (norm2(c) <= kZeroCoefficient * scale) {
            std::ostringstream w;
            w << "ZeroNumerator: initial data annihilate the pole at s=" << s;
            out.info.push_back(w.str());
            continue;
        }
        const bool better = !out.has_exp || s.real() > out.s_star.real() + 1e-12 ||
                            (std::abs(s.real() - out.s_star.real()) <= 1e-12 && s.imag() > out.s_star.imag());
        if (better) {
            out.has_exp = true;
            out.s_star = s;
            out.exp_multiplicity = K;
            out.c_exp = c;
        }
    }
    return out;
}

DecayEstimate classify_decay_a(const ModelAParams& p, const FourierInitialData& init) {
    DecayEstimate e;
    e.components = p.scalar ? 1 : 2;
    const double gamma = p.exponent.gamma();
    const double q2 = init.q * init.q;

    if (p.scalar && p.a == 0.0) {
        if (init.q == 0.0 || p.d == 0.0) throw DegenerateInput("zero reaction and zero wavenumber: the mode is constant");
        e.kind = DecayKind::BranchPointDecay;
        e.s_star = 0.0;
        e.poly_power = -gamma;
        e.coefficient[0] = init.u0[0] * rgamma(1.0 - gamma) / (p.d * q2);
        e.hypothesis_ok = std::abs(e.coefficient[0]) > kZeroCoefficient;
        e.notes.push_back("pure subdiffusion: the origin is the only singularity");
        return e;
    }
    if (init.q == 0.0) {
        if (p.scalar) {
            e.s_star = p.a;
            e.coefficient[0] = init.u0[0];
        } else {
            const auto& A = p.reaction;
            e.s_star = A.mu1;
            const Eigen::Vector2cd w = A.Pinv * Eigen::Vector2cd(init.u0[0], init.u0[1]);
            const Eigen::Vector2cd c = A.P.col(0) * w(0);
            e.coefficient = {c(0), c(1)};
        }
        e.kind = e.s_star.real() > 0 ? DecayKind::ExponentialGrowth : DecayKind::ExponentialDecay;
        e.notes.push_back("zero wavenumber: reaction matrix exponential");
        return e;
    }

    const auto pf = pf_coefficients_a(p, init);
    e.notes = pf.warnings;
    e.notes.insert(e.notes.end(), pf.info.begin(), pf.info.end());
    if (p.exponent.regular()) {
        if (!pf.has_exp) throw DegenerateInput("initial data annihilate every mode");
        e.kind = pf.s_star.real() > 0 ? DecayKind::ExponentialGrowth : DecayKind::ExponentialDecay;
        e.s_star = pf.s_star;
        e.poly_power = pf.exp_multiplicity - 1;
        e.coefficient = pf.c_exp;
        return e;
    }
    if (pf.has_exp && pf.s_star.real() > 0) {
        e.kind = DecayKind::ExponentialGrowth;
        e.s_star = pf.s_star;
        e.poly_power = pf.exp_multiplicity - 1;
        e.coefficient = pf.c_exp;
        e.hypothesis_ok = norm2(pf.c_exp) > kZeroCoefficient;
        return e;
    }
    e.kind = DecayKind::AlgebraicDecay;
    e.s_star = 0.0;
    e.poly_power = -1.0 - 1.0 / p.exponent.m;
    e.coefficient = pf.c_alg;
    e.hypothesis_ok = norm2(pf.c_alg) > kZeroCoefficient;
    if (!e.hypothesis_ok) e.notes.push_back("algebraic coefficient vanishes: decay is faster than predicted");
    return e;
}

// ---------------------------------------------------------------- model B

namespace {

// Cramer numerators and determinant of the resolvent, given both fractional powers.
struct ResolventB {
    Vec2c num{};
    cplx det;
};

ResolventB resolvent_b(const ModelBParams& p, const FourierInitialData& init, cplx s, cplx pow1, cplx pow2) {
    const double q2 = init.q * init.q;
    ResolventB r;
    if (p.scalar) {
        r.num[0] = init.u0[0];
        r.det = (s - p.a) + p.d * q2 * pow1;
        return r;
    }
    const auto& D = p.dbar;
    const cplx m11 = s - p.mu1() + D(0, 0) * q2 * pow1, m12 = D(0, 1) * q2 * pow2;
    const cplx m21 = D(1, 0) * q2 * pow1, m22 = s - p.mu2() + D(1, 1) * q2 * pow2;
    const cplx w1 = init.u0[0], w2 = init.u0[1];
    r.num = {m22 * w1 - m12 * w2, m11 * w2 - m21 * w1};
    r.det = m11 * m22 - m12 * m21;
    return r;
}

// Psi at s = mu_which + z^m, with the local fractional power taken as z^n exactly.
Vec2c psi_b_local(const ModelBParams& p, const FourierInitialData& init, cplx z, int which) {
    const int m = p.exponent.m, n = p.exponent.ell;
    const double delta = p.exponent.delta();
    const cplx local = std::pow(z, n);
    const cplx s = (which == 0 ? p.mu1() : p.mu2()) + std::pow(z, m);
    cplx pow1 = local, pow2 = local;
    if (!p.scalar) {
        if (which == 0) pow2 = principal_power(s, delta, p.b2);
        else pow1 = principal_power(s, delta, p.b1);
    }
    const auto r = resolvent_b(p, init, s, pow1, pow2);
    return {r.num[0] / r.det, r.num[1] / r.det};
}

// Coefficients of z^{-k}, k = 1..n, of Psi(mu + z^m), halving the radius until stable.
std::vector<Vec2c> branch_laurent(const ModelBParams& p, const FourierInitialData& init, int which,
                                  double rho0, double* used_radius) {
    const int n = p.exponent.ell;
    const int comps = p.scalar ? 1 : 2;
    auto extract = [&](double rho) {
        std::vector<Vec2c> c(n, Vec2c{});
        for (int nu = 0; nu < kContourNodes; ++nu) {
            const cplx z = std::polar(rho, 2 * pi * (nu + 0.5) / kContourNodes);
            const Vec2c psi = psi_b_local(p, init, z, which);
            cplx pw = z;
            for (int k = 0; k < n; ++k) {
                for (int i = 0; i < comps; ++i) c[k][i] += psi[i] * pw / double(kContourNodes);
                pw *= z;
            }
        }
        return c;
    };
    double rho = rho0;
    auto prev = extract(rho);
    for (int it = 0; it < 40; ++it) {
        const auto next = extract(rho / 2);
        double diff = 0.0, size = 0.0;
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < comps; ++i) {
                diff = std::max(diff, std::abs(next[k][i] - prev[k][i]));
                size = std::max(size, std::abs(next[k][i]));
            }
        if (diff <= 1e-9 * std::max(size, norm2(init.u0))) {
            if (used_radius) *used_radius = rho / 2;
            return next;
        }
        rho /= 2;
        prev = next;
    }
    throw ContourExtractionFailure("branch-point coefficients did not stabilise under radius halving");
}

}  // namespace

Vec2c psi_model_b(const ModelBParams& p, const FourierInitialData& init, cplx s) {
    const double delta = p.exponent.delta();
    const cplx pow1 = principal_power(s, delta, p.b1);
    const cplx pow2 = p.scalar ? pow1 : principal_power(s, delta, p.b2);
    const auto r = resolvent_b(p, init, s, pow1, pow2);
    return {r.num[0] / r.det, r.num[1] / r.det};
}

BranchCoefficientsB pf_coefficients_b(const ModelBParams& p, const FourierInitialData& init) {
    if (p.exponent.regular()) throw DegenerateInput("gamma = 1 has no branch points");
    if (init.q == 0.0) throw DegenerateInput("zero wavenumber: the mode follows the reaction matrix exponential");
    BranchCoefficientsB out;
    out.components = p.scalar ? 1 : 2;
    out.n = p.exponent.ell;
    out.m = p.exponent.m;
    const int m = out.m, n = out.n;
    const double q2 = init.q * init.q;
    const double gamma = p.exponent.gamma();

    // Nearest other singularity in the local variable bounds the starting radius.
    double reach = std::pow(std::abs(p.d) * q2 + 1e-300, 1.0 / (m - n));
    if (!p.scalar) reach = std::min(reach, std::pow(std::abs(p.mu1() - p.mu2()), 1.0 / m));
    const double rho0 = 0.1 * reach;
    out.phi = branch_laurent(p, init, 0, rho0, &out.extraction_radius);
    if (!p.scalar) out.psi = branch_laurent(p, init, 1, rho0, nullptr);
    for (int c = 0; c < out.components; ++c) out.c_bp[c] = out.phi[n - 1][c] * rgamma(static_cast<double>(n) / m);

    // Poles inside both principal branches.
    std::vector<cplx> roots;
    if (p.scalar) {
        const auto r = scalar_ca_root(p.a, p.d, gamma, init.q, p.b1.cut_angle);
        if (r.cls != SpectrumClass::OutsideBranch) roots.push_back(r.s);
    } else {
        const auto rb = roots_model_b(p, {init.q});
        for (const auto& row : rb.per_q)
            for (const auto& r : row.roots)
                if (r.cls != SpectrumClass::OutsideBranch) roots.push_back(r.s);
    }
    out.roots = roots;
    const double scale = std::max(norm2(init.u0), 1e-300);
    for (auto s : roots) {
        const double delta = p.exponent.delta();
        const cplx pow1 = principal_power(s, delta, p.b1);
        const cplx pow2 = p.scalar ? pow1 : principal_power(s, delta, p.b2);
        const auto r = resolvent_b(p, init, s, pow1, pow2);
        const double a1 = branch_arg(s, p.b1);
        const double a2 = p.scalar ? a1 : branch_arg(s, p.b2);
        cplx dR;
        eval_ca2_on_sheet(p, s, init.q, a1, a2, &dR);
        const cplx dQ = p.scalar ? pow1 * dR : pow1 * pow2 * dR;
        Vec2c c{r.num[0] / dQ, p.scalar ? cplx(0.0) : r.num[1] / dQ};
        if (norm2(c) <= kZeroCoefficient * scale) {
            std::ostringstream w;
            w << "ZeroNumerator: initial data annihilate the pole at s=" << s;
            out.info.push_back(w.str());
            continue;
        }
        const bool better = !out.has_exp || s.real() > out.s_star.real() + 1e-12 ||
                            (std::abs(s.real() - out.s_star.real()) <= 1e-12 && s.imag() > out.s_star.imag());
        if (better) {
            out.has_exp = true;
            out.s_star = s;
            out.c_exp = c;
        }
    }
    return out;
}

DecayEstimate classify_decay_b(const ModelBParams& p, const FourierInitialData& init) {
    DecayEstimate e;
    e.components = p.scalar ? 1 : 2;
    if (init.q == 0.0 || p.exponent.regular()) {
        // Diagonal exponential: either no diffusion or no memory.
        const double q2 = init.q * init.q;
        if (p.scalar) {
            e.s_star = p.a - p.d * q2;
            e.coefficient[0] = init.u0[0];
        } else {
            Eigen::Matrix2cd M = -q2 * p.dbar;
            M(0, 0) += p.mu1();
            M(1, 1) += p.mu2();
            Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(M);
            const int top = es.eigenvalues()(0).real() >= es.eigenvalues()(1).real() ? 0 : 1;
            e.s_star = es.eigenvalues()(top);
            const Eigen::Vector2cd w = es.eigenvectors().inverse() * Eigen::Vector2cd(init.u0[0], init.u0[1]);
            const Eigen::Vector2cd c = es.eigenvectors().col(top) * w(top);
            e.coefficient = {c(0), c(1)};
        }
        e.kind = e.s_star.real() > 0 ? DecayKind::ExponentialGrowth : DecayKind::ExponentialDecay;
        return e;
    }
    const auto bc = pf_coefficients_b(p, init);
    e.notes = bc.info;
    if (bc.has_exp && bc.s_star.real() >= p.mu1().real()) {
        e.kind = bc.s_star.real() > 0 ? DecayKind::ExponentialGrowth : DecayKind::ExponentialDecay;
        e.s_star = bc.s_star;
        e.poly_power = 0.0;
        e.coefficient = bc.c_exp;
        e.hypothesis_ok = norm2(bc.c_exp) > kZeroCoefficient;
        return e;
    }
    e.kind = DecayKind::BranchPointDecay;
    e.s_star = p.mu1();
    e.poly_power = static_cast<double>(bc.n) / bc.m - 1.0;
    e.coefficient = bc.c_bp;
    e.hypothesis_ok = norm2(bc.c_bp) > kZeroCoefficient;
    return e;
}

// ---------------------------------------------------------------- fitting

std::vector<double> geometric_grid(double t_lo, double t_hi, int per_decade) {
    if (!(t_lo > 0 && t_hi > t_lo) || per_decade < 1) throw ConfigError("geometric grid needs 0 < t_lo < t_hi");
    const int n = std::max(2, static_cast<int>(std::ceil(std::log10(t_hi / t_lo) * per_decade)) + 1);
    std::vector<double> t(n);
    const double r = std::log(t_hi / t_lo) / (n - 1);
    for (int i = 0; i < n; ++i) t[i] = t_lo * std::exp(r * i);
    t.back() = t_hi;
    return t;
}

DecayFit fit_decay_exponent(const std::vector<double>& t, const std::vector<double>& log_abs, double t_lo,
                            double t_hi, std::optional<cplx> known_exponential) {
    if (t.size() != log_abs.size()) throw DegenerateInput("time and value series differ in length");
    std::vector<double> x, y;
    const double rate = known_exponential ? known_exponential->real() : 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo || t[i] > t_hi || !(t[i] > 0) || !std::isfinite(log_abs[i])) continue;
        x.push_back(std::log(t[i]));
        y.push_back(log_abs[i] - rate * t[i]);
    }
    if (x.size() < 8) throw WindowTooNarrow("fewer than 8 samples in the fitting window");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    DecayFit f;
    f.samples = static_cast<int>(x.size());
    f.power = sxy / sxx;
    double res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (my + f.power * (x[i] - mx));
        res += e * e;
    }
    f.confidence = syy > 0 ? 1.0 - res / syy : 1.0;
    return f;
}

}  // namespace subspectra
