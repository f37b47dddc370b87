#include "subspectra/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "subspectra/errors.hpp"
#include "subspectra/turing.hpp"

namespace subspectra {

const char* to_string(ReactionCase c) {
    switch (c) {
        case ReactionCase::cc: return "cc";
        case ReactionCase::nr: return "nr";
        default: return "other";
    }
}

const char* to_string(SpectrumClass c) {
    switch (c) {
        case SpectrumClass::Spectrum: return "Spectrum";
        case SpectrumClass::PseudoSpectrum: return "PseudoSpectrum";
        default: return "OutsideBranch";
    }
}

namespace {

// Roots of s^2 + b s + c avoiding cancellation.
std::pair<cplx, cplx> quadratic_roots(cplx b, cplx c) {
    const cplx disc = std::sqrt(b * b - 4.0 * c);
    const cplx qq = -0.5 * (b + (std::real(std::conj(b) * disc) >= 0 ? disc : -disc));
    if (qq == cplx(0.0)) return {0.0, 0.0};
    return {qq, c / qq};
}

}  // namespace

ReactionMatrix::ReactionMatrix(double a1_, double a2_, double a3_, double a4_)
    : a1(a1_), a2(a2_), a3(a3_), a4(a4_) {
    const double tr = trace(), dt = det();
    const double disc = tr * tr - 4 * dt;
    if (disc < 0) {
        mu1 = cplx(tr / 2, std::sqrt(-disc) / 2);
        mu2 = std::conj(mu1);
        tag = (tr < 0 && dt > 0) ? ReactionCase::cc : ReactionCase::other;
    } else {
        const double sq = std::sqrt(disc);
        const double big = (tr >= 0) ? (tr + sq) / 2 : (tr - sq) / 2;
        const double small = (big != 0.0) ? dt / big : 0.0;
        mu1 = std::max(big, small);
        mu2 = std::min(big, small);
        tag = (mu1.real() < 0 && disc > 0) ? ReactionCase::nr : ReactionCase::other;
    }
    auto column = [&](cplx mu) -> Eigen::Vector2cd {
        if (a2 != 0.0) return {cplx(a2), mu - a1};
        if (a3 != 0.0) return {mu - a4, cplx(a3)};
        return std::abs(mu - a1) <= std::abs(mu - a4) ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
    };
    P.col(0) = column(mu1);
    P.col(1) = column(mu2);
    Pinv = P.inverse();
}

Eigen::Matrix2d ReactionMatrix::matrix() const {
    Eigen::Matrix2d m;
    m << a1, a2, a3, a4;
    return m;
}

AnomalousExponent::AnomalousExponent(int ell_, int m_) : ell(ell_), m(m_) {
    if (m < 1 || ell < 0 || ell >= m) throw ConfigError("exponent needs 0 <= ell < m");
    if (std::gcd(ell, m) != 1) throw ConfigError("exponent must be a reduced fraction");
}

AnomalousExponent AnomalousExponent::from_gamma(int num, int den) {
    if (den < 1 || num < 1 || num > den) throw ConfigError("gamma must be a fraction in (0,1]");
    if (std::gcd(num, den) != 1) throw ConfigError("gamma must be given as a reduced fraction");
    if (num == den) return AnomalousExponent(0, 1);
    return AnomalousExponent(den - num, den);
}

AnomalousExponent AnomalousExponent::parse_gamma(const std::string& text) {
    const auto slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const int v = std::stoi(text, &used);
            if (used != text.size() || v != 1) throw ConfigError("gamma must be a fraction like 5/6");
            return AnomalousExponent(0, 1);
        }
        const std::string a = text.substr(0, slash), b = text.substr(slash + 1);
        const int num = std::stoi(a, &used);
        if (used != a.size()) throw ConfigError("bad gamma numerator");
        const int den = std::stoi(b, &used);
        if (used != b.size()) throw ConfigError("bad gamma denominator");
        return from_gamma(num, den);
    } catch (const std::logic_error&) {
        throw ConfigError("cannot parse gamma '" + text + "'");
    }
}

std::string AnomalousExponent::gamma_string() const {
    if (regular()) return "1";
    return std::to_string(m - ell) + "/" + std::to_string(m);
}

ModelAParams ModelAParams::system(const ReactionMatrix& A, double d, AnomalousExponent e, double theta1) {
    if (!(d > 0)) throw ConfigError("diffusion ratio must be positive");
    ModelAParams p;
    p.reaction = A;
    p.d = d;
    p.exponent = e;
    p.branch = BranchSpec(0.0, theta1, +1);
    return p;
}

ModelAParams ModelAParams::scalar_model(double a, double d, AnomalousExponent e, double theta1) {
    if (!(d >= 0)) throw ConfigError("diffusivity must be non-negative");
    ModelAParams p;
    p.scalar = true;
    p.a = a;
    p.d = d;
    p.exponent = e;
    p.branch = BranchSpec(0.0, theta1, +1);
    return p;
}

ModelBParams ModelBParams::system(const ReactionMatrix& A, double d, AnomalousExponent e, double theta1,
                                  double theta2) {
    if (!(d > 0)) throw ConfigError("diffusion ratio must be positive");
    if (A.mu1 == A.mu2) throw DegenerateInput("model B needs distinct reaction eigenvalues");
    ModelBParams p;
    p.reaction = A;
    p.d = d;
    p.exponent = e;
    Eigen::Matrix2cd D = Eigen::Matrix2cd::Zero();
    D(0, 0) = 1.0;
    D(1, 1) = d;
    p.dbar = A.Pinv * D * A.P;
    const int o1 = (A.tag == ReactionCase::cc) ? -1 : +1;
    p.b1 = BranchSpec(A.mu1, theta1, o1);
    p.b2 = BranchSpec(A.mu2, theta2, +1);
    return p;
}

ModelBParams ModelBParams::scalar_model(double a, double d, AnomalousExponent e, double theta1) {
    if (!(d >= 0)) throw ConfigError("diffusivity must be non-negative");
    ModelBParams p;
    p.scalar = true;
    p.a = a;
    p.d = d;
    p.exponent = e;
    p.dbar = Eigen::Matrix2cd::Zero();
    p.dbar(0, 0) = d;
    p.b1 = BranchSpec(a, theta1, +1);
    p.b2 = p.b1;
    return p;
}

bool ModelBParams::in_domain(cplx s) const {
    return in_branch(s, b1) && (scalar || in_branch(s, b2));
}

// ---------------------------------------------------------------- regular

cplx eval_regular(const ReactionMatrix& A, double d, cplx s, double q) {
    const double q2 = q * q;
    return (s + q2 - A.a1) * (s + d * q2 - A.a4) - A.a2 * A.a3;
}

cplx eval_regular_scalar(double a, double d, cplx s, double q) { return s + d * q * q - a; }

std::vector<cplx> regular_roots(const ReactionMatrix& A, double d, double q) {
    const double q2 = q * q;
    const double b = q2 + d * q2 - A.a1 - A.a4;
    const double c = (q2 - A.a1) * (d * q2 - A.a4) - A.a2 * A.a3;
    auto [r1, r2] = quadratic_roots(b, c);
    return {r1, r2};
}

// ---------------------------------------------------------------- model A

cplx eval_ss(const ModelAParams& p, cplx s, double q) {
    const double q2 = q * q;
    if (p.exponent.regular()) {
        return p.scalar ? eval_regular_scalar(p.a, p.d, s, q) : eval_regular(p.reaction, p.d, s, q);
    }
    const cplx sd = principal_power(s, p.exponent.delta(), p.branch);
    if (p.scalar) return s + p.d * q2 * sd - p.a;
    const auto& A = p.reaction;
    return (s + sd * q2 - A.a1) * (s + sd * p.d * q2 - A.a4) - A.a2 * A.a3;
}

std::vector<cplx> model_a_polynomial(const ModelAParams& p, double q) {
    const int m = p.exponent.m, l = p.exponent.ell;
    const double q2 = q * q;
    if (p.scalar) {
        std::vector<cplx> c(m + 1, 0.0);
        c[m] += 1.0;
        c[l] += p.d * q2;
        c[0] -= p.a;
        return c;
    }
    const auto& A = p.reaction;
    std::vector<cplx> c(2 * m + 1, 0.0);
    c[2 * m] += 1.0;
    c[m + l] += q2 + p.d * q2;
    c[m] += -A.a1 - A.a4;
    c[2 * l] += p.d * q2 * q2;
    c[l] += -A.a4 * q2 - A.a1 * p.d * q2;
    c[0] += A.a1 * A.a4 - A.a2 * A.a3;
    return c;
}

SpectrumClass classify_model_a(const ModelAParams& p, cplx z, bool* near_cut) {
    if (near_cut) *near_cut = false;
    if (p.exponent.regular()) return SpectrumClass::Spectrum;
    if (z == cplx(0.0)) return SpectrumClass::OutsideBranch;
    const int m = p.exponent.m;
    const double th = p.branch.cut_angle;
    const double a = std::arg(z);
    const double lo = (-pi + th) / m, hi = (pi + th) / m;
    if (near_cut) *near_cut = std::min(std::abs(a - lo), std::abs(hi - a)) * m < kCutProximity;
    if (!(a > lo && a < hi)) return SpectrumClass::OutsideBranch;
    return std::abs(a * m) < pi / 2 ? SpectrumClass::Spectrum : SpectrumClass::PseudoSpectrum;
}

RootsA roots_model_a(const ModelAParams& p, double q, const std::vector<cplx>* warm_start) {
    RootsA out;
    const bool reaction_zero =
        p.scalar ? p.a == 0.0 : (p.reaction.a1 == 0 && p.reaction.a2 == 0 && p.reaction.a3 == 0 && p.reaction.a4 == 0);
    if (q == 0.0 && reaction_zero) throw DegenerateInput("zero wavenumber with zero reaction terms");

    if (p.exponent.regular()) {
        std::vector<cplx> r = p.scalar ? std::vector<cplx>{cplx(p.a - p.d * q * q)} : regular_roots(p.reaction, p.d, q);
        for (auto s : r) {
            ClassifiedRoot c;
            c.s = s;
            c.z = s;
            c.cls = SpectrumClass::Spectrum;
            out.roots.push_back(c);
        }
        return out;
    }

    const auto coeffs = model_a_polynomial(p, q);
    PolyRootOptions opt;
    opt.warm_start = warm_start;
    const auto z = poly_roots(coeffs, opt);
    out.raw = z;

    // Cluster roots closer than 1e-7 into one root with summed multiplicity.
    const std::size_t n = z.size();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(z[i] - z[j]) < 1e-7) parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
    std::vector<std::vector<cplx>> groups(n);
    for (std::size_t i = 0; i < n; ++i) groups[find(static_cast<int>(i))].push_back(z[i]);
    const int m = p.exponent.m;
    for (auto& g : groups) {
        if (g.empty()) continue;
        cplx centre = 0.0;
        for (auto v : g) centre += v;
        centre /= static_cast<double>(g.size());
        double radius = 0.0;
        for (auto v : g) radius = std::max(radius, std::abs(v - centre));
        ClassifiedRoot c;
        c.z = centre;
        c.s = std::polar(std::pow(std::abs(centre), m), m * std::arg(centre));
        c.multiplicity = static_cast<int>(g.size());
        c.cluster_radius = radius;
        c.cls = classify_model_a(p, centre, &c.near_cut);
        if (c.multiplicity > 1) {
            std::ostringstream w;
            w << "merged root cluster of multiplicity " << c.multiplicity << " (radius " << radius
              << ") at q=" << q << "; coefficients near this root are ill-conditioned";
            out.warnings.push_back(w.str());
        }
        if (c.near_cut) out.warnings.push_back("root within 1e-9 rad of the branch cut at q=" + std::to_string(q));
        out.roots.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------- model B

cplx eval_ca2_on_sheet(const ModelBParams& p, cplx s, double q, double arg1, double arg2, cplx* derivative) {
    const double g = p.exponent.gamma();
    const double q2 = q * q;
    const cplx w1 = s - p.mu1();
    const cplx P1 = std::pow(std::abs(w1), g) * cplx(std::cos(g * arg1), std::sin(g * arg1));
    const cplx dP1 = g * P1 / w1;
    if (p.scalar) {
        if (derivative) *derivative = dP1;
        return P1 + p.d * q2;
    }
    const cplx w2 = s - p.mu2();
    const cplx P2 = std::pow(std::abs(w2), g) * cplx(std::cos(g * arg2), std::sin(g * arg2));
    const cplx dP2 = g * P2 / w2;
    const cplx f1 = P1 + p.dbar(0, 0) * q2, f2 = P2 + p.dbar(1, 1) * q2;
    if (derivative) *derivative = dP1 * f2 + f1 * dP2;
    return f1 * f2 - p.dbar(0, 1) * p.dbar(1, 0) * q2 * q2;
}

cplx eval_ca2(const ModelBParams& p, cplx s, double q) {
    if (p.exponent.regular()) {
        const double q2 = q * q;
        if (p.scalar) return s - p.a + p.d * q2;
        return (s - p.mu1() + p.dbar(0, 0) * q2) * (s - p.mu2() + p.dbar(1, 1) * q2) -
               p.dbar(0, 1) * p.dbar(1, 0) * q2 * q2;
    }
    const double a1 = branch_arg(s, p.b1);
    const double a2 = p.scalar ? a1 : branch_arg(s, p.b2);
    return eval_ca2_on_sheet(p, s, q, a1, a2);
}

SpectrumClass classify_model_b(const ModelBParams& p, cplx s) {
    if (p.exponent.regular()) return SpectrumClass::Spectrum;
    if (!p.in_domain(s)) return SpectrumClass::OutsideBranch;
    return s.real() > p.mu1().real() ? SpectrumClass::Spectrum : SpectrumClass::PseudoSpectrum;
}

ScalarCaRoot scalar_ca_root(double a, double d, double gamma, double q, double theta1) {
    if (q == 0.0 || d == 0.0) return {cplx(a), SpectrumClass::OutsideBranch};
    const double r = std::pow(d * q * q, 1.0 / gamma);
    const cplx s = std::polar(r, pi / gamma) + a;
    if (gamma == 1.0) return {s, SpectrumClass::Spectrum};
    const bool inside = gamma > pi / (pi + theta1);
    if (!inside) return {s, SpectrumClass::OutsideBranch};
    return {s, s.real() > a ? SpectrumClass::Spectrum : SpectrumClass::PseudoSpectrum};
}

namespace {

double wrap_near(double a, double ref) {
    double x = a;
    while (x - ref > pi) x -= 2 * pi;
    while (x - ref <= -pi) x += 2 * pi;
    return x;
}

struct SheetPoint {
    cplx s;
    double arg1, arg2;
};

double residual_scale(const ModelBParams& p, cplx s, double q) {
    const double g = p.exponent.gamma(), q2 = q * q;
    const double m1 = std::pow(std::abs(s - p.mu1()), g), m2 = std::pow(std::abs(s - p.mu2()), g);
    return (m1 + std::abs(p.dbar(0, 0)) * q2) * (m2 + std::abs(p.dbar(1, 1)) * q2) +
           std::abs(p.dbar(0, 1) * p.dbar(1, 0)) * q2 * q2 + 1e-300;
}

// Damped Newton that follows the arguments continuously from the start point.
// With principal = true the arguments are re-mapped into the branch intervals
// at every iterate and the iteration fails if it leaves the domain.
bool newton_sheet(const ModelBParams& p, double q, SheetPoint& pt, bool principal, int iters) {
    SheetPoint cur = pt;
    const cplx m1 = p.mu1(), m2 = p.mu2();
    for (int it = 0; it < iters; ++it) {
        if (principal) {
            const Membership a = membership(cur.s, p.b1);
            const Membership b = p.scalar ? a : membership(cur.s, p.b2);
            if (!a.inside || !b.inside) return false;
            cur.arg1 = a.arg;
            cur.arg2 = b.arg;
        } else {
            cur.arg1 = wrap_near(std::arg(cur.s - m1), cur.arg1);
            cur.arg2 = p.scalar ? cur.arg1 : wrap_near(std::arg(cur.s - m2), cur.arg2);
        }
        cplx df;
        const cplx f = eval_ca2_on_sheet(p, cur.s, q, cur.arg1, cur.arg2, &df);
        if (df == cplx(0.0) || !std::isfinite(std::abs(f))) return false;
        cplx ds = f / df;
        const double dist = p.scalar ? std::abs(cur.s - m1) : std::min(std::abs(cur.s - m1), std::abs(cur.s - m2));
        const double cap = 0.5 * dist;
        if (std::abs(ds) > cap) ds *= cap / std::abs(ds);
        cur.s -= ds;
        if (std::abs(ds) <= 1e-13 * (1.0 + std::abs(cur.s))) {
            if (principal) {
                const Membership a = membership(cur.s, p.b1);
                const Membership b = p.scalar ? a : membership(cur.s, p.b2);
                if (!a.inside || !b.inside) return false;
                cur.arg1 = a.arg;
                cur.arg2 = b.arg;
            } else {
                cur.arg1 = wrap_near(std::arg(cur.s - m1), cur.arg1);
                cur.arg2 = p.scalar ? cur.arg1 : wrap_near(std::arg(cur.s - m2), cur.arg2);
            }
            const cplx fr = eval_ca2_on_sheet(p, cur.s, q, cur.arg1, cur.arg2);
            if (std::abs(fr) > 1e-9 * residual_scale(p, cur.s, q)) return false;
            if (std::min(std::abs(cur.s - m1), std::abs(cur.s - m2)) < 1e-8) return false;
            pt = cur;
            return true;
        }
    }
    return false;
}

bool on_principal_sheet(const ModelBParams& p, const SheetPoint& pt) {
    const bool in1 = pt.arg1 > p.b1.lower() && pt.arg1 < p.b1.upper();
    const bool in2 = p.scalar || (pt.arg2 > p.b2.lower() && pt.arg2 < p.b2.upper());
    return in1 && in2;
}

struct Track {
    SheetPoint pt;
    SheetPoint prev;
    double q = 0, prev_q = 0;
    bool has_prev = false;
    int fails = 0;
    bool alive = true;
    bool ok_now = false;
};

std::vector<cplx> seeds_at(const ModelBParams& p, double q, const ContinuationOptions& opt,
                           std::pair<cplx, cplx> box) {
    std::vector<cplx> seeds;
    const double g = p.exponent.gamma(), q2 = q * q;
    for (auto r : regular_roots(p.reaction, p.d, q)) seeds.push_back(r);
    try {
        const auto tb = thresholds_model_b(p.reaction, g);
        for (auto r : taylor_roots_b(tb, p.reaction, p.d, q)) seeds.push_back(r);
    } catch (const Error&) {
    }
    for (int j = 0; j < 2; ++j) {
        const cplx mu = j == 0 ? p.mu1() : p.mu2();
        const cplx dj = p.dbar(j, j) * q2;
        if (dj == cplx(0.0)) continue;
        const cplx base = std::pow(dj, 1.0 / g);
        for (int sgn : {-1, 1}) seeds.push_back(mu + base * std::polar(1.0, sgn * pi / g));
    }
    const int n = std::max(opt.seed_grid, 2);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double x = box.first.real() + (box.second.real() - box.first.real()) * i / (n - 1);
            const double y = box.first.imag() + (box.second.imag() - box.first.imag()) * k / (n - 1);
            seeds.emplace_back(x, y);
        }
    return seeds;
}

}  // namespace

RootsB roots_model_b(const ModelBParams& p, const std::vector<double>& q_grid, const ContinuationOptions& opt) {
    RootsB out;
    if (q_grid.empty()) throw DegenerateInput("empty wavenumber grid");
    for (std::size_t i = 1; i < q_grid.size(); ++i)
        if (!(q_grid[i] > q_grid[i - 1])) throw DegenerateInput("wavenumber grid must be ascending");
    const double g = p.exponent.gamma();
    if (!p.exponent.regular() && !p.exponent.model_b_range())
        out.warnings.push_back("gamma <= 1/2: outside the range where the branch construction is analysed");

    if (p.scalar || p.exponent.regular()) {
        for (double q : q_grid) {
            RootsBAtQ row{q, {}};
            if (p.scalar) {
                const auto r = scalar_ca_root(p.a, p.d, g, q, p.b1.cut_angle);
                if (q != 0.0 && p.d != 0.0) {
                    ClassifiedRoot c;
                    c.s = r.s;
                    c.cls = r.cls;
                    row.roots.push_back(c);
                }
            } else {
                const double q2 = q * q;
                const cplx b = -(p.mu1() - p.dbar(0, 0) * q2) - (p.mu2() - p.dbar(1, 1) * q2);
                const cplx c = (p.mu1() - p.dbar(0, 0) * q2) * (p.mu2() - p.dbar(1, 1) * q2) -
                               p.dbar(0, 1) * p.dbar(1, 0) * q2 * q2;
                auto [r1, r2] = quadratic_roots(b, c);
                for (auto s : {r1, r2}) {
                    ClassifiedRoot cr;
                    cr.s = s;
                    cr.cls = SpectrumClass::Spectrum;
                    row.roots.push_back(cr);
                }
            }
            out.per_q.push_back(row);
        }
        return out;
    }

    std::pair<cplx, cplx> box;
    if (opt.seed_box) {
        box = *opt.seed_box;
    } else {
        const double im = std::max(std::abs(p.mu1().imag()), std::abs(p.mu2().imag())) + 2.0;
        const double lo = std::min(p.mu1().real(), p.mu2().real()) - 3.0;
        const double hi = std::max(1.0, p.mu1().real() + 1.0);
        box = {cplx(lo, -im), cplx(hi, im)};
    }

    std::vector<Track> tracks;
    const cplx m1 = p.mu1(), m2 = p.mu2();
    for (double q : q_grid) {
        for (auto& t : tracks) t.ok_now = false;
        // Advance the existing tracks.
        for (auto& t : tracks) {
            if (!t.alive) continue;
            SheetPoint start = t.pt;
            if (t.has_prev && t.q != t.prev_q) {
                const double f = (q - t.q) / (t.q - t.prev_q);
                const cplx pred = t.pt.s + (t.pt.s - t.prev.s) * f;
                if (std::abs(pred - t.pt.s) < 0.5 * std::min(std::abs(t.pt.s - m1), std::abs(t.pt.s - m2)))
                    start.s = pred;
            }
            SheetPoint trial = start;
            bool ok = newton_sheet(p, q, trial, false, opt.newton_iterations);
            for (int ref = 1; !ok && ref <= opt.max_refinements; ++ref) {
                const int steps = 1 << ref;
                SheetPoint cur = t.pt;
                ok = true;
                for (int k = 1; k <= steps && ok; ++k) {
                    const double qk = t.q + (q - t.q) * k / steps;
                    ok = newton_sheet(p, qk, cur, false, opt.newton_iterations);
                }
                if (ok) trial = cur;
            }
            if (ok) {
                t.prev = t.pt;
                t.prev_q = t.q;
                t.has_prev = true;
                t.pt = trial;
                t.q = q;
                t.fails = 0;
                t.ok_now = true;
                if (std::abs(t.pt.s) > 1e8 || std::abs(t.pt.arg1) > 6 * pi || std::abs(t.pt.arg2) > 6 * pi) {
                    t.alive = false;
                    t.ok_now = false;
                }
            } else if (++t.fails >= 3) {
                t.alive = false;
                out.breaks.push_back({q, t.pt.s, "ContinuationStall: Newton failed at 3 consecutive grid points"});
            }
        }
        // Drop tracks that merged onto the same point of the same sheet.
        for (std::size_t i = 0; i < tracks.size(); ++i) {
            if (!tracks[i].ok_now) continue;
            for (std::size_t j = i + 1; j < tracks.size(); ++j) {
                if (!tracks[j].ok_now) continue;
                if (std::abs(tracks[i].pt.s - tracks[j].pt.s) < opt.dedupe &&
                    std::abs(tracks[i].pt.arg1 - tracks[j].pt.arg1) < 1e-6 &&
                    std::abs(tracks[i].pt.arg2 - tracks[j].pt.arg2) < 1e-6) {
                    tracks[j].alive = tracks[j].ok_now = false;
                }
            }
        }
        // Fresh seeding on the principal sheet.
        if (q != 0.0) {
            for (cplx seed : seeds_at(p, q, opt, box)) {
                if (!p.in_domain(seed)) continue;
                SheetPoint pt{seed, 0.0, 0.0};
                if (!newton_sheet(p, q, pt, true, opt.newton_iterations)) continue;
                bool dup = false;
                for (auto& t : tracks)
                    if (t.ok_now && std::abs(t.pt.s - pt.s) < opt.dedupe && on_principal_sheet(p, t.pt)) {
                        dup = true;
                        break;
                    }
                if (dup) continue;
                Track t;
                t.pt = pt;
                t.q = q;
                t.ok_now = true;
                tracks.push_back(t);
            }
        }
        RootsBAtQ row{q, {}};
        for (auto& t : tracks) {
            if (!t.ok_now) continue;
            ClassifiedRoot c;
            c.s = t.pt.s;
            c.cls = on_principal_sheet(p, t.pt)
                        ? (c.s.real() > m1.real() ? SpectrumClass::Spectrum : SpectrumClass::PseudoSpectrum)
                        : SpectrumClass::OutsideBranch;
            const Membership a = membership(c.s, p.b1), b = membership(c.s, p.b2);
            c.near_cut = a.near_cut || b.near_cut;
            row.roots.push_back(c);
        }
        out.per_q.push_back(std::move(row));
    }
    return out;
}

}  // namespace subspectra
