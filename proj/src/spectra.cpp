#include "subspectra/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <boost/math/tools/minima.hpp>

#include "parallel.hpp"
#include "subspectra/errors.hpp"

namespace subspectra {

const char* to_string(ModelKind k) {
    switch (k) {
        case ModelKind::Regular: return "regular";
        case ModelKind::SsScalar: return "ss-scalar";
        case ModelKind::SsSystem: return "ss-system";
        case ModelKind::CaScalar: return "ca-scalar";
        case ModelKind::CaSystem: return "ca-system";
        case ModelKind::Subdiffusion: return "subdiffusion";
    }
    return "?";
}

ModelKind parse_model_kind(const std::string& s) {
    for (auto k : {ModelKind::Regular, ModelKind::SsScalar, ModelKind::SsSystem, ModelKind::CaScalar,
                   ModelKind::CaSystem, ModelKind::Subdiffusion})
        if (s == to_string(k)) return k;
    throw ConfigError("unknown model '" + s + "'");
}

const char* to_string(PointSource s) {
    switch (s) {
        case PointSource::polyroot: return "polyroot";
        case PointSource::continuation: return "continuation";
        case PointSource::asymptotic: return "asymptotic";
        case PointSource::scaled_curve: return "scaled-curve";
    }
    return "?";
}

double compute_lambda_sup(const std::vector<SpectrumPoint>& pts) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : pts)
        if (p.cls != SpectrumClass::OutsideBranch) best = std::max(best, p.s.real());
    return best;
}

namespace {

bool is_model_b(ModelKind k) { return k == ModelKind::CaScalar || k == ModelKind::CaSystem; }

std::vector<std::pair<std::string, std::string>> echo(const ModelSpec& m) {
    std::vector<std::pair<std::string, std::string>> e;
    e.emplace_back("model", to_string(m.kind));
    auto num = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    const bool b = is_model_b(m.kind);
    const bool scalar = b ? m.b.scalar : m.a.scalar;
    const ReactionMatrix& A = b ? m.b.reaction : m.a.reaction;
    if (scalar) {
        e.emplace_back("a", num(b ? m.b.a : m.a.a));
    } else {
        e.emplace_back("A", num(A.a1) + "," + num(A.a2) + "," + num(A.a3) + "," + num(A.a4));
        e.emplace_back("case", to_string(A.tag));
    }
    e.emplace_back("d", num(b ? m.b.d : m.a.d));
    if (m.kind != ModelKind::Regular) {
        const auto& ex = b ? m.b.exponent : m.a.exponent;
        e.emplace_back("gamma", ex.gamma_string());
        e.emplace_back("theta1", num(b ? m.b.b1.cut_angle : m.a.branch.cut_angle));
        if (b && !m.b.scalar) e.emplace_back("theta2", num(m.b.b2.cut_angle));
    }
    return e;
}

}  // namespace

SpectrumScan scan(const ModelSpec& model, const std::vector<double>& q_grid, int jobs) {
    for (std::size_t i = 1; i < q_grid.size(); ++i)
        if (!(q_grid[i] > q_grid[i - 1])) throw DegenerateInput("wavenumber grid must be ascending");
    SpectrumScan out;
    out.model = model.kind;
    out.grid = q_grid;
    out.parameters = echo(model);

    if (is_model_b(model.kind)) {
        try {
            const auto rb = roots_model_b(model.b, q_grid, model.continuation);
            const PointSource src = model.b.scalar ? PointSource::polyroot : PointSource::continuation;
            for (const auto& row : rb.per_q)
                for (const auto& r : row.roots)
                    out.points.push_back({row.q, r.s, r.cls, r.multiplicity, src});
            out.breaks = rb.breaks;
            out.warnings = rb.warnings;
        } catch (const Error& e) {
            out.errors.push_back({q_grid.empty() ? 0.0 : q_grid.front(), e.what()});
        }
        out.lambda_sup = compute_lambda_sup(out.points);
        return out;
    }

    ModelAParams p = model.a;
    if (model.kind == ModelKind::Subdiffusion) {
        p.scalar = true;
        p.a = 0.0;
    }
    if (model.kind == ModelKind::Regular) p.exponent = AnomalousExponent();

    std::vector<std::vector<SpectrumPoint>> per_q(q_grid.size());
    std::vector<std::vector<std::string>> warn(q_grid.size());
    std::vector<std::string> err(q_grid.size());
    detail::parallel_chunks(q_grid.size(), jobs, [&](std::size_t lo, std::size_t hi) {
        std::vector<cplx> warm;
        for (std::size_t i = lo; i < hi; ++i) {
            const double q = q_grid[i];
            try {
                const bool use_warm = !warm.empty() && 2 * p.exponent.m > 128;
                const auto r = roots_model_a(p, q, use_warm ? &warm : nullptr);
                warm = r.raw;
                for (const auto& c : r.roots)
                    per_q[i].push_back({q, c.s, c.cls, c.multiplicity, PointSource::polyroot});
                warn[i] = r.warnings;
            } catch (const Error& e) {
                err[i] = e.what();
                warm.clear();
            }
        }
    });
    for (std::size_t i = 0; i < q_grid.size(); ++i) {
        out.points.insert(out.points.end(), per_q[i].begin(), per_q[i].end());
        out.warnings.insert(out.warnings.end(), warn[i].begin(), warn[i].end());
        if (!err[i].empty()) out.errors.push_back({q_grid[i], err[i]});
    }
    out.lambda_sup = compute_lambda_sup(out.points);
    return out;
}

// ---------------------------------------------------------------- asymptotics

namespace {

SpectrumClass classify_by_arg(double a, double theta1) {
    if (!(a > -pi + theta1 && a < pi + theta1)) return SpectrumClass::OutsideBranch;
    return std::abs(a) < pi / 2 ? SpectrumClass::Spectrum : SpectrumClass::PseudoSpectrum;
}

AsymptoticRoot large_root(double coef, double rate, double delta, double q, double theta1) {
    // Leading term (-coef q^2)^{1/(1-delta)} on the ray pi/(1-delta), shifted by rate/(1-delta).
    const double g = 1 - delta;
    const cplx lead = std::polar(std::pow(coef * q * q, 1.0 / g), pi / g);
    AsymptoticRoot r;
    r.s = lead + rate / g;
    const double a = pi / g + std::arg(r.s / lead);
    r.cls = classify_by_arg(a, theta1);
    return r;
}

AsymptoticRoot small_root(cplx y, double delta, double q, double theta1) {
    AsymptoticRoot r;
    const double ay = std::arg(y);
    r.s = std::pow(q, -2.0 / delta) * std::polar(std::pow(std::abs(y), 1.0 / delta), ay / delta);
    r.cls = classify_by_arg(ay / delta, theta1);
    return r;
}

}  // namespace

AsymptoticA asymptotic_model_a(const ModelAParams& p, double q) {
    if (p.exponent.regular()) throw DegenerateInput("large-wavenumber approximants need gamma < 1");
    if (p.d == 0.0) throw DegenerateQuadratic("d = 0 degenerates the small-root quadratic");
    const double delta = p.exponent.delta(), th = p.branch.cut_angle;
    AsymptoticA out;
    if (p.scalar) {
        out.s_inf1 = large_root(p.d, p.a, delta, q, th);
        out.s0_plus = small_root(cplx(p.a / p.d), delta, q, th);
        out.s_inf2.defined = out.s0_minus.defined = false;
        return out;
    }
    const auto& A = p.reaction;
    out.s_inf1 = large_root(1.0, A.a1, delta, q, th);
    out.s_inf2 = large_root(p.d, A.a4, delta, q, th);
    // d y^2 - (a1 d + a4) y + det A = 0.
    const double b = -(A.a1 * p.d + A.a4), c = A.det();
    const cplx disc = std::sqrt(cplx(b * b - 4 * p.d * c));
    const cplx y1 = (-b + disc) / (2 * p.d), y2 = (-b - disc) / (2 * p.d);
    const bool y1_upper = y1.imag() > y2.imag() || (y1.imag() == y2.imag() && y1.real() >= y2.real());
    out.s0_plus = small_root(y1_upper ? y1 : y2, delta, q, th);
    out.s0_minus = small_root(y1_upper ? y2 : y1, delta, q, th);
    return out;
}

// ---------------------------------------------------------------- scaled curve

ScaledCurve scaled_unstable_curve(const ModelAParams& p, std::vector<double> kappa_grid) {
    ScaledCurve out;
    if (p.scalar) return out;
    const auto& A = p.reaction;
    double dc = 0.0;
    try {
        dc = critical_ratio(A);
    } catch (const NotTuringCapable&) {
        return out;
    }
    if (!(p.d > dc)) return out;
    // d k^4 - (a1 d + a4) k^2 + det A < 0 on the unstable band.
    const auto band = solve_real_quadratic(p.d, -(A.a1 * p.d + A.a4), A.det());
    if (!band.real || !(band.larger > 0)) return out;
    out.kappa_sq_minus = std::max(band.smaller, 0.0);
    out.kappa_sq_plus = band.larger;
    if (kappa_grid.empty()) {
        const int n = 2001;
        const double lo = std::sqrt(out.kappa_sq_minus), hi = std::sqrt(out.kappa_sq_plus);
        for (int i = 1; i <= n; ++i) kappa_grid.push_back(lo + (hi - lo) * i / (n + 1));
    }
    // Include the maximizer of the real unstable root so the curve attains its peak.
    auto top_real = [&](double k) {
        double best = -1.0;
        for (auto v : regular_roots(A, p.d, k))
            if (std::abs(v.imag()) <= 1e-12 * (1 + std::abs(v)) && v.real() > best) best = v.real();
        return best;
    };
    {
        const double lo = std::sqrt(out.kappa_sq_minus), hi = std::sqrt(out.kappa_sq_plus);
        const auto r = boost::math::tools::brent_find_minima([&](double k) { return -top_real(k); }, lo, hi,
                                                             std::numeric_limits<double>::digits);
        kappa_grid.insert(std::upper_bound(kappa_grid.begin(), kappa_grid.end(), r.first), r.first);
    }
    const double delta = p.exponent.delta();
    out.q_min = std::numeric_limits<double>::infinity();
    for (double k : kappa_grid) {
        const double k2 = k * k;
        if (!(k2 > out.kappa_sq_minus && k2 < out.kappa_sq_plus)) continue;
        const double s = top_real(k);
        if (!(s > 0)) continue;
        const double q = k * std::pow(s, -delta / 2);
        out.kappa.push_back(k);
        out.q.push_back(q);
        out.s.push_back(s);
        out.q_min = std::min(out.q_min, q);
    }
    if (out.q.empty()) out.q_min = 0.0;
    return out;
}

// ---------------------------------------------------------------- convergence

namespace {

double distance_to_ray(cplx s, cplx origin, double angle) {
    const cplx dir = std::polar(1.0, angle);
    const cplx w = s - origin;
    const double t = std::real(w * std::conj(dir));
    if (t <= 0) return std::abs(w);
    return std::abs(w - t * dir);
}

double cut_distance(const ModelSpec& m, cplx s) {
    if (is_model_b(m.kind)) {
        const auto& b = m.b;
        double d1 = distance_to_ray(s, b.b1.branch_point, pi + b.b1.orientation * b.b1.cut_angle);
        if (b.scalar) return d1;
        return std::min(d1, distance_to_ray(s, b.b2.branch_point, pi + b.b2.orientation * b.b2.cut_angle));
    }
    const auto& br = m.a.branch;
    return distance_to_ray(s, br.branch_point, pi + br.orientation * br.cut_angle);
}

}  // namespace

std::vector<ConvergenceEntry> convergence_distance(const ModelSpec& model,
                                                   const std::vector<AnomalousExponent>& exponents,
                                                   const Window& window, const std::vector<double>& q_grid,
                                                   int reference_refine, int jobs) {
    const bool b = is_model_b(model.kind);
    const ReactionMatrix& A = b ? model.b.reaction : model.a.reaction;
    const double d = b ? model.b.d : model.a.d;
    const bool scalar = b ? model.b.scalar : model.a.scalar;
    const double a = b ? model.b.a : model.a.a;

    std::vector<cplx> reference;
    const int refine = std::max(reference_refine, 1);
    for (std::size_t i = 0; i < q_grid.size(); ++i) {
        const int steps = (i + 1 < q_grid.size()) ? refine : 1;
        for (int k = 0; k < steps; ++k) {
            const double q = (k == 0) ? q_grid[i] : q_grid[i] + (q_grid[i + 1] - q_grid[i]) * k / refine;
            std::vector<cplx> r = scalar ? std::vector<cplx>{cplx(a - d * q * q)} : regular_roots(A, d, q);
            for (auto s : r)
                if (window.contains(s)) reference.push_back(s);
        }
    }

    std::vector<ConvergenceEntry> out(exponents.size());
    detail::parallel_chunks(exponents.size(), jobs, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            ModelSpec m = model;
            if (b) m.b.exponent = exponents[i];
            else m.a.exponent = exponents[i];
            ConvergenceEntry& e = out[i];
            e.gamma = exponents[i].gamma_string();
            const SpectrumScan sc = scan(m, q_grid, 1);
            double worst = -1.0;
            int count = 0;
            for (const auto& pnt : sc.points) {
                if (pnt.cls == SpectrumClass::OutsideBranch || !window.contains(pnt.s)) continue;
                if (!exponents[i].regular() && cut_distance(m, pnt.s) < 1e-6) continue;
                ++count;
                double best = std::numeric_limits<double>::infinity();
                for (auto r : reference) best = std::min(best, std::abs(r - pnt.s));
                if (best > worst) {
                    worst = best;
                    e.worst_q = pnt.q;
                    e.worst_s = pnt.s;
                }
            }
            if (count == 0) {
                e.note = "EmptyIntersection: no subdiffusion points in the window";
            } else if (reference.empty()) {
                e.note = "no regular points in the window";
            } else {
                e.distance = worst;
            }
        }
    });
    return out;
}

// ---------------------------------------------------------------- regions

RegionLabel region_classify(const ReactionMatrix& A, double delta, double d, double theta1) {
    if (!(delta > 0 && delta < 1)) throw DegenerateInput("delta must lie in (0,1)");
    if (!(d > 0)) throw DegenerateInput("d must be positive");
    RegionLabel r;
    const auto t = thresholds_model_a(A, delta, theta1);
    r.d_c = t.d_c;
    r.d_delta_inf = t.d_delta_inf;
    r.d_tilde = t.d_tilde;
    r.sinf_in_branch = delta < t.delta_inf;

    const double b = -(A.a1 * d + A.a4), c = A.det();
    const double disc = b * b - 4 * d * c;
    int idx = 3;
    if (disc >= 0) {
        const auto y = solve_real_quadratic(d, b, c);
        if (y.smaller > 0) {
            idx = 0;
        } else {
            // Negative real y maps to the ray pi/delta.
            idx = classify_by_arg(pi / delta, theta1) == SpectrumClass::OutsideBranch ? 3 : 2;
        }
    } else {
        const cplx yp = cplx(-b, std::sqrt(-disc)) / (2 * d);
        const auto cls = classify_by_arg(std::arg(yp) / delta, theta1);
        idx = cls == SpectrumClass::Spectrum ? 1 : cls == SpectrumClass::PseudoSpectrum ? 2 : 3;
    }
    r.s0_real_positive = idx == 0;
    r.s0_complex_unstable = idx == 1;
    r.s0_pseudo = idx == 2;
    r.s0_outside = idx == 3;
    r.label = static_cast<char>((r.sinf_in_branch ? 'E' : 'A') + idx);
    return r;
}

}  // namespace subspectra
