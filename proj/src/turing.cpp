#include "subspectra/turing.hpp"

#include <cmath>

#include "subspectra/errors.hpp"

namespace subspectra {

RealQuadratic solve_real_quadratic(double a, double b, double c) {
    RealQuadratic r;
    if (a == 0.0) {
        if (b == 0.0) return r;
        r.real = true;
        r.smaller = r.larger = -c / b;
        return r;
    }
    const double disc = b * b - 4 * a * c;
    if (disc < 0) return r;
    const double qq = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    const double x1 = qq / a;
    const double x2 = qq != 0.0 ? c / qq : 0.0;
    r.real = true;
    r.smaller = std::min(x1, x2);
    r.larger = std::max(x1, x2);
    return r;
}

namespace {

// a1^2 d^2 + (4 (a2 a3 - a1 a4) w + 2 a1 a4) d + a4^2 with weight w in [0, 1].
RealQuadratic threshold_quadratic(const ReactionMatrix& A, double w) {
    return solve_real_quadratic(A.a1 * A.a1, 4 * (A.a2 * A.a3 - A.a1 * A.a4) * w + 2 * A.a1 * A.a4, A.a4 * A.a4);
}

}  // namespace

double critical_ratio(const ReactionMatrix& A) {
    if (!(A.a1 + A.a4 < 0 && A.a1 * A.a4 - A.a2 * A.a3 > 0))
        throw NotTuringCapable("reaction matrix is not stable without diffusion");
    const auto f = threshold_quadratic(A, 1.0);
    if (!f.real || !(f.larger > 0)) throw NotTuringCapable("regular threshold quadratic has no positive root");
    // A root with a1 d + a4 <= 0 is a tangency of the wrong sign, not an instability onset.
    if (!(A.a1 * f.larger + A.a4 > 0)) throw NotTuringCapable("no diffusion-driven instability for this matrix");
    return f.larger;
}

ThresholdSetA thresholds_model_a(const ReactionMatrix& A, double delta, double theta1) {
    if (!(delta > 0 && delta < 1)) throw DegenerateInput("delta must lie in (0,1)");
    if (A.a1 == 0.0) throw NotTuringCapable("a1 = 0 leaves the threshold quadratics degenerate");
    if (!(A.a1 + A.a4 < 0 && A.a1 * A.a4 - A.a2 * A.a3 > 0))
        throw NotTuringCapable("reaction matrix is not stable without diffusion");
    ThresholdSetA t;
    t.delta = delta;
    t.theta1 = theta1;
    t.delta_half = pi / (2 * (pi + theta1));
    t.delta_full = pi / (pi + theta1);
    t.delta_inf = theta1 / (pi + theta1);

    const auto f = threshold_quadratic(A, 1.0);
    if (!f.real || !(f.larger > 0) || !(A.a1 * f.larger + A.a4 > 0))
        throw NotTuringCapable("no diffusion-driven instability for this matrix");
    t.d_c = f.larger;
    t.d_c_minus = f.smaller;

    const double c = std::pow(std::cos(pi * delta / 2), 2);
    const auto h = threshold_quadratic(A, c);
    t.d_delta_inf = h.larger;
    t.d_delta_inf_minus = h.smaller;

    const double ct = std::pow(std::cos((pi + theta1) * delta), 2);
    const auto ht = threshold_quadratic(A, ct);
    const double tol = 1e-12;
    if (delta < t.delta_half - tol) {
        t.d_tilde = ht.larger;
        t.d_tilde_case = "larger-root";
    } else if (std::abs(delta - t.delta_half) <= tol) {
        t.d_tilde = -A.a4 / A.a1;
        t.d_tilde_case = "boundary";
    } else if (delta < t.delta_full) {
        t.d_tilde = ht.smaller;
        t.d_tilde_case = "smaller-root";
    } else {
        t.d_tilde = 0.0;
        t.d_tilde_case = "zero";
    }
    return t;
}

double gamma_min_cc(const ReactionMatrix& A) {
    const cplx minus_mu = -A.mu1;
    const double theta = std::abs(std::arg(minus_mu));
    const double x = A.a1 / (std::abs(A.mu1) * std::sin(theta)) + 1.0 / std::tan(theta);
    const double arccot = pi / 2 - std::atan(x);
    return arccot / theta;
}

double gamma_min_nr(const ReactionMatrix& A) {
    const double m1 = A.mu1.real(), m2 = A.mu2.real();
    return std::log((A.a1 - m1) / (A.a1 - m2)) / std::log(m1 / m2);
}

ThresholdSetB thresholds_model_b(const ReactionMatrix& A, double gamma) {
    if (!A.turing_stable()) throw NotTuringCapable("needs tr A < 0 and det A > 0");
    if (A.tag == ReactionCase::other) throw NotTuringCapable("reaction eigenvalues are neither a conjugate pair nor distinct negative reals");
    if (!(gamma > 0 && gamma <= 1)) throw DegenerateInput("gamma must lie in (0,1]");
    ThresholdSetB t;
    t.gamma = gamma;
    t.tag = A.tag;
    Eigen::Matrix2cd L = Eigen::Matrix2cd::Zero();
    L(0, 0) = std::pow(-A.mu1, 1 - gamma);
    L(1, 1) = std::pow(-A.mu2, 1 - gamma);
    const Eigen::Matrix2cd Cc = A.P * L * A.Pinv;
    t.C = Cc.real();
    t.det_c = t.C.determinant();
    const double c1 = t.C(0, 0), c2 = t.C(0, 1), c3 = t.C(1, 0), c4 = t.C(1, 1);
    t.beta1_const = c1;
    t.beta1_slope = c4;
    t.beta2 = A.a1 * c4 - A.a2 * c3;
    t.beta3 = A.a4 * c1 - A.a3 * c2;
    t.gamma_min = A.tag == ReactionCase::cc ? gamma_min_cc(A) : gamma_min_nr(A);

    if (gamma <= t.gamma_min) {
        t.below_gamma_min = true;
        t.reason = "below minimal anomalous exponent";
        return t;
    }
    const double det_ac = A.det() * t.det_c;
    const double b2 = t.beta2, b3 = t.beta3;
    const auto r = solve_real_quadratic(b2 * b2, 2 * b2 * b3 - 4 * det_ac, b3 * b3);
    if (!r.real) {
        t.reason = "critical-ratio quadratic has no real root";
        return t;
    }
    // The admissible root is the one with beta2 d + beta3 > 0 (positive critical wavenumber).
    t.d_gamma = r.larger;
    t.d_gamma_minus = r.smaller;
    t.q_gamma_sq = (b2 * r.larger + b3) / (2 * r.larger * t.det_c);
    return t;
}

double taylor_h(const ThresholdSetB& t, const ReactionMatrix& A, double d, double q2) {
    return t.det_c * d * q2 * q2 - (t.beta2 * d + t.beta3) * q2 + A.det();
}

cplx taylor_dispersion_b(const ThresholdSetB& t, const ReactionMatrix& A, double d, cplx s, double q) {
    const double q2 = q * q, g = t.gamma;
    return s * s + (t.beta1(d) * q2 - A.trace()) / g * s + taylor_h(t, A, d, q2) / (g * g);
}

std::vector<cplx> taylor_roots_b(const ThresholdSetB& t, const ReactionMatrix& A, double d, double q) {
    const double q2 = q * q, g = t.gamma;
    const cplx b = (t.beta1(d) * q2 - A.trace()) / g;
    const cplx c = taylor_h(t, A, d, q2) / (g * g);
    const cplx disc = std::sqrt(b * b - 4.0 * c);
    const cplx qq = -0.5 * (b + (std::real(std::conj(b) * disc) >= 0 ? disc : -disc));
    if (qq == cplx(0.0)) return {0.0, 0.0};
    return {qq, c / qq};
}

}  // namespace subspectra
