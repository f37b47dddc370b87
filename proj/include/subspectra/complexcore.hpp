#pragma once
// Branch-aware complex powers and the special functions of subdiffusion:
// Mittag-Leffler and the Wright-type Green's function.
#include <complex>
#include <numbers>

namespace subspectra {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

// A branch point with a straight cut leaving it at angle pi + orientation*cut_angle.
// Members are points whose argument about the branch point lies in
// (-pi + orientation*cut_angle, pi + orientation*cut_angle).
struct BranchSpec {
    cplx branch_point{0.0, 0.0};
    double cut_angle = pi / 2;
    int orientation = +1;

    BranchSpec() = default;
    BranchSpec(cplx point, double angle, int orient);

    double lower() const { return -pi + orientation * cut_angle; }
    double upper() const { return pi + orientation * cut_angle; }
};

inline constexpr double kCutProximity = 1e-9;

struct Membership {
    bool inside = false;
    bool near_cut = false;  // branch argument within kCutProximity of either cut side
    bool right_half = false;  // Re s > Re branch_point
    double arg = 0.0;         // branch-adjusted argument, meaningful when inside
};

Membership membership(cplx s, const BranchSpec& b);
bool in_branch(cplx s, const BranchSpec& b);

// Branch-adjusted argument of s - branch_point; throws BranchViolation off the domain.
double branch_arg(cplx s, const BranchSpec& b);

// |s - s0|^p exp(i p arg_b(s - s0)).
cplx principal_power(cplx s, double p, const BranchSpec& b);

// 1/Gamma(x), with the analytic value 0 at the poles.
double rgamma(double x);

enum class MLRegime { Exponential, Series, Asymptotic, Integral };

struct MLResult {
    cplx value;
    MLRegime regime = MLRegime::Series;
    double error_estimate = 0.0;
    // Set when |z| is in the cross-check band and the series and asymptote
    // disagree by more than 1%.
    bool overlap_warning = false;
    double overlap_disagreement = 0.0;
};

MLResult mittag_leffler(double gamma, cplx z, double tol = 1e-12);

// Auto uses the series and falls back to the integral form once the series cancels.
enum class GreenMethod { Auto, Series, Asymptotic, Integral };

struct GreenResult {
    double value = 0.0;
    double truncation_bound = 0.0;
    GreenMethod method_used = GreenMethod::Series;
};

// Fundamental solution of u_t = d D^{1-gamma} u_xx started from a point mass.
GreenResult green_subdiffusion(double x, double t, double d, double gamma,
                               GreenMethod method = GreenMethod::Auto);

// Large-time limit of t^{gamma/2} Phi(0, t).
double green_origin_limit(double d, double gamma);

}  // namespace subspectra
