#pragma once
// Closed-form instability thresholds for both subdiffusive models.
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "subspectra/dispersion.hpp"

namespace subspectra {

struct RealQuadratic {
    bool real = false;
    double smaller = 0.0, larger = 0.0;
};
// Roots of a x^2 + b x + c without cancellation; a may be zero.
RealQuadratic solve_real_quadratic(double a, double b, double c);

struct ThresholdSetA {
    double d_c = 0.0;             // larger root of the regular threshold quadratic
    double d_c_minus = 0.0;
    double d_delta_inf = 0.0;     // onset of the large-wavenumber instability
    double d_delta_inf_minus = 0.0;
    double d_tilde = 0.0;         // existence threshold of the large-wavenumber pseudo-spectrum
    std::string d_tilde_case;     // "larger-root", "boundary", "smaller-root", "zero"
    double delta = 0.0, theta1 = 0.0;
    double delta_half = 0.0;      // pi / (2 (pi + theta1))
    double delta_full = 0.0;      // pi / (pi + theta1)
    double delta_inf = 0.0;       // theta1 / (pi + theta1)
};

// Regular threshold alone.
double critical_ratio(const ReactionMatrix& A);
ThresholdSetA thresholds_model_a(const ReactionMatrix& A, double delta, double theta1 = pi / 2);

struct ThresholdSetB {
    double gamma = 1.0;
    ReactionCase tag = ReactionCase::other;
    Eigen::Matrix2d C = Eigen::Matrix2d::Identity();
    double det_c = 1.0;
    double beta1_const = 0.0, beta1_slope = 0.0;  // beta1(d) = const + slope * d
    double beta2 = 0.0, beta3 = 0.0;
    double gamma_min = 0.0;
    bool below_gamma_min = false;
    std::optional<double> d_gamma;        // admissible root
    std::optional<double> d_gamma_minus;  // other root, excluded by the sign argument
    std::optional<double> q_gamma_sq;
    std::string reason;

    double beta1(double d) const { return beta1_const + beta1_slope * d; }
};

double gamma_min_cc(const ReactionMatrix& A);
double gamma_min_nr(const ReactionMatrix& A);
ThresholdSetB thresholds_model_b(const ReactionMatrix& A, double gamma);

// h(q^2) = det C d q^4 - (beta2 d + beta3) q^2 + det A.
double taylor_h(const ThresholdSetB& t, const ReactionMatrix& A, double d, double q2);
cplx taylor_dispersion_b(const ThresholdSetB& t, const ReactionMatrix& A, double d, cplx s, double q);
std::vector<cplx> taylor_roots_b(const ThresholdSetB& t, const ReactionMatrix& A, double d, double q);

}  // namespace subspectra
