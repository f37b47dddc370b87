#pragma once
// Long-time behaviour of single Fourier modes: partial-fraction and
// branch-point coefficients, decay-law classification, a Grunwald-Letnikov
// time-stepping oracle and log-log decay fitting.
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "subspectra/spectra.hpp"

namespace subspectra {

using Vec2c = std::array<cplx, 2>;

struct FourierInitialData {
    Vec2c u0{cplx(1.0), cplx(0.0)};  // second entry ignored for scalar models
    double q = 1.0;

    static FourierInitialData scalar(cplx u, double q) { return {{u, cplx(0.0)}, q}; }
    static FourierInitialData system(cplx u1, cplx u2, double q) { return {{u1, u2}, q}; }
};

enum class DecayKind { ExponentialGrowth, ExponentialDecay, AlgebraicDecay, BranchPointDecay };
const char* to_string(DecayKind k);

struct DecayEstimate {
    DecayKind kind = DecayKind::AlgebraicDecay;
    cplx s_star;             // dominant exponential rate
    double poly_power = 0.0; // t exponent multiplying exp(s_star t)
    Vec2c coefficient{};
    bool hypothesis_ok = true;  // leading coefficient numerically nonzero
    int components = 1;
    std::vector<std::string> notes;
};

// ---------------------------------------------------------------- model A

// Laplace-domain solution in the polynomial variable z (s = z^m), evaluated directly.
Vec2c psi_model_a(const ModelAParams& p, const FourierInitialData& init, cplx z);

struct PartialFractionA {
    int components = 1;
    int m = 1;
    std::vector<cplx> roots;                    // distinct z roots
    std::vector<int> multiplicity;
    std::vector<SpectrumClass> cls;
    std::vector<std::vector<Vec2c>> alpha;      // alpha[j][k-1]: coefficient of (z - z_j)^{-k}
    bool has_exp = false;
    cplx s_star;
    int exp_multiplicity = 1;
    Vec2c c_exp{};
    Vec2c c_alg{};
    std::vector<std::string> warnings;
    std::vector<std::string> info;

    // Sum of the partial fractions at z.
    Vec2c reconstruct(cplx z) const;
};

PartialFractionA pf_coefficients_a(const ModelAParams& p, const FourierInitialData& init);
DecayEstimate classify_decay_a(const ModelAParams& p, const FourierInitialData& init);

// ---------------------------------------------------------------- model B

// Laplace-domain solution of the diagonalized system at s, on principal branches.
Vec2c psi_model_b(const ModelBParams& p, const FourierInitialData& init, cplx s);

struct BranchCoefficientsB {
    int components = 1;
    int n = 0, m = 1;                  // 1 - gamma = n/m
    std::vector<Vec2c> phi;            // phi[k-1], k = 1..n, at the first branch point
    std::vector<Vec2c> psi;            // same at the second branch point (systems only)
    Vec2c c_bp{};                      // leading branch-point coefficient, power n/m - 1
    std::vector<cplx> roots;           // in-branch roots of the reduced relation
    bool has_exp = false;
    cplx s_star;
    Vec2c c_exp{};
    double extraction_radius = 0.0;
    std::vector<std::string> info;
};

BranchCoefficientsB pf_coefficients_b(const ModelBParams& p, const FourierInitialData& init);
DecayEstimate classify_decay_b(const ModelBParams& p, const FourierInitialData& init);

// ---------------------------------------------------------------- oracle

struct GLOptions {
    int steps_per_tmin = 50;       // h = t_grid.front() / steps_per_tmin
    bool richardson = true;        // rerun at h/2 and compare at three sample times
    double richardson_tolerance = 0.05;
    long max_steps = 8'000'000;
};

struct GLSeries {
    int components = 1;
    std::vector<double> t;
    // Component i equals exp(shift[i] t) * v[i]; shift is zero for model A.
    std::vector<Vec2c> v;
    Vec2c shift{};
    double step = 0.0;
    std::vector<double> check_times;
    double richardson_error = 0.0;  // worst relative disagreement at the check times

    double log_abs(std::size_t i, int comp) const;
    double log_norm(std::size_t i) const;
};

// Evolves one Fourier mode of a regular, model A or model B system.
GLSeries gl_evolve(const ModelSpec& model, const FourierInitialData& init, const std::vector<double>& t_grid,
                   const GLOptions& opt = {});

// Geometric grid with `per_decade` points per decade, both ends included.
std::vector<double> geometric_grid(double t_lo, double t_hi, int per_decade = 40);

struct DecayFit {
    double power = 0.0;
    double confidence = 0.0;  // coefficient of determination
    int samples = 0;
};

// Least-squares slope of log|value| - Re(rate) t against log t over the window.
DecayFit fit_decay_exponent(const std::vector<double>& t, const std::vector<double>& log_abs, double t_lo,
                            double t_hi, std::optional<cplx> known_exponential = std::nullopt);

}  // namespace subspectra
