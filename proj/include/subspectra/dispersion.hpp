#pragma once
// Model parameterizations and the dispersion relations: regular diffusion,
// diffusion-only subdiffusion (model A) and reaction-interleaved
// subdiffusion (model B).
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "subspectra/complexcore.hpp"
#include "subspectra/polyroots.hpp"

namespace subspectra {

enum class ReactionCase { cc, nr, other };
const char* to_string(ReactionCase c);

struct ReactionMatrix {
    double a1 = 0, a2 = 0, a3 = 0, a4 = 0;
    cplx mu1, mu2;  // Re mu1 >= Re mu2; in the complex case Im mu1 > 0
    ReactionCase tag = ReactionCase::other;
    Eigen::Matrix2cd P, Pinv;  // A = P diag(mu1, mu2) Pinv

    ReactionMatrix() = default;
    ReactionMatrix(double a1, double a2, double a3, double a4);

    double trace() const { return a1 + a4; }
    double det() const { return a1 * a4 - a2 * a3; }
    bool turing_stable() const { return trace() < 0 && det() > 0; }
    bool activator_inhibitor() const { return a1 > 0 && a4 < 0; }
    Eigen::Matrix2d matrix() const;
};

// gamma = 1 - ell/m with gcd(ell, m) = 1. ell = 0, m = 1 encodes regular diffusion.
struct AnomalousExponent {
    int ell = 0;
    int m = 1;

    AnomalousExponent() = default;
    AnomalousExponent(int ell, int m);
    // From gamma written as "p/r" (or "1").
    static AnomalousExponent parse_gamma(const std::string& text);
    static AnomalousExponent from_gamma(int num, int den);

    double gamma() const { return 1.0 - static_cast<double>(ell) / m; }
    double delta() const { return static_cast<double>(ell) / m; }
    bool regular() const { return ell == 0; }
    bool model_b_range() const { return gamma() > 0.5; }
    std::string gamma_string() const;
};

struct ModelAParams {
    bool scalar = false;
    double a = 0.0;             // scalar reaction rate
    ReactionMatrix reaction;    // system reaction
    double d = 1.0;             // scalar diffusivity, or ratio for the second species
    AnomalousExponent exponent;
    BranchSpec branch;          // at the origin

    static ModelAParams system(const ReactionMatrix& A, double d, AnomalousExponent e,
                               double theta1 = pi / 2);
    static ModelAParams scalar_model(double a, double d, AnomalousExponent e, double theta1 = pi / 2);
};

struct ModelBParams {
    bool scalar = false;
    double a = 0.0;
    ReactionMatrix reaction;
    double d = 1.0;
    AnomalousExponent exponent;
    Eigen::Matrix2cd dbar;  // Pinv diag(1, d) P; complex in the conjugate-pair case
    BranchSpec b1, b2;      // at mu1 and mu2

    static ModelBParams system(const ReactionMatrix& A, double d, AnomalousExponent e,
                               double theta1 = pi / 2, double theta2 = pi / 2);
    static ModelBParams scalar_model(double a, double d, AnomalousExponent e, double theta1 = pi / 2);

    cplx mu1() const { return scalar ? cplx(a) : reaction.mu1; }
    cplx mu2() const { return scalar ? cplx(a) : reaction.mu2; }
    bool in_domain(cplx s) const;
};

enum class SpectrumClass { Spectrum, PseudoSpectrum, OutsideBranch };
const char* to_string(SpectrumClass c);

struct ClassifiedRoot {
    cplx s;
    cplx z;  // polynomial variable for model A (s = z^m); zero otherwise
    SpectrumClass cls = SpectrumClass::OutsideBranch;
    int multiplicity = 1;
    bool near_cut = false;
    double cluster_radius = 0.0;
};

// Regular relations.
cplx eval_regular(const ReactionMatrix& A, double d, cplx s, double q);
cplx eval_regular_scalar(double a, double d, cplx s, double q);
std::vector<cplx> regular_roots(const ReactionMatrix& A, double d, double q);

// Model A.
cplx eval_ss(const ModelAParams& p, cplx s, double q);
std::vector<cplx> model_a_polynomial(const ModelAParams& p, double q);  // ascending in z

struct RootsA {
    std::vector<ClassifiedRoot> roots;  // every root of the polynomial, clustered
    std::vector<cplx> raw;              // unclustered polynomial roots (warm start for the next q)
    std::vector<std::string> warnings;
};
RootsA roots_model_a(const ModelAParams& p, double q, const std::vector<cplx>* warm_start = nullptr);
SpectrumClass classify_model_a(const ModelAParams& p, cplx z, bool* near_cut = nullptr);

// Model B.
cplx eval_ca2(const ModelBParams& p, cplx s, double q);
// Reduced relation with explicit arguments for s - mu1 and s - mu2 (any sheet).
cplx eval_ca2_on_sheet(const ModelBParams& p, cplx s, double q, double arg1, double arg2,
                       cplx* derivative = nullptr);
SpectrumClass classify_model_b(const ModelBParams& p, cplx s);

struct ContinuationBreak {
    double q;
    cplx s;
    std::string reason;
};

struct RootsBAtQ {
    double q;
    std::vector<ClassifiedRoot> roots;
};

struct ContinuationOptions {
    // Seed box for the dense Newton seeding done at every q; empty means automatic.
    std::optional<std::pair<cplx, cplx>> seed_box;
    int seed_grid = 23;
    int newton_iterations = 60;
    double dedupe = 1e-8;
    int max_refinements = 4;
};

struct RootsB {
    std::vector<RootsBAtQ> per_q;
    std::vector<ContinuationBreak> breaks;
    std::vector<std::string> warnings;
};
RootsB roots_model_b(const ModelBParams& p, const std::vector<double>& q_grid,
                     const ContinuationOptions& opt = {});

struct ScalarCaRoot {
    cplx s;
    SpectrumClass cls;
};
ScalarCaRoot scalar_ca_root(double a, double d, double gamma, double q, double theta1 = pi / 2);

}  // namespace subspectra
