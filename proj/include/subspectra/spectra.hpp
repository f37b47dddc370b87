#pragma once
// Wavenumber scans, large-wavenumber approximants, the rescaled real
// unstable curve, convergence metrics and the (delta, d) region map.
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "subspectra/dispersion.hpp"
#include "subspectra/turing.hpp"

namespace subspectra {

enum class ModelKind { Regular, SsScalar, SsSystem, CaScalar, CaSystem, Subdiffusion };
const char* to_string(ModelKind k);
ModelKind parse_model_kind(const std::string& s);

enum class PointSource { polyroot, continuation, asymptotic, scaled_curve };
const char* to_string(PointSource s);

// One model instance. Regular and model A kinds read `a`; model B kinds read `b`.
struct ModelSpec {
    ModelKind kind = ModelKind::SsSystem;
    ModelAParams a;
    ModelBParams b;
    ContinuationOptions continuation;
};

struct SpectrumPoint {
    double q = 0.0;
    cplx s;
    SpectrumClass cls = SpectrumClass::Spectrum;
    int multiplicity = 1;
    PointSource source = PointSource::polyroot;
};

struct ScanError {
    double q;
    std::string message;
};

struct SpectrumScan {
    ModelKind model = ModelKind::SsSystem;
    std::vector<std::pair<std::string, std::string>> parameters;  // echo of the inputs
    std::vector<double> grid;
    std::vector<SpectrumPoint> points;
    double lambda_sup = -std::numeric_limits<double>::infinity();
    std::vector<ScanError> errors;
    std::vector<std::string> warnings;
    std::vector<ContinuationBreak> breaks;
};

SpectrumScan scan(const ModelSpec& model, const std::vector<double>& q_grid, int jobs = 1);
double compute_lambda_sup(const std::vector<SpectrumPoint>& pts);

struct AsymptoticRoot {
    cplx s;
    SpectrumClass cls = SpectrumClass::OutsideBranch;
    bool defined = true;
};

struct AsymptoticA {
    AsymptoticRoot s_inf1, s_inf2, s0_plus, s0_minus;
};
AsymptoticA asymptotic_model_a(const ModelAParams& p, double q);

struct ScaledCurve {
    std::vector<double> kappa;
    std::vector<double> q;
    std::vector<double> s;  // real and positive
    double q_min = 0.0;
    double kappa_sq_minus = 0.0, kappa_sq_plus = 0.0;
};
// Empty unless d exceeds the regular threshold. An empty kappa grid means 2001
// points spread over the open unstable band.
ScaledCurve scaled_unstable_curve(const ModelAParams& p, std::vector<double> kappa_grid = {});

struct ConvergenceEntry {
    std::string gamma;
    std::optional<double> distance;  // empty when no subdiffusion point falls in the window
    std::string note;
    double worst_q = 0.0;
    cplx worst_s;
};
struct Window {
    double re_lo, re_hi, im_lo, im_hi;
    bool contains(cplx s) const {
        return s.real() >= re_lo && s.real() <= re_hi && s.imag() >= im_lo && s.imag() <= im_hi;
    }
};
// One-sided Hausdorff distance from subdiffusion (pseudo-)spectrum to the
// regular spectrum, both restricted to the window. The regular reference uses
// the grid subdivided `reference_refine` times.
std::vector<ConvergenceEntry> convergence_distance(const ModelSpec& model,
                                                   const std::vector<AnomalousExponent>& exponents,
                                                   const Window& window, const std::vector<double>& q_grid,
                                                   int reference_refine = 1, int jobs = 1);

struct RegionLabel {
    char label = '?';
    bool s0_real_positive = false;
    bool s0_complex_unstable = false;
    bool s0_pseudo = false;
    bool s0_outside = false;
    bool sinf_in_branch = false;
    double d_c = 0, d_delta_inf = 0, d_tilde = 0;
};
RegionLabel region_classify(const ReactionMatrix& A, double delta, double d, double theta1 = pi / 2);

}  // namespace subspectra
