// Grunwald-Letnikov time stepping for a single Fourier mode. The memory sum is
// evaluated exactly over the full history with a divide-and-conquer FFT
// convolution, so the cost is O(N log^2 N) for N steps.
#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "subspectra/errors.hpp"
#include "subspectra/timedomain.hpp"

namespace subspectra {

double GLSeries::log_abs(std::size_t i, int comp) const {
    return shift[comp].real() * t[i] + std::log(std::abs(v[i][comp]));
}

double GLSeries::log_norm(std::size_t i) const {
    double hi = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < components; ++c) hi = std::max(hi, log_abs(i, c));
    if (!std::isfinite(hi)) return hi;
    double sum = 0.0;
    for (int c = 0; c < components; ++c) sum += std::exp(2 * (log_abs(i, c) - hi));
    return hi + 0.5 * std::log(sum);
}

namespace {

using Mat2 = Eigen::Matrix2cd;

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// FFT workspace of one size; the planner is not thread-safe, execution is.
struct FftLevel {
    int size = 0;
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr, bwd = nullptr;
    std::vector<cplx> weights_hat;

    explicit FftLevel(int n) : size(n) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        buf = fftw_alloc_complex(n);
        fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftLevel() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
    }
    FftLevel(const FftLevel&) = delete;
    FftLevel& operator=(const FftLevel&) = delete;

    cplx* data() { return reinterpret_cast<cplx*>(buf); }
};

struct Problem {
    int comps = 1;
    double c = 0.0;               // q^2 h^{-alpha}
    Mat2 reaction = Mat2::Zero();  // model A reaction, zero in model B coordinates
    Mat2 diffusion = Mat2::Zero(); // constant diffusion matrix (model A)
    bool time_dependent = false;   // model B: diffusion conjugated by exp(diag(mu) t)
    Mat2 dbar = Mat2::Zero();
    cplx mu1, mu2;
    Vec2c init{};
};

class Stepper {
public:
    Stepper(const Problem& pr, double h, long n_steps) : pr_(pr), h_(h), N_(n_steps) {
        B_ = 64;
        while (B_ < N_ + 1) B_ *= 2;
        w_.resize(B_);
        w_[0] = 1.0;
        u_.assign(B_, Vec2c{});
        hist_.assign(B_, Vec2c{});
        if (!pr_.time_dependent) {
            const Mat2 lhs = Mat2::Identity() / h_ + pr_.c * pr_.diffusion - pr_.reaction;
            lhs_inv_ = lhs.inverse();
        }
    }

    void set_gamma(double gamma) {
        for (long k = 1; k < B_; ++k) w_[k] = w_[k - 1] * (k - 2 + gamma) / k;
    }

    std::vector<Vec2c> run() {
        solve(0, B_);
        u_.resize(N_ + 1);
        return std::move(u_);
    }

private:
    const Problem& pr_;
    double h_;
    long N_, B_;
    std::vector<double> w_;
    std::vector<Vec2c> u_, hist_;
    Mat2 lhs_inv_;
    std::map<long, std::unique_ptr<FftLevel>> levels_;

    Mat2 diffusion_at(long n) const {
        if (!pr_.time_dependent) return pr_.diffusion;
        const double t = n * h_;
        Mat2 M = pr_.dbar;
        M(0, 1) *= std::exp((pr_.mu2 - pr_.mu1) * t);
        M(1, 0) *= std::exp((pr_.mu1 - pr_.mu2) * t);
        return M;
    }

    void step(long n) {
        const Vec2c& prev = n == 0 ? pr_.init : u_[n - 1];
        Eigen::Vector2cd rhs(prev[0] / h_, prev[1] / h_);
        const Eigen::Vector2cd H(hist_[n][0], hist_[n][1]);
        Eigen::Vector2cd x;
        if (pr_.time_dependent) {
            const Mat2 M = diffusion_at(n);
            rhs -= pr_.c * (M * H);
            const Mat2 lhs = Mat2::Identity() / h_ + pr_.c * M;
            x = pr_.comps == 1 ? Eigen::Vector2cd(rhs(0) / lhs(0, 0), 0.0) : Eigen::Vector2cd(lhs.inverse() * rhs);
        } else {
            rhs -= pr_.c * (pr_.diffusion * H);
            x = lhs_inv_ * rhs;
        }
        if (!std::isfinite(std::abs(x(0))) || !std::isfinite(std::abs(x(1))))
            throw ConvergenceFailure("time stepping produced non-finite values");
        u_[n] = {x(0), x(1)};
    }

    FftLevel& level(long size) {
        auto it = levels_.find(size);
        if (it != levels_.end()) return *it->second;
        auto lv = std::make_unique<FftLevel>(static_cast<int>(size));
        cplx* d = lv->data();
        for (long k = 0; k < size; ++k) d[k] = w_[k];
        fftw_execute(lv->fwd);
        lv->weights_hat.assign(d, d + size);
        return *levels_.emplace(size, std::move(lv)).first->second;
    }

    // Adds the contribution of u[l, mid) to hist[mid, r).
    void convolve(long l, long mid, long r) {
        const long L = mid - l, size = 2 * L;
        FftLevel& lv = level(size);
        cplx* d = lv.data();
        const long last = std::min(r, N_ + 1);
        for (int c = 0; c < pr_.comps; ++c) {
            for (long i = 0; i < L; ++i) d[i] = u_[l + i][c];
            std::fill(d + L, d + size, cplx(0.0));
            fftw_execute(lv.fwd);
            for (long i = 0; i < size; ++i) d[i] *= lv.weights_hat[i];
            fftw_execute(lv.bwd);
            const double inv = 1.0 / static_cast<double>(size);
            for (long n = mid; n < last; ++n) hist_[n][c] += d[n - l] * inv;
        }
    }

    void solve(long l, long r) {
        if (l > N_) return;
        if (r - l <= 64) {
            const long last = std::min(r, N_ + 1);
            for (long n = l; n < last; ++n) {
                for (long j = l; j < n; ++j)
                    for (int c = 0; c < pr_.comps; ++c) hist_[n][c] += w_[n - j] * u_[j][c];
                step(n);
            }
            return;
        }
        const long mid = (l + r) / 2;
        solve(l, mid);
        if (mid <= N_) convolve(l, mid, r);
        solve(mid, r);
    }
};

std::vector<Vec2c> sample(const std::vector<Vec2c>& u, double h, const std::vector<double>& t) {
    std::vector<Vec2c> out(t.size());
    const long N = static_cast<long>(u.size()) - 1;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double x = t[i] / h;
        const long k = static_cast<long>(std::floor(x));
        if (k >= N) {
            out[i] = u[N];
            continue;
        }
        const double f = x - k;
        for (int c = 0; c < 2; ++c) out[i][c] = (1 - f) * u[k][c] + f * u[k + 1][c];
    }
    return out;
}

double relative_gap(const Vec2c& a, const Vec2c& b) {
    const double num = std::hypot(std::abs(a[0] - b[0]), std::abs(a[1] - b[1]));
    const double den = std::hypot(std::abs(b[0]), std::abs(b[1]));
    return den > 0 ? num / den : num;
}

}  // namespace

GLSeries gl_evolve(const ModelSpec& model, const FourierInitialData& init, const std::vector<double>& t_grid,
                   const GLOptions& opt) {
    if (t_grid.empty() || !(t_grid.front() > 0)) throw ConfigError("time grid must be positive and non-empty");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1])) throw ConfigError("time grid must be ascending");
    if (opt.steps_per_tmin < 1) throw ConfigError("steps_per_tmin must be positive");

    const bool model_b = model.kind == ModelKind::CaScalar || model.kind == ModelKind::CaSystem;
    const double q2 = init.q * init.q;
    Problem pr;
    GLSeries out;
    out.t = t_grid;
    double gamma = 1.0;
    if (model_b) {
        const auto& p = model.b;
        pr.comps = p.scalar ? 1 : 2;
        gamma = p.exponent.gamma();
        pr.time_dependent = true;
        pr.dbar = p.dbar;
        pr.mu1 = p.mu1();
        pr.mu2 = p.mu2();
        out.shift = {pr.mu1, p.scalar ? cplx(0.0) : pr.mu2};
    } else {
        ModelAParams p = model.a;
        if (model.kind == ModelKind::Subdiffusion) {
            p.scalar = true;
            p.a = 0.0;
        }
        pr.comps = p.scalar ? 1 : 2;
        gamma = model.kind == ModelKind::Regular ? 1.0 : p.exponent.gamma();
        if (p.scalar) {
            pr.reaction(0, 0) = p.a;
            pr.diffusion(0, 0) = p.d;
        } else {
            pr.reaction = p.reaction.matrix().cast<cplx>();
            pr.diffusion(0, 0) = 1.0;
            pr.diffusion(1, 1) = p.d;
        }
    }
    out.components = pr.comps;
    pr.init = init.u0;
    if (pr.comps == 1) pr.init[1] = 0.0;

    if (gamma == 1.0) {
        // No memory: the mode is a matrix exponential.
        Mat2 G;
        if (model_b) {
            G = -q2 * pr.dbar;
            G(0, 0) += pr.mu1;
            G(1, 1) += pr.mu2;
        } else {
            G = pr.reaction - q2 * pr.diffusion;
        }
        if (pr.comps == 1) G(1, 1) = G(1, 0) = G(0, 1) = 0.0;
        Eigen::ComplexEigenSolver<Mat2> es(G.topLeftCorner(pr.comps, pr.comps).eval());
        double sigma = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < pr.comps; ++i) sigma = std::max(sigma, es.eigenvalues()(i).real());
        out.shift = {cplx(sigma), cplx(pr.comps == 2 ? sigma : 0.0)};
        const Mat2 Gs = G - sigma * Mat2::Identity();
        const Eigen::Vector2cd u0(pr.init[0], pr.init[1]);
        for (double t : t_grid) {
            const Mat2 E = (Gs * t).exp();
            const Eigen::Vector2cd u = E * u0;
            out.v.push_back({u(0), pr.comps == 2 ? u(1) : cplx(0.0)});
        }
        return out;
    }

    const double alpha = 1.0 - gamma;
    auto run = [&](double h) {
        const long N = static_cast<long>(std::ceil(t_grid.back() / h));
        if (N > opt.max_steps) throw ConfigError("time grid needs more steps than max_steps allows");
        Problem local = pr;
        local.c = q2 * std::pow(h, -alpha);
        Stepper st(local, h, N);
        st.set_gamma(gamma);
        return sample(st.run(), h, t_grid);
    };
    const double h = t_grid.front() / opt.steps_per_tmin;
    out.step = h;
    out.v = run(h);

    if (opt.richardson && t_grid.size() >= 3) {
        const auto fine = run(h / 2);
        const std::size_t n = t_grid.size();
        for (std::size_t idx : {n / 3, (2 * n) / 3, n - 1}) {
            out.check_times.push_back(t_grid[idx]);
            out.richardson_error = std::max(out.richardson_error, relative_gap(out.v[idx], fine[idx]));
        }
        if (out.richardson_error > opt.richardson_tolerance) {
            std::ostringstream m;
            m << "step-halving check disagrees by " << out.richardson_error * 100 << "% (step " << h << ")";
            throw StepSizeRejected(m.str());
        }
    }
    return out;
}

}  // namespace subspectra
