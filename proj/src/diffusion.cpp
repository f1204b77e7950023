#include "codi/diffusion.hpp"

#include <fftw3.h>

#include <cmath>
#include <future>
#include <mutex>
#include <numbers>

namespace codi {

void SolverParams::validate() const {
    if (!(mu > 0.0)) throw ParamError("mu must be > 0");
    if (!(theta > 0.0)) throw ParamError("theta must be > 0");
    if (!(eta > 0.0)) throw ParamError("eta must be > 0");
    if (!(a > 0.0 && a < b && b <= 255.0)) throw ParamError("clamp bounds need 0 < a < b <= 255");
    if (!(r_stop > 0.0 && r_stop < 1.0)) throw ParamError("r_stop must be in (0,1)");
    if (max_iters < 1) throw ParamError("max_iters must be >= 1");
}

SpectralOperator build_spectral_operator(int width, int height, const SolverParams& params,
                                         double G0) {
    if (width < 2 || height < 2) throw ParamError("spectral operator needs dims >= 2x2");
    if (!(G0 > 0.0)) throw ParamError("spectral operator needs G0 > 0");
    SpectralOperator op;
    op.width = width;
    op.height = height;
    op.G0 = G0;
    op.denom.resize(static_cast<size_t>(width) * height);
    const double tp = params.theta + params.mu;
    for (int k1 = 0; k1 < height; ++k1) {
        const double cy = std::cos(2.0 * std::numbers::pi * k1 / height);
        for (int k2 = 0; k2 < width; ++k2) {
            const double cx = std::cos(2.0 * std::numbers::pi * k2 / width);
            // Fourier symbol of the periodic 5-point Laplacian.
            const double lap = 2.0 * cy + 2.0 * cx - 4.0;
            op.denom[static_cast<size_t>(k1) * width + k2] = tp - 2.0 * G0 * lap;
        }
    }
    return op;
}

namespace {

constexpr int kOracleMaxDim = 32;

inline int wrap(int v, int n) { return v < 0 ? v + n : (v >= n ? v - n : v); }

// theta U + 2 div((g - G0) grad U) + mu V + lambda, periodic forward-diff
// gradient paired with backward-diff divergence.
ScalarField update_rhs(const ScalarField& u, const ScalarField& v, const ScalarField& lam,
                       const EdgeWeight& g, const SolverParams& params) {
    const int W = u.width, H = u.height;
    ScalarField qx(W, H), qy(W, H);
    for (int i = 0; i < H; ++i) {
        for (int j = 0; j < W; ++j) {
            const double w = g.g.at(i, j) - g.G0;
            qx.at(i, j) = w * (u.at(i, wrap(j + 1, W)) - u.at(i, j));
            qy.at(i, j) = w * (u.at(wrap(i + 1, H), j) - u.at(i, j));
        }
    }
    ScalarField rhs(W, H);
    for (int i = 0; i < H; ++i) {
        for (int j = 0; j < W; ++j) {
            const double div = qx.at(i, j) - qx.at(i, wrap(j - 1, W)) +
                               qy.at(i, j) - qy.at(wrap(i - 1, H), j);
            rhs.at(i, j) = params.theta * u.at(i, j) + 2.0 * div +
                           params.mu * v.at(i, j) + lam.at(i, j);
        }
    }
    return rhs;
}

// Per-thread FFT workspace. FFTW planning is not thread-safe; execution on
// distinct plans is.
class SpectralSolver {
public:
    SpectralSolver(int width, int height) : w_(width), h_(height), cw_(width / 2 + 1) {
        static std::mutex plan_mutex;
        std::lock_guard<std::mutex> lock(plan_mutex);
        real_ = fftw_alloc_real(static_cast<size_t>(w_) * h_);
        spec_ = fftw_alloc_complex(static_cast<size_t>(cw_) * h_);
        fwd_ = fftw_plan_dft_r2c_2d(h_, w_, real_, spec_, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_c2r_2d(h_, w_, spec_, real_, FFTW_ESTIMATE);
    }
    ~SpectralSolver() {
        static std::mutex plan_mutex;
        std::lock_guard<std::mutex> lock(plan_mutex);
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
        fftw_free(real_);
        fftw_free(spec_);
    }
    SpectralSolver(const SpectralSolver&) = delete;
    SpectralSolver& operator=(const SpectralSolver&) = delete;

    ScalarField solve(const ScalarField& rhs, const SpectralOperator& op) {
        std::copy(rhs.data.begin(), rhs.data.end(), real_);
        fftw_execute(fwd_);
        for (int k1 = 0; k1 < h_; ++k1) {
            for (int k2 = 0; k2 < cw_; ++k2) {
                const double d = op.at(k1, k2);
                spec_[static_cast<size_t>(k1) * cw_ + k2][0] /= d;
                spec_[static_cast<size_t>(k1) * cw_ + k2][1] /= d;
            }
        }
        fftw_execute(inv_);
        ScalarField out(w_, h_);
        const double scale = 1.0 / (static_cast<double>(w_) * h_);
        for (size_t i = 0; i < out.size(); ++i) out.data[i] = real_[i] * scale;
        return out;
    }

private:
    int w_, h_, cw_;
    double* real_;
    fftw_complex* spec_;
    fftw_plan fwd_, inv_;
};

double l2_norm_diff(const ScalarField& a, const ScalarField& b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

ScalarField v_update_channel(const ScalarField& u, const ScalarField& lam, const ScalarField& u0,
                             const ScalarField& eta_field, const SolverParams& params) {
    ScalarField v(u.width, u.height);
    for (size_t i = 0; i < v.size(); ++i) {
        const double eta = eta_field.data[i];
        const double gamma = (eta * u0.data[i] + params.mu * u.data[i] - lam.data[i]) /
                             (eta + params.mu);
        v.data[i] = gamma < params.a ? params.a : (gamma > params.b ? params.b : gamma);
    }
    return v;
}

// Runs the full iteration for one channel.
std::vector<IterationRecord> run_channel(ScalarField& u, ScalarField& v, ScalarField& lam,
                                         const ScalarField& u0, const ScalarField& eta_field,
                                         const EdgeWeight& g, const SpectralOperator& op,
                                         const SolverParams& params) {
    SpectralSolver solver(u.width, u.height);
    std::vector<IterationRecord> trace;
    double prev_energy = 0.0;
    for (int k = 1; k <= params.max_iters; ++k) {
        ScalarField u_new = solver.solve(update_rhs(u, v, lam, g, params), op);
        u_new.check_finite("U-update");
        const double energy = subproblem_energy(u_new, v, lam, g, params);
        const double ratio = k == 1 ? 1.0
                                    : std::abs(energy - prev_energy) /
                                          std::max(std::abs(prev_energy), 1e-300);
        ScalarField v_new = v_update_channel(u_new, lam, u0, eta_field, params);
        ScalarField lam_new = lam;
        for (size_t i = 0; i < lam.size(); ++i) {
            lam_new.data[i] += params.mu * (v_new.data[i] - u_new.data[i]);
        }
        trace.push_back({energy, ratio, l2_norm_diff(u_new, u), l2_norm_diff(v_new, v),
                         l2_norm_diff(lam_new, lam)});
        u = std::move(u_new);
        v = std::move(v_new);
        lam = std::move(lam_new);
        prev_energy = energy;
        if (k >= 2 && ratio <= params.r_stop) break;
    }
    return trace;
}

}  // namespace

std::vector<double> DiffusionState::energy_trace() const {
    std::vector<double> out;
    if (!trace.empty()) {
        for (const auto& rec : trace.front()) out.push_back(rec.energy);
    }
    return out;
}

std::vector<double> DiffusionState::rn_trace() const {
    std::vector<double> out;
    if (!trace.empty()) {
        for (const auto& rec : trace.front()) out.push_back(rec.ratio);
    }
    return out;
}

ScalarField make_eta_field(const SeedImage& seed, const BinaryMask& mask,
                           const SolverParams& params) {
    if (mask.width != seed.width() || mask.height != seed.height()) {
        throw ParamError("mask dimensions do not match seed image");
    }
    ScalarField eta(seed.width(), seed.height(), 0.0);
    for (size_t i = 0; i < eta.size(); ++i) {
        const bool in_d = seed.seeded.data[i] != 0;
        const bool in_m = mask.data[i] != 0;
        const bool support = params.fidelity_on_seeds ? (in_d && in_m) : (!in_d && in_m);
        if (support) eta.data[i] = params.eta;
    }
    return eta;
}

IndexField u_update(const DiffusionState& state, const EdgeWeight& g, const SpectralOperator& op,
                    const SolverParams& params) {
    SpectralSolver solver(op.width, op.height);
    IndexField out;
    for (int c = 0; c < state.U.num_channels(); ++c) {
        ScalarField u = solver.solve(
            update_rhs(state.U.channels[c], state.V.channels[c], state.lambda.channels[c], g,
                       params),
            op);
        u.check_finite("U-update");
        out.channels.push_back(std::move(u));
    }
    return out;
}

IndexField v_update(const DiffusionState& state, const SeedImage& seed,
                    const ScalarField& eta_field, const SolverParams& params) {
    IndexField out;
    for (int c = 0; c < state.U.num_channels(); ++c) {
        out.channels.push_back(v_update_channel(state.U.channels[c], state.lambda.channels[c],
                                                seed.channels[c], eta_field, params));
    }
    return out;
}

IndexField lambda_update(const DiffusionState& state, const SolverParams& params) {
    IndexField out = state.lambda;
    for (int c = 0; c < out.num_channels(); ++c) {
        for (size_t i = 0; i < out.channels[c].size(); ++i) {
            out.channels[c].data[i] +=
                params.mu * (state.V.channels[c].data[i] - state.U.channels[c].data[i]);
        }
    }
    return out;
}

double objective_energy(const IndexField& U, const SeedImage& seed, const EdgeWeight& g,
                        const ScalarField& eta_field) {
    const int W = U.width(), H = U.height();
    double total = 0.0;
    for (int c = 0; c < U.num_channels(); ++c) {
        const ScalarField& u = U.channels[c];
        const ScalarField& u0 = seed.channels[c];
        for (int i = 0; i < H; ++i) {
            for (int j = 0; j < W; ++j) {
                const double gx = u.at(i, wrap(j + 1, W)) - u.at(i, j);
                const double gy = u.at(wrap(i + 1, H), j) - u.at(i, j);
                total += g.g.at(i, j) * (gx * gx + gy * gy);
                const double d = u.at(i, j) - u0.at(i, j);
                total += 0.5 * eta_field.at(i, j) * d * d;
            }
        }
    }
    return total;
}

double subproblem_energy(const ScalarField& U, const ScalarField& V, const ScalarField& lambda,
                         const EdgeWeight& g, const SolverParams& params) {
    const int W = U.width, H = U.height;
    double total = 0.0;
    for (int i = 0; i < H; ++i) {
        for (int j = 0; j < W; ++j) {
            const double gx = U.at(i, wrap(j + 1, W)) - U.at(i, j);
            const double gy = U.at(wrap(i + 1, H), j) - U.at(i, j);
            total += g.g.at(i, j) * (gx * gx + gy * gy);
            const double r = V.at(i, j) - U.at(i, j);
            total += lambda.at(i, j) * r + 0.5 * params.mu * r * r;
        }
    }
    return total;
}

DiffusionState run_diffusion(const SeedImage& seed, const EdgeWeight& g, const BinaryMask& mask,
                             const SolverParams& params) {
    params.validate();
    if (g.g.width != seed.width() || g.g.height != seed.height()) {
        throw ParamError("edge weight dimensions do not match seed image");
    }
    const int p = seed.num_channels();
    const int W = seed.width(), H = seed.height();
    const ScalarField eta_field = make_eta_field(seed, mask, params);
    const SpectralOperator op = build_spectral_operator(W, H, params, g.G0);

    DiffusionState state;
    state.U.channels.assign(seed.channels.begin(), seed.channels.end());
    state.V = IndexField(p, W, H, 0.0);
    state.lambda = IndexField(p, W, H, 0.0);
    state.trace.resize(static_cast<size_t>(p));

    // Channels are independent; run them concurrently.
    std::vector<std::future<std::vector<IterationRecord>>> jobs;
    for (int c = 0; c < p; ++c) {
        jobs.push_back(std::async(std::launch::async, [&, c] {
            return run_channel(state.U.channels[c], state.V.channels[c], state.lambda.channels[c],
                               seed.channels[c], eta_field, g, op, params);
        }));
    }
    size_t max_len = 0;
    for (int c = 0; c < p; ++c) {
        state.trace[static_cast<size_t>(c)] = jobs[static_cast<size_t>(c)].get();
        max_len = std::max(max_len, state.trace[static_cast<size_t>(c)].size());
    }
    state.k = static_cast<int>(max_len);
    return state;
}

bool ConvergenceReport::all_monotone() const {
    for (const auto& ch : channels) {
        if (!ch.energy_monotone) return false;
    }
    return true;
}

ConvergenceReport convergence_report(const DiffusionState& state) {
    ConvergenceReport report;
    for (const auto& trace : state.trace) {
        if (trace.size() < 2) throw ParamError("convergence report needs >= 2 iterations");
        ConvergenceReport::Channel ch;
        for (size_t n = 2; n < trace.size(); ++n) {
            const double tol = 1e-10 * (1.0 + std::abs(trace[n - 1].energy));
            if (trace[n].energy > trace[n - 1].energy + tol && ch.first_violation < 0) {
                ch.energy_monotone = false;
                ch.first_violation = static_cast<int>(n + 1);
            }
        }
        ch.final_du = trace.back().du;
        ch.final_dv = trace.back().dv;
        ch.final_dlambda = trace.back().dlambda;
        report.channels.push_back(ch);
    }
    return report;
}

IndexField dense_oracle_solve(const IndexField& rhs, const SolverParams& params, double G0) {
    const int W = rhs.width(), H = rhs.height();
    if (W > kOracleMaxDim || H > kOracleMaxDim) {
        throw ParamError("dense oracle limited to 32x32 grids");
    }
    const int n = W * H;
    // A = (theta + mu) I - 2 G0 L, L the periodic 5-point Laplacian.
    std::vector<double> A(static_cast<size_t>(n) * n, 0.0);
    const double tp = params.theta + params.mu;
    for (int i = 0; i < H; ++i) {
        for (int j = 0; j < W; ++j) {
            const int row = i * W + j;
            A[static_cast<size_t>(row) * n + row] = tp + 8.0 * G0;
            const int nbrs[4] = {i * W + wrap(j + 1, W), i * W + wrap(j - 1, W),
                                 wrap(i + 1, H) * W + j, wrap(i - 1, H) * W + j};
            for (int nb : nbrs) A[static_cast<size_t>(row) * n + nb] += -2.0 * G0;
        }
    }
    // LU with partial pivoting.
    std::vector<int> piv(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) piv[static_cast<size_t>(i)] = i;
    for (int col = 0; col < n; ++col) {
        int best = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(A[static_cast<size_t>(r) * n + col]) >
                std::abs(A[static_cast<size_t>(best) * n + col])) {
                best = r;
            }
        }
        if (A[static_cast<size_t>(best) * n + col] == 0.0) {
            throw NumericalError("singular oracle matrix");
        }
        if (best != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(A[static_cast<size_t>(col) * n + c], A[static_cast<size_t>(best) * n + c]);
            }
            std::swap(piv[static_cast<size_t>(col)], piv[static_cast<size_t>(best)]);
        }
        const double d = A[static_cast<size_t>(col) * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double f = A[static_cast<size_t>(r) * n + col] / d;
            A[static_cast<size_t>(r) * n + col] = f;
            for (int c = col + 1; c < n; ++c) {
                A[static_cast<size_t>(r) * n + c] -= f * A[static_cast<size_t>(col) * n + c];
            }
        }
    }
    IndexField out;
    for (const ScalarField& channel : rhs.channels) {
        std::vector<double> x(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            x[static_cast<size_t>(i)] = channel.data[static_cast<size_t>(piv[static_cast<size_t>(i)])];
        }
        for (int i = 0; i < n; ++i) {
            for (int c = 0; c < i; ++c) {
                x[static_cast<size_t>(i)] -= A[static_cast<size_t>(i) * n + c] * x[static_cast<size_t>(c)];
            }
        }
        for (int i = n - 1; i >= 0; --i) {
            for (int c = i + 1; c < n; ++c) {
                x[static_cast<size_t>(i)] -= A[static_cast<size_t>(i) * n + c] * x[static_cast<size_t>(c)];
            }
            x[static_cast<size_t>(i)] /= A[static_cast<size_t>(i) * n + i];
        }
        ScalarField sol(W, H);
        sol.data = std::move(x);
        out.channels.push_back(std::move(sol));
    }
    return out;
}

}  // namespace codi
