#pragma once

#include <vector>

#include "codi/edge_weight.hpp"
#include "codi/seeding.hpp"

namespace codi {

struct SolverParams {
    double mu = 5e-5;      ///< ADMM penalty
    double theta = 1.0;    ///< proximal weight of the Taylor surrogate
    double eta = 1e-4;     ///< fidelity strength
    double a = 1.0;        ///< lower clamp bound of the box constraint
    double b = 255.0;      ///< upper clamp bound
    double r_stop = 0.05;  ///< stop once |E_n - E_{n-1}| / |E_{n-1}| falls below
    int max_iters = 1000;

    /// When true (default), eta_D = eta on the seeded region intersected with
    /// the object mask; when false, the literal complement reading (eta on
    /// D^c intersected with the mask).
    bool fidelity_on_seeds = true;

    void validate() const;
};

/// Frequency-space denominator of the U-update system
/// ((theta + mu) I - 2 G0 Laplacian), periodic 5-point stencil.
struct SpectralOperator {
    int width = 0;
    int height = 0;
    double G0 = 0.0;
    std::vector<double> denom;  ///< row-major over (k1, k2), height x width

    double at(int k1, int k2) const { return denom[static_cast<size_t>(k1) * width + k2]; }
};

SpectralOperator build_spectral_operator(int width, int height, const SolverParams& params,
                                         double G0);

/// One iteration's scalars, recorded per channel.
struct IterationRecord {
    double energy;    ///< E_n, U-subproblem objective after the U-update
    double ratio;     ///< R_n (1.0 for the first iteration)
    double du, dv, dlambda;  ///< L2 norms of the iterate differences
};

struct DiffusionState {
    IndexField U, V, lambda;
    int k = 0;  ///< completed iterations
    std::vector<std::vector<IterationRecord>> trace;  ///< per channel

    /// Channel-0 energy / ratio traces.
    std::vector<double> energy_trace() const;
    std::vector<double> rn_trace() const;
};

/// eta_D over the grid: params.eta on the fidelity support, 0 elsewhere.
ScalarField make_eta_field(const SeedImage& seed, const BinaryMask& mask,
                           const SolverParams& params);

/// FFT U-update over all channels: solves
/// ((theta+mu) I - 2 G0 Laplacian) U = theta U + 2 div((g - G0) grad U) + mu V + lambda
/// with periodic forward-difference gradient and backward-difference divergence.
IndexField u_update(const DiffusionState& state, const EdgeWeight& g, const SpectralOperator& op,
                    const SolverParams& params);

/// Projection V-update: V = clamp((eta_D U0 + mu U - lambda) / (eta_D + mu), a, b).
IndexField v_update(const DiffusionState& state, const SeedImage& seed,
                    const ScalarField& eta_field, const SolverParams& params);

/// Multiplier update: lambda + mu (V - U).
IndexField lambda_update(const DiffusionState& state, const SolverParams& params);

/// Full model energy: sum g |grad U|^2 + (1/2) sum eta_D (U - U0)^2, over all
/// channels, forward differences with periodic wrap.
double objective_energy(const IndexField& U, const SeedImage& seed, const EdgeWeight& g,
                        const ScalarField& eta_field);

/// U-subproblem objective used for the stopping ratio: for one channel,
/// sum g |grad U|^2 + <lambda, V - U> + (mu/2) |V - U|^2.
double subproblem_energy(const ScalarField& U, const ScalarField& V, const ScalarField& lambda,
                         const EdgeWeight& g, const SolverParams& params);

/// Runs the full splitting iteration: U starts at the seed image, V and
/// lambda at zero; channels iterate independently (and concurrently).
DiffusionState run_diffusion(const SeedImage& seed, const EdgeWeight& g, const BinaryMask& mask,
                             const SolverParams& params);

struct ConvergenceReport {
    struct Channel {
        bool energy_monotone = true;    ///< E_n non-increasing for n >= 2
        int first_violation = -1;       ///< iteration of the first violation, or -1
        double final_du = 0.0, final_dv = 0.0, final_dlambda = 0.0;
    };
    std::vector<Channel> channels;
    bool all_monotone() const;
};

/// Checks the computable consequences of the convergence theory on the
/// recorded trace: energy monotonicity (tolerance 1e-10 * (1 + |E_n|)) and
/// the final difference norms. Needs >= 2 recorded iterations.
ConvergenceReport convergence_report(const DiffusionState& state);

/// Dense direct solve of the same linear system the FFT update solves;
/// test oracle, dims <= 32x32.
IndexField dense_oracle_solve(const IndexField& rhs, const SolverParams& params, double G0);

}  // namespace codi
