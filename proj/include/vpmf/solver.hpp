#pragma once
// Time integration of the volume-penalized Allen-Cahn flow
//   phi_t = lap phi - W'(phi)/eps^2 + (lambda/eps) sqrt(2 W(phi)),
//   lambda(t) = eps^{-alpha} (V0 - integral k(phi)).
// lambda is a plain function of the state and is treated explicitly in both
// schemes; the imex variant inverts (I/dt - lap) exactly in Fourier space.

#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "vpmf/grid.hpp"
#include "vpmf/initial_data.hpp"

namespace vpmf {

enum class Scheme { explicit_euler, imex };

struct SolverParams {
    double epsilon = 0.0;
    double alpha = 0.5;  // penalty exponent, in (0,1)
    double dt = 0.0;
    double t_final = 0.0;
    Scheme scheme = Scheme::imex;
    TorusGrid grid;
    bool force_dt = false;  // documented escape hatch: skip the dt bound check

    // Largest stable dt: explicit min(h^2/(2d), eps^2/8), imex eps^2/8.
    // The eps^2/8 part comes from sup |W''| = 4 on [-1, 1].
    double dt_limit() const;
    void validate() const;
};

struct PhaseState {
    ScalarField phi;
    double t = 0.0;
    double lambda = 0.0;
    double volume_target = 0.0;
};

// |phi| exceeded 1.05 or a NaN appeared; `time` is the offending time and
// `last_stable` the state it stepped from.
struct InstabilityError : std::runtime_error {
    double time;
    std::shared_ptr<PhaseState> last_stable;
    InstabilityError(const std::string& msg, double t, std::shared_ptr<PhaseState> prev)
        : std::runtime_error(msg), time(t), last_stable(std::move(prev)) {}
};

// Largest dt that divides t_final exactly while staying at or below 0.9 of
// the stability limit. Landing on t_final keeps identity-check windows on
// the step grid.
double snapped_auto_dt(double t_final, double dt_limit);

double lambda_eps(const ScalarField& phi, double volume_target, double epsilon, double alpha);

// Pointwise right-hand side with the discrete laplacian.
ScalarField rhs(const ScalarField& phi, double lambda, const SolverParams& params);

// State at t = 0; lambda evaluates to exactly 0 by the definition of V0.
PhaseState make_state(const InitialProfile& profile, const SolverParams& params);

PhaseState step(const PhaseState& state, const SolverParams& params);

using Observer = std::function<void(const PhaseState&)>;

// Iterates step until t_final (ceil(t_final/dt) steps). Observers fire at
// step 0 (the initial state), every record_stride-th step after, and at the
// final state. Deterministic for fixed inputs.
PhaseState run(const SolverParams& params, const InitialProfile& profile,
               const std::vector<Observer>& observers, int record_stride = 1);

}  // namespace vpmf
