#include "vpmf/solver.hpp"

#include <cmath>
#include <sstream>

#include "vpmf/calculus.hpp"
#include "vpmf/energy.hpp"
#include "vpmf/potential.hpp"

namespace vpmf {

double SolverParams::dt_limit() const {
    const double reaction = epsilon * epsilon / 8.0;
    if (scheme == Scheme::imex) return reaction;
    const double diffusion = grid.h * grid.h / (2.0 * grid.dim);
    return std::min(diffusion, reaction);
}

void SolverParams::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("solver: epsilon must be positive");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("solver: alpha must lie in (0, 1)");
    if (!(dt > 0.0)) throw std::invalid_argument("solver: dt must be positive");
    if (t_final < 0.0) throw std::invalid_argument("solver: t_final must be nonnegative");
    if (epsilon * grid.n < 2.0) {
        std::ostringstream os;
        os << "solver: under-resolved interface, epsilon >= 4h recommended and"
              " epsilon >= 2h required; got epsilon=" << epsilon << ", h=" << grid.h;
        throw std::invalid_argument(os.str());
    }
    if (!force_dt && dt > dt_limit() * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "solver: dt=" << dt << " exceeds the stability bound " << dt_limit()
           << (scheme == Scheme::imex ? " (= eps^2/8)" : " (= min(h^2/(2 dim), eps^2/8))");
        throw std::invalid_argument(os.str());
    }
}

double snapped_auto_dt(double t_final, double dt_limit) {
    const double cap = 0.9 * dt_limit;
    if (!(t_final > 0.0)) return cap;
    const long n = static_cast<long>(std::ceil(t_final / cap - 1e-12));
    return t_final / static_cast<double>(n);
}

double lambda_eps(const ScalarField& phi, double volume_target, double epsilon, double alpha) {
    return (volume_target - phase_volume(phi)) / std::pow(epsilon, alpha);
}

ScalarField rhs(const ScalarField& phi, double lambda, const SolverParams& params) {
    const double eps = params.epsilon;
    const double ie2 = 1.0 / (eps * eps);
    const double le = lambda / eps;
    ScalarField out = laplacian(phi);
    double* q = out.v.data();
    const double* p = phi.v.data();
    parallel_for(0, out.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            q[i] += -well_prime(p[i]) * ie2 + le * sqrt_two_well(p[i]);
    });
    return out;
}

PhaseState make_state(const InitialProfile& profile, const SolverParams& params) {
    if (!(profile.phi0.grid == params.grid))
        throw std::invalid_argument("solver: profile grid does not match params grid");
    PhaseState s;
    s.phi = profile.phi0;
    s.t = 0.0;
    s.volume_target = profile.volume_target;
    s.lambda = lambda_eps(s.phi, s.volume_target, params.epsilon, params.alpha);
    return s;
}

namespace {

void check_stable(const ScalarField& phi, double t_new, const PhaseState& prev) {
    bool bad = false;
    for (double v : phi.v) {
        if (!std::isfinite(v) || std::fabs(v) > 1.05) {
            bad = true;
            break;
        }
    }
    if (!bad) return;
    std::ostringstream os;
    os << "instability at t=" << t_new << ": |phi| exceeded 1.05 or became non-finite";
    throw InstabilityError(os.str(), t_new, std::make_shared<PhaseState>(prev));
}

}  // namespace

PhaseState step(const PhaseState& state, const SolverParams& params) {
    const double eps = params.epsilon;
    const double dt = params.dt;
    PhaseState next;
    next.volume_target = state.volume_target;
    next.t = state.t + dt;

    if (params.scheme == Scheme::explicit_euler) {
        ScalarField f = rhs(state.phi, state.lambda, params);
        next.phi = ScalarField(params.grid);
        const double* p = state.phi.v.data();
        const double* r = f.v.data();
        double* q = next.phi.v.data();
        parallel_for(0, next.phi.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) q[i] = p[i] + dt * r[i];
        });
    } else {
        // (1/dt - lap) phi_next = phi/dt + N(phi, lambda), reaction explicit
        const double ie2 = 1.0 / (eps * eps);
        const double le = state.lambda / eps;
        ScalarField qfield(params.grid);
        const double* p = state.phi.v.data();
        double* q = qfield.v.data();
        const double idt = 1.0 / dt;
        parallel_for(0, qfield.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                q[i] = p[i] * idt - well_prime(p[i]) * ie2 + le * sqrt_two_well(p[i]);
        });
        next.phi = helmholtz_solve(qfield, idt, 1.0);
    }

    check_stable(next.phi, next.t, state);
    next.lambda = lambda_eps(next.phi, next.volume_target, eps, params.alpha);
    return next;
}

PhaseState run(const SolverParams& params, const InitialProfile& profile,
               const std::vector<Observer>& observers, int record_stride) {
    params.validate();
    if (record_stride < 1) throw std::invalid_argument("solver: record_stride must be >= 1");
    PhaseState s = make_state(profile, params);
    const long nsteps = static_cast<long>(std::ceil(params.t_final / params.dt - 1e-9));
    auto notify = [&](const PhaseState& st) {
        for (const auto& ob : observers) ob(st);
    };
    notify(s);
    for (long n = 1; n <= nsteps; ++n) {
        s = step(s, params);
        if (n % record_stride == 0 || n == nsteps) notify(s);
    }
    return s;
}

}  // namespace vpmf
