#include "vpmf/brakke.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "vpmf/calculus.hpp"
#include "vpmf/energy.hpp"
#include "vpmf/potential.hpp"

namespace vpmf {

void BrakkeTest::validate() const {
    if (!(r > 0.0) || !(r < 1.0)) throw std::invalid_argument("brakke test: r must lie in (0,1)");
    if (!(t2 > t1)) throw std::invalid_argument("brakke test: window must satisfy t2 > t1");
}

double BrakkeTest::chi(const std::array<double, 3>& x, int dim) const {
    const double s = torus_distance(x, x0, dim) / r;
    if (s >= 1.0) return 0.0;
    const double q = 1.0 - s * s;
    return q * q;
}

std::array<double, 3> BrakkeTest::grad_chi(const std::array<double, 3>& x, int dim) const {
    // d/dx (1-s^2)^2 = -4(1-s^2)/r^2 * (x-x0), smooth through the center
    std::array<double, 3> g{0.0, 0.0, 0.0};
    const double d = torus_distance(x, x0, dim);
    const double s = d / r;
    if (s >= 1.0) return g;
    const double f = -4.0 * (1.0 - s * s) / (r * r);
    for (int a = 0; a < dim; ++a) g[a] = f * wrap_delta(x[a] - x0[a]);
    return g;
}

double BrakkeTest::eta(double t) const {
    if (temporal == Temporal::constant_one) return 1.0;
    const double s = (t - t1) / (t2 - t1);
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return 4.0 * s * (1.0 - s);
}

double BrakkeTest::eta_dt(double t) const {
    if (temporal == Temporal::constant_one) return 0.0;
    const double s = (t - t1) / (t2 - t1);
    if (s < 0.0 || s > 1.0) return 0.0;
    return (4.0 - 8.0 * s) / (t2 - t1);
}

BrakkeAccumulator::BrakkeAccumulator(std::vector<BrakkeTest> tests, const SolverParams& params)
    : tests_(std::move(tests)), params_(params) {
    if (tests_.empty()) throw std::invalid_argument("brakke: at least one test required");
    for (const auto& t : tests_) t.validate();
    tmin_ = tests_.front().t1;
    tmax_ = tests_.front().t2;
    for (const auto& t : tests_) {
        tmin_ = std::min(tmin_, t.t1);
        tmax_ = std::max(tmax_, t.t2);
    }
    rows_.resize(tests_.size());
}

void BrakkeAccumulator::feed(const PhaseState& state) {
    const double t = state.t;
    if (t < tmin_ - 1e-12 || t > tmax_ + 1e-12) return;
    const TorusGrid& g = state.phi.grid;
    const double eps = params_.epsilon;

    auto lap = laplacian(state.phi);
    auto grad = gradient(state.phi);
    auto F = rhs(state.phi, state.lambda, params_);

    // curvature part of the velocity; F - hcurv is the lambda forcing
    ScalarField hcurv(g);
    for (std::size_t i = 0; i < hcurv.size(); ++i)
        hcurv[i] = lap[i] - well_prime(state.phi[i]) / (eps * eps);

    VectorField gradF = gradient(F);

    lambda_rows_t_.push_back(t);
    lambda_rows_v_.push_back(state.lambda);

    const double hd = std::pow(g.h, g.dim);
    for (std::size_t k = 0; k < tests_.size(); ++k) {
        const BrakkeTest& test = tests_[k];
        if (t < test.t1 - 1e-12 || t > test.t2 + 1e-12) continue;
        double mu = 0.0, curv = 0.0, vel = 0.0, lam = 0.0, trans = 0.0, naive = 0.0;
        for (std::size_t i = 0; i < g.cells(); ++i) {
            const auto x = g.center(g.coords(i));
            const double chi = test.chi(x, g.dim);
            if (chi != 0.0) {
                const double phi = state.phi[i];
                double gg = 0.0, gf = 0.0;
                for (int a = 0; a < g.dim; ++a) {
                    gg += grad.comp[a][i] * grad.comp[a][i];
                    gf += grad.comp[a][i] * gradF.comp[a][i];
                }
                mu += chi * (0.5 * eps * gg + well(phi) / eps);
                curv += chi * hcurv[i] * hcurv[i];
                vel += chi * F[i] * F[i];
                lam += chi * well(phi);
                trans += chi * (gf + F[i] * lap[i]);
            }
            const auto gchi = test.grad_chi(x, g.dim);
            if (gchi[0] != 0.0 || gchi[1] != 0.0 || gchi[2] != 0.0) {
                double dot = 0.0;
                for (int a = 0; a < g.dim; ++a) dot += gchi[a] * grad.comp[a][i];
                naive += dot * F[i];
            }
        }
        StepRow row;
        row.t = t;
        row.mu_chi = mu * hd / sigma_tension;
        row.p_curv = -0.5 * eps * curv * hd;
        row.p_vel = -0.5 * eps * vel * hd;
        row.p_lambda = state.lambda * state.lambda * lam * hd / eps;
        row.p_transport = eps * trans * hd;
        row.p_naive = -eps * naive * hd;
        rows_[k].push_back(row);
    }
}

std::vector<BrakkeReport> BrakkeAccumulator::finish(double weak_C) const {
    std::vector<BrakkeReport> out;
    out.reserve(tests_.size());
    for (std::size_t k = 0; k < tests_.size(); ++k) {
        const BrakkeTest& test = tests_[k];
        const auto& rows = rows_[k];
        if (rows.size() < 2)
            throw std::runtime_error("brakke: window was not covered by the trajectory");
        const double dt = rows[1].t - rows[0].t;
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (std::fabs(rows[i].t - rows[i - 1].t - dt) > 1e-9)
                throw std::runtime_error("brakke: missing steps inside the window");
        if (std::fabs(rows.front().t - test.t1) > 1e-9 || std::fabs(rows.back().t - test.t2) > 1e-9)
            throw std::runtime_error("brakke: trajectory does not reach the window endpoints");

        BrakkeReport rep;
        rep.test = test;
        rep.lhs = sigma_tension *
                  (test.eta(test.t2) * rows.back().mu_chi - test.eta(test.t1) * rows.front().mu_chi);
        for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
            const double w = dt * test.eta(rows[i].t);
            rep.term_curv += w * rows[i].p_curv;
            rep.term_vel += w * rows[i].p_vel;
            rep.term_lambda += w * rows[i].p_lambda;
            rep.term_transport += w * rows[i].p_transport;
            rep.term_transport_naive += w * rows[i].p_naive;
            rep.term_dt += dt * test.eta_dt(rows[i].t) * sigma_tension * rows[i].mu_chi;
        }
        const double sum =
            rep.term_curv + rep.term_vel + rep.term_lambda + rep.term_transport + rep.term_dt;
        rep.residual = rep.lhs - sum;
        const double mass = std::fabs(rep.lhs) + std::fabs(rep.term_curv) + std::fabs(rep.term_vel) +
                            std::fabs(rep.term_lambda) + std::fabs(rep.term_transport) +
                            std::fabs(rep.term_dt);
        rep.normalized_residual = mass > 0.0 ? std::fabs(rep.residual) / mass : 0.0;

        for (std::size_t i = 0; i < lambda_rows_t_.size(); ++i) {
            const double t = lambda_rows_t_[i];
            if (t >= test.t1 - 1e-12 && t < test.t2 - 1e-12)
                rep.lambda_l2 += dt * lambda_rows_v_[i] * lambda_rows_v_[i];
        }

        const double scale = std::pow(test.r, params_.grid.dim - 1) * (1.0 + test.t2 - test.t1) *
                             test.max_test();
        rep.c_emp = rep.term_lambda / scale;
        rep.weak_margin = weak_C * scale +
                          (rep.term_curv + rep.term_vel + rep.term_transport + rep.term_dt) -
                          rep.lhs;
        out.push_back(rep);
    }
    return out;
}

std::string brakke_report_json(const BrakkeReport& rep) {
    nlohmann::json j;
    j["test"] = {{"x0", {rep.test.x0[0], rep.test.x0[1], rep.test.x0[2]}},
                 {"r", rep.test.r},
                 {"t1", rep.test.t1},
                 {"t2", rep.test.t2},
                 {"temporal",
                  rep.test.temporal == BrakkeTest::Temporal::constant_one ? "constant" : "hat"}};
    j["terms"] = {{"curv", rep.term_curv},
                  {"vel", rep.term_vel},
                  {"lambda", rep.term_lambda},
                  {"transport", rep.term_transport},
                  {"transport_naive", rep.term_transport_naive},
                  {"dt", rep.term_dt}};
    j["lhs"] = rep.lhs;
    j["residual"] = rep.residual;
    j["normalized_residual"] = rep.normalized_residual;
    j["lambda_l2"] = rep.lambda_l2;
    j["C_emp"] = rep.c_emp;
    j["weak_margin"] = rep.weak_margin;
    return j.dump(2);
}

BrakkeReport check_identity(const std::vector<PhaseState>& traj, const BrakkeTest& test,
                            const SolverParams& params) {
    BrakkeAccumulator acc({test}, params);
    for (const auto& s : traj) acc.feed(s);
    return acc.finish(0.0).front();
}

double check_weak_inequality(const std::vector<PhaseState>& traj, const BrakkeTest& test,
                             const SolverParams& params, double C) {
    BrakkeAccumulator acc({test}, params);
    for (const auto& s : traj) acc.feed(s);
    return acc.finish(C).front().weak_margin;
}

LambdaL2 lambda_l2_report(const std::vector<PhaseState>& traj, double t1, double t2) {
    if (traj.size() < 2) throw std::invalid_argument("lambda_l2_report: trajectory too short");
    LambdaL2 out;
    const double dt = traj[1].t - traj[0].t;
    for (const auto& s : traj)
        if (s.t >= t1 - 1e-12 && s.t < t2 - 1e-12) out.integral += dt * s.lambda * s.lambda;
    out.ratio = out.integral / (1.0 + t2 - t1);
    return out;
}

}  // namespace vpmf
