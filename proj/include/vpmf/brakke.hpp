#pragma once

#include <array>
#include <string>
#include <vector>

#include "vpmf/solver.hpp"

namespace vpmf {

// Space-time weight chi(|x-x0|/r) * eta(t) with chi(s) = (1-s^2)^2 below s=1
// and zero above. eta is 1, or the parabolic hat 4s(1-s) vanishing at both
// window ends. Both factors are C1 with closed-form derivatives.
struct BrakkeTest {
    std::array<double, 3> x0{0.5, 0.5, 0.0};
    double r = 0.2;
    double t1 = 0.0;
    double t2 = 0.0;
    enum class Temporal { constant_one, hat } temporal = Temporal::constant_one;

    double chi(const std::array<double, 3>& x, int dim) const;
    std::array<double, 3> grad_chi(const std::array<double, 3>& x, int dim) const;
    double eta(double t) const;
    double eta_dt(double t) const;
    double max_test() const { return 1.0; }  // sup of chi * eta
    void validate() const;
};

// One evaluated space-time identity: lhs should equal the sum of the five
// terms up to a residual that scales linearly in dt.
struct BrakkeReport {
    BrakkeTest test;
    double lhs = 0.0;
    double term_curv = 0.0;
    double term_vel = 0.0;
    double term_lambda = 0.0;
    double term_transport = 0.0;
    double term_transport_naive = 0.0;  // same quantity via the analytic gradient of chi
    double term_dt = 0.0;
    double residual = 0.0;
    double normalized_residual = 0.0;
    double lambda_l2 = 0.0;  // sum dt lambda^2 over the window
    double c_emp = 0.0;
    double weak_margin = 0.0;
};

std::string brakke_report_json(const BrakkeReport& rep);

// Consumes solver states in time order (every step of the widest window) and
// reduces each into per-test partial sums, so a trajectory never needs to be
// held in memory. States outside all windows are ignored.
class BrakkeAccumulator {
  public:
    BrakkeAccumulator(std::vector<BrakkeTest> tests, const SolverParams& params);

    void feed(const PhaseState& state);

    // weak_C is the constant of the corrected inequality; reports come back
    // in the order the tests were given.
    std::vector<BrakkeReport> finish(double weak_C) const;

  private:
    struct StepRow {
        double t;
        double mu_chi;        // sigma-normalized measure of chi
        double p_curv;
        double p_vel;
        double p_lambda;
        double p_transport;
        double p_naive;
    };
    std::vector<BrakkeTest> tests_;
    SolverParams params_;
    std::vector<std::vector<StepRow>> rows_;  // per test, in fed order
    std::vector<double> lambda_rows_t_;
    std::vector<double> lambda_rows_v_;
    double tmin_ = 0.0, tmax_ = 0.0;
};

// Convenience wrappers over an in-memory trajectory.
BrakkeReport check_identity(const std::vector<PhaseState>& traj, const BrakkeTest& test,
                            const SolverParams& params);
double check_weak_inequality(const std::vector<PhaseState>& traj, const BrakkeTest& test,
                             const SolverParams& params, double C);

struct LambdaL2 {
    double integral = 0.0;  // sum dt lambda^2
    double ratio = 0.0;     // integral / (1 + t2 - t1)
};
LambdaL2 lambda_l2_report(const std::vector<PhaseState>& traj, double t1, double t2);

}  // namespace vpmf
