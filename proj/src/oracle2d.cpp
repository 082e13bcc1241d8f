#include "vpmf/oracle2d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "vpmf/grid.hpp"

namespace vpmf {

namespace {

constexpr double kRadiusFloor = 1e-4;
constexpr double kForcedExtinctionRadius = 0.01;

std::vector<double> rk4_step(const std::vector<double>& r, double dt) {
    auto k1 = circle_rhs(r);
    std::vector<double> tmp(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) tmp[i] = r[i] + 0.5 * dt * k1[i];
    auto k2 = circle_rhs(tmp);
    for (std::size_t i = 0; i < r.size(); ++i) tmp[i] = r[i] + 0.5 * dt * k2[i];
    auto k3 = circle_rhs(tmp);
    for (std::size_t i = 0; i < r.size(); ++i) tmp[i] = r[i] + dt * k3[i];
    auto k4 = circle_rhs(tmp);
    std::vector<double> out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        out[i] = r[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

}  // namespace

std::vector<double> circle_rhs(const std::vector<double>& radii) {
    double total = 0.0;
    for (double r : radii) {
        if (!(r > 0.0)) throw std::invalid_argument("circle_rhs: radii must be positive");
        total += r;
    }
    const double kbar = radii.empty() ? 0.0 : static_cast<double>(radii.size()) / total;
    std::vector<double> out(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) out[i] = kbar - 1.0 / radii[i];
    return out;
}

CircleTrajectory evolve_circles(const CircleSystem& sys, double dt, double t_final) {
    if (!(dt > 0.0)) throw std::invalid_argument("evolve_circles: dt must be positive");
    if (!(t_final >= 0.0)) throw std::invalid_argument("evolve_circles: t_final must be >= 0");
    for (double r : sys.radii)
        if (!(r > kRadiusFloor))
            throw std::invalid_argument("evolve_circles: initial radii must exceed 1e-4");

    const std::size_t N = sys.radii.size();
    std::vector<double> r = sys.radii;          // current values, original slots
    std::vector<char> alive(N, 1);

    CircleTrajectory traj;
    auto record = [&](double t) {
        std::vector<double> row(N);
        for (std::size_t i = 0; i < N; ++i) row[i] = alive[i] ? r[i] : 0.0;
        traj.times.push_back(t);
        traj.radii.push_back(std::move(row));
    };
    auto remove = [&](std::size_t i, double t) {
        traj.events.push_back({t, i, r[i]});
        alive[i] = 0;
    };

    record(0.0);
    const long nsteps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
    for (long n = 0; n < nsteps; ++n) {
        const double t = n * dt;
        for (;;) {
            std::vector<double> a;
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < N; ++i)
                if (alive[i]) {
                    a.push_back(r[i]);
                    idx.push_back(i);
                }
            if (a.empty()) break;

            auto d = circle_rhs(a);
            double dmax = 0.0;
            std::size_t imin = 0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                dmax = std::max(dmax, std::fabs(d[i]));
                if (a[i] < a[imin]) imin = i;
            }
            if (a[imin] > 5.0 * dt * dmax) break;
            if (a[imin] < kForcedExtinctionRadius) {
                remove(idx[imin], t);
                continue;  // re-derive the reduced system's guard
            }
            char msg[128];
            std::snprintf(msg, sizeof msg,
                          "step-size violation at t=%.17g: radius %.17g moves faster than dt allows",
                          t, a[imin]);
            throw StepSizeError(msg, t);
        }

        std::vector<double> a;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < N; ++i)
            if (alive[i]) {
                a.push_back(r[i]);
                idx.push_back(i);
            }
        if (!a.empty()) {
            auto next = rk4_step(a, dt);
            for (std::size_t i = 0; i < a.size(); ++i) {
                r[idx[i]] = next[i];
                if (next[i] <= kRadiusFloor) remove(idx[i], t + dt);
            }
        }
        record(t + dt);
    }
    return traj;
}

std::string trajectory_csv(const CircleTrajectory& traj) {
    std::string out = "t";
    const std::size_t N = traj.radii.empty() ? 0 : traj.radii.front().size();
    for (std::size_t i = 1; i <= N; ++i) {
        char buf[24];
        std::snprintf(buf, sizeof buf, ",r_%zu", i);
        out += buf;
    }
    out += '\n';
    char cell[40];
    for (std::size_t row = 0; row < traj.times.size(); ++row) {
        std::snprintf(cell, sizeof cell, "%.17g", traj.times[row]);
        out += cell;
        for (double v : traj.radii[row]) {
            std::snprintf(cell, sizeof cell, ",%.17g", v);
            out += cell;
        }
        out += '\n';
    }
    return out;
}

namespace {

// Radii at time t, linear in the bracketing rows; a circle extinct in either
// bracket counts as absent.
std::vector<double> radii_at(const CircleTrajectory& traj, double t) {
    if (traj.times.empty()) throw std::invalid_argument("radii_at: empty trajectory");
    if (t < traj.times.front() - 1e-9 || t > traj.times.back() + 1e-9)
        throw std::invalid_argument("radii_at: time outside trajectory");
    auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t);
    std::size_t hi = std::min<std::size_t>(it - traj.times.begin(), traj.times.size() - 1);
    std::size_t lo = hi > 0 ? hi - 1 : 0;
    if (hi == 0 || std::fabs(traj.times[hi] - t) < 1e-15) lo = hi;
    const double span = traj.times[hi] - traj.times[lo];
    const double w = span > 0.0 ? (t - traj.times[lo]) / span : 0.0;
    std::vector<double> out(traj.radii[lo].size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double a = traj.radii[lo][i], b = traj.radii[hi][i];
        out[i] = (a == 0.0 || b == 0.0) ? 0.0 : (1.0 - w) * a + w * b;
    }
    return out;
}

}  // namespace

CompareResult compare_phase_field(const std::vector<Snapshot>& snaps, const CircleSystem& sys,
                                  const CircleTrajectory& traj) {
    if (sys.centers.size() != sys.radii.size())
        throw std::invalid_argument("compare_phase_field: one center per circle required");
    CompareResult res;
    for (const auto& snap : snaps) {
        if (snap.field.grid.dim != 2)
            throw std::invalid_argument("compare_phase_field: snapshots must be two-dimensional");
        auto oracle = radii_at(traj, snap.time);
        std::vector<std::size_t> alive;
        for (std::size_t i = 0; i < oracle.size(); ++i)
            if (oracle[i] > 0.0) alive.push_back(i);

        auto loops = extract_interface_2d(snap.field);
        if (loops.size() != alive.size()) {
            res.topology_event = true;
            res.event_time = snap.time;
            return res;
        }
        std::vector<char> used(alive.size(), 0);
        const std::size_t rows_before = res.rows.size();
        const double max_before = res.max_radius_error;
        for (const auto& loop : loops) {
            auto fit = fit_circle(loop);
            std::size_t best = alive.size();
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < alive.size(); ++j) {
                if (used[j]) continue;
                double d = torus_distance(fit.center, sys.centers[alive[j]], 2);
                if (d < best_d) {
                    best_d = d;
                    best = j;
                }
            }
            if (best == alive.size() || best_d > 0.25) {
                res.topology_event = true;
                res.event_time = snap.time;
                res.rows.resize(rows_before);
                res.max_radius_error = max_before;
                return res;
            }
            used[best] = 1;
            res.max_radius_error =
                std::max(res.max_radius_error, std::fabs(fit.radius - oracle[alive[best]]));
            res.rows.push_back({snap.time, static_cast<double>(alive[best]), fit.radius,
                                oracle[alive[best]]});
        }
        ++res.snapshots_compared;
    }
    return res;
}

}  // namespace vpmf
