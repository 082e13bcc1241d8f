#include "vpmf/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <vector>

#include "json.hpp"
#include "vpmf/brakke.hpp"
#include "vpmf/diagnostics.hpp"
#include "vpmf/initial_data.hpp"
#include "vpmf/oracle2d.hpp"
#include "vpmf/snapshot.hpp"
#include "vpmf/sweep.hpp"

namespace fs = std::filesystem;

namespace vpmf {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json region_json(const Region& r) {
    nlohmann::json j;
    j["kind"] = region_kind_name(r.kind);
    if (!r.centers.empty()) {
        nlohmann::json cs = nlohmann::json::array();
        for (const auto& c : r.centers) cs.push_back({c[0], c[1], c[2]});
        j["centers"] = cs;
    }
    if (!r.radii.empty()) j["radii"] = r.radii;
    if (r.kind == RegionKind::ellipse) j["semi_axes"] = {r.semi_axes[0], r.semi_axes[1]};
    if (r.kind == RegionKind::stripe) j["half_width"] = r.half_width;
    return j;
}

struct RunMeta {
    double epsilon, alpha, dt, t_final, volume_target, E0;
    int n, dim;
    std::string scheme;
};

RunMeta read_meta(const std::string& dir) {
    std::ifstream in(fs::path(dir) / "run_meta.json");
    if (!in) throw ConfigError("cannot open " + dir + "/run_meta.json (run the scenario first)");
    nlohmann::json j = nlohmann::json::parse(in);
    RunMeta m;
    m.epsilon = j.at("epsilon").get<double>();
    m.alpha = j.at("alpha").get<double>();
    m.dt = j.at("dt").get<double>();
    m.t_final = j.at("t_final").get<double>();
    m.volume_target = j.at("volume_target").get<double>();
    m.E0 = j.at("E0").get<double>();
    m.n = j.at("n").get<int>();
    m.dim = j.at("dim").get<int>();
    m.scheme = j.at("scheme").get<std::string>();
    return m;
}

bool close_rel(double a, double b) {
    return std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

void require_meta_match(const RunMeta& m, const RunConfig& cfg) {
    const char* schemes = cfg.params.scheme == Scheme::imex ? "imex" : "explicit";
    if (!close_rel(m.epsilon, cfg.params.epsilon) || !close_rel(m.alpha, cfg.params.alpha) ||
        !close_rel(m.dt, cfg.params.dt) || m.n != cfg.params.grid.n ||
        m.dim != cfg.params.grid.dim || m.scheme != schemes)
        throw ConfigError(
            "run_meta.json does not match this config (epsilon/alpha/dt/n/dim/scheme); "
            "point the command at the directory the run actually wrote");
}

// snap_*.vpmf in step order; the 8-digit zero padding makes the lexical sort
// numeric.
std::vector<std::string> snapshot_paths(const std::string& dir) {
    std::vector<std::string> paths;
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (name.rfind("snap_", 0) == 0 && name.size() > 10 &&
            name.compare(name.size() - 5, 5, ".vpmf") == 0)
            paths.push_back(e.path().string());
    }
    std::sort(paths.begin(), paths.end());
    return paths;
}

}  // namespace

int cmd_run(const RunConfig& cfg) {
    cfg.params.validate();
    cfg.region.validate(cfg.params.grid.dim, cfg.params.epsilon);
    fs::create_directories(cfg.output_dir);
    InitialProfile profile = build_phi0(cfg.region, cfg.params.epsilon, cfg.params.grid);

    const SolverParams& p = cfg.params;
    const long nsteps = static_cast<long>(std::ceil(p.t_final / p.dt - 1e-9));
    std::string csv = diagnostics_csv_header() + "\n";
    long k = 0;
    Observer obs = [&](const PhaseState& s) {
        if (k % cfg.record_stride == 0 || k == nsteps)
            csv += diagnostics_csv_row(make_record(s, p, cfg.cheap_observables && k != nsteps)) +
                   "\n";
        if (cfg.snapshot_stride > 0 && k % cfg.snapshot_stride == 0 && k != nsteps) {
            char name[32];
            std::snprintf(name, sizeof(name), "snap_%08ld.vpmf", k);
            write_snapshot((fs::path(cfg.output_dir) / name).string(), Snapshot{s.t, s.phi});
        }
        ++k;
    };
    PhaseState final_state = run(p, profile, {obs}, 1);

    if (cfg.snapshot_stride > 0) {
        char name[32];
        std::snprintf(name, sizeof(name), "snap_%08ld.vpmf", nsteps);
        write_snapshot((fs::path(cfg.output_dir) / name).string(),
                       Snapshot{final_state.t, final_state.phi});
    }
    write_snapshot((fs::path(cfg.output_dir) / "final_state.vpmf").string(),
                   Snapshot{final_state.t, final_state.phi});
    atomic_write_file((fs::path(cfg.output_dir) / "diagnostics.csv").string(), csv);

    nlohmann::json meta;
    meta["epsilon"] = p.epsilon;
    meta["alpha"] = p.alpha;
    meta["dt"] = p.dt;
    meta["t_final"] = p.t_final;
    meta["scheme"] = p.scheme == Scheme::imex ? "imex" : "explicit";
    meta["n"] = p.grid.n;
    meta["dim"] = p.grid.dim;
    meta["record_stride"] = cfg.record_stride;
    meta["snapshot_stride"] = cfg.snapshot_stride;
    meta["volume_target"] = profile.volume_target;
    meta["E0"] = surface_energy(profile.phi0, p.epsilon);  // lambda(0) = 0, no penalty part
    meta["region"] = region_json(cfg.region);
    atomic_write_file((fs::path(cfg.output_dir) / "run_meta.json").string(), meta.dump(2) + "\n");
    return 0;
}

int cmd_check_brakke(const RunConfig& cfg, const std::string& dir) {
    const RunMeta meta = read_meta(dir);
    require_meta_match(meta, cfg);

    nlohmann::json root;
    if (cfg.brakke_tests.empty()) {
        root["C"] = 0.0;
        root["reports"] = nlohmann::json::array();
        atomic_write_file((fs::path(dir) / "brakke_reports.json").string(), root.dump(2) + "\n");
        return 0;
    }

    BrakkeAccumulator acc(cfg.brakke_tests, cfg.params);
    const auto paths = snapshot_paths(dir);
    if (paths.empty())
        throw ConfigError("no snap_*.vpmf files in " + dir +
                          " (set snapshot_stride = 1 on the run)");
    for (const auto& path : paths) {
        Snapshot snap = read_snapshot(path);
        PhaseState s;
        s.t = snap.time;
        s.lambda = lambda_eps(snap.field, meta.volume_target, meta.epsilon, meta.alpha);
        s.volume_target = meta.volume_target;
        s.phi = std::move(snap.field);
        acc.feed(s);
    }

    double C = cfg.brakke_C;
    if (C <= 0.0) {
        for (const auto& rep : acc.finish(0.0)) C = std::max(C, 2.0 * rep.c_emp);
    }
    const auto reports = acc.finish(C);

    root["C"] = C;
    nlohmann::json jr = nlohmann::json::array();
    for (const auto& rep : reports) jr.push_back(nlohmann::json::parse(brakke_report_json(rep)));
    root["reports"] = jr;
    atomic_write_file((fs::path(dir) / "brakke_reports.json").string(), root.dump(2) + "\n");

    for (const auto& rep : reports) {
        if (rep.weak_margin < 0.0)
            throw AssertionFailure("brakke: weak margin " + fmt17(rep.weak_margin) +
                                   " < 0 for the test at r=" + fmt17(rep.test.r));
        if (cfg.brakke_max_residual > 0.0 && rep.normalized_residual > cfg.brakke_max_residual)
            throw AssertionFailure("brakke: normalized residual " +
                                   fmt17(rep.normalized_residual) + " exceeds the bound " +
                                   fmt17(cfg.brakke_max_residual));
    }
    return 0;
}

int cmd_oracle_compare(const RunConfig& cfg, const std::string& dir) {
    if (cfg.region.kind != RegionKind::ball && cfg.region.kind != RegionKind::two_balls)
        throw ConfigError("oracle-compare needs a ball or two_balls region");
    if (cfg.params.grid.dim != 2) throw ConfigError("oracle-compare is two-dimensional only");
    const RunMeta meta = read_meta(dir);
    require_meta_match(meta, cfg);

    std::vector<Snapshot> snaps;
    for (const auto& path : snapshot_paths(dir)) snaps.push_back(read_snapshot(path));
    Snapshot last = read_snapshot((fs::path(dir) / "final_state.vpmf").string());
    if (snaps.empty() || std::fabs(snaps.back().time - last.time) > 1e-12)
        snaps.push_back(std::move(last));

    CircleSystem sys;
    sys.radii = cfg.region.radii;
    for (const auto& c : cfg.region.centers) sys.centers.push_back(c);
    const double t_end = snaps.back().time;
    CircleTrajectory traj = evolve_circles(sys, cfg.oracle_dt, t_end);
    CompareResult res = compare_phase_field(snaps, sys, traj);

    std::string csv = "t,slot,r_fit,r_oracle,abs_err\n";
    for (const auto& row : res.rows) {
        csv += fmt17(row[0]) + "," + fmt17(row[1]) + "," + fmt17(row[2]) + "," + fmt17(row[3]) +
               "," + fmt17(std::fabs(row[2] - row[3])) + "\n";
    }
    atomic_write_file((fs::path(dir) / "oracle_compare.csv").string(), csv);
    atomic_write_file((fs::path(dir) / "oracle_trajectory.csv").string(), trajectory_csv(traj));

    nlohmann::json summary;
    summary["max_radius_error"] = res.max_radius_error;
    summary["snapshots_compared"] = res.snapshots_compared;
    summary["topology_event"] = res.topology_event;
    summary["event_time"] = res.event_time;
    atomic_write_file((fs::path(dir) / "oracle_compare_summary.json").string(),
                      summary.dump(2) + "\n");
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    SweepOutcome outcome = run_sweep(cfg);
    fs::create_directories(cfg.output_dir);
    for (const auto& m : outcome.members)
        atomic_write_file((fs::path(cfg.output_dir) / m.csv_name).string(), m.csv_text);
    atomic_write_file((fs::path(cfg.output_dir) / "sweep_report.json").string(),
                      outcome.report_json);
    if (!outcome.all_pass)
        throw AssertionFailure("sweep: a trend assertion failed; see sweep_report.json");
    return 0;
}

}  // namespace vpmf
