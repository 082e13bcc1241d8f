#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "vpmf/commands.hpp"
#include "vpmf/oracle2d.hpp"

namespace {

struct CliError : std::runtime_error {
    CliError(const std::string& type, const std::string& msg, int code)
        : std::runtime_error(msg), type(type), code(code) {}
    std::string type;
    int code;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError("io", "cannot open config file '" + path + "'", 2);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int fail(const std::string& type, const std::string& msg, int code) {
    nlohmann::json j;
    j["error"] = {{"type", type}, {"message", msg}};
    std::cerr << j.dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"volume-preserving phase-field flow: runner, sweeps, identity checks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string dir;
    auto add_common = [&](CLI::App* sub, bool with_dir) {
        sub->add_option("config", config_path, "INI scenario file")->required();
        if (with_dir)
            sub->add_option("--dir", dir, "run directory (default: the config's output dir)");
    };
    CLI::App* c_run = app.add_subcommand("run", "evolve the scenario, write diagnostics");
    add_common(c_run, false);
    CLI::App* c_sweep = app.add_subcommand("sweep", "run the epsilon sweep and its assertions");
    add_common(c_sweep, false);
    CLI::App* c_brakke =
        app.add_subcommand("check-brakke", "evaluate the identity on stored snapshots");
    add_common(c_brakke, true);
    CLI::App* c_oracle =
        app.add_subcommand("oracle-compare", "compare stored snapshots with the circle system");
    add_common(c_oracle, true);

    CLI11_PARSE(app, argc, argv);

    try {
        vpmf::RunConfig cfg = vpmf::parse_config(slurp(config_path));
        const std::string run_dir = dir.empty() ? cfg.output_dir : dir;
        if (app.got_subcommand(c_run)) {
            vpmf::cmd_run(cfg);
            std::cout << "run: wrote " << cfg.output_dir << "/diagnostics.csv\n";
        } else if (app.got_subcommand(c_sweep)) {
            vpmf::cmd_sweep(cfg);
            std::cout << "sweep: all assertions hold, report at " << cfg.output_dir
                      << "/sweep_report.json\n";
        } else if (app.got_subcommand(c_brakke)) {
            vpmf::cmd_check_brakke(cfg, run_dir);
            std::cout << "check-brakke: wrote " << run_dir << "/brakke_reports.json\n";
        } else if (app.got_subcommand(c_oracle)) {
            vpmf::cmd_oracle_compare(cfg, run_dir);
            std::cout << "oracle-compare: wrote " << run_dir << "/oracle_compare_summary.json\n";
        }
    } catch (const CliError& e) {
        return fail(e.type, e.what(), e.code);
    } catch (const vpmf::AssertionFailure& e) {
        return fail("assertion", e.what(), 1);
    } catch (const vpmf::ConfigError& e) {
        return fail("config", e.what(), 2);
    } catch (const vpmf::InstabilityError& e) {
        return fail("instability", e.what(), 3);
    } catch (const vpmf::StepSizeError& e) {
        return fail("step_size", e.what(), 3);
    } catch (const std::invalid_argument& e) {
        return fail("config", e.what(), 2);
    } catch (const std::exception& e) {
        return fail("runtime", e.what(), 3);
    }
    return 0;
}
