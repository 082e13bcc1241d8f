#include "vpmf/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

namespace vpmf {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, int line, const std::string& key) {
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || v.empty())
        fail(line, "value of '" + key + "' is not a number: '" + v + "'");
    return x;
}

long to_int(const std::string& v, int line, const std::string& key) {
    char* end = nullptr;
    long x = std::strtol(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size() || v.empty())
        fail(line, "value of '" + key + "' is not an integer: '" + v + "'");
    return x;
}

std::vector<std::string> tokens(const std::string& v) {
    std::istringstream is(v);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

struct RawEntry {
    std::string value;
    int line;
};

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> k = {
        {"solver", {"epsilon", "alpha", "n", "dim", "scheme", "dt", "t_final", "oracle_dt"}},
        {"region",
         {"kind", "center", "radius", "center2", "radius2", "semi_axes", "half_width"}},
        {"output", {"dir", "record_stride", "snapshot_stride", "observables"}},
        {"brakke", {"test", "C", "max_residual"}},
        {"sweep", {"epsilons", "ns", "assert"}},
    };
    return k;
}

std::array<double, 3> parse_point(const std::string& v, int dim, int line, const std::string& key) {
    auto t = tokens(v);
    if (static_cast<int>(t.size()) != dim)
        fail(line, "'" + key + "' needs " + std::to_string(dim) + " coordinates, got " +
                       std::to_string(t.size()));
    std::array<double, 3> p{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) p[a] = to_double(t[a], line, key);
    return p;
}

void append_num(std::string& out, const char* key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s = %.17g\n", key, v);
    out += buf;
}

}  // namespace

const std::vector<std::string>& sweep_observable_names() {
    static const std::vector<std::string> names = {
        "E_S",      "E_P",          "lambda",          "vol_k",   "vol_psi",
        "xi_total", "mu_total",     "density_ratio_sup", "xi_over_es", "lambda_l2_ratio",
        "vol_k_max_dev", "psi_err", "mu_err"};
    return names;
}

RunConfig parse_config(const std::string& text) {
    // one pass collecting raw entries, then typed extraction with defaults
    std::map<std::string, std::map<std::string, RawEntry>> single;
    std::map<std::string, std::vector<RawEntry>> repeated;  // "brakke.test", "sweep.assert"
    std::set<std::string> seen_sections;

    std::istringstream is(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(line, "malformed section header '" + s + "'");
            section = trim(s.substr(1, s.size() - 2));
            if (!known_keys().count(section)) fail(line, "unknown section [" + section + "]");
            if (!seen_sections.insert(section).second)
                fail(line, "duplicate section [" + section + "]");
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value', got '" + s + "'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (section.empty()) fail(line, "key '" + key + "' appears before any section");
        if (!known_keys().at(section).count(key))
            fail(line, "unknown key '" + key + "' in [" + section + "]");
        const bool is_repeated =
            (section == "brakke" && key == "test") || (section == "sweep" && key == "assert");
        if (is_repeated) {
            repeated[section + "." + key].push_back({value, line});
        } else {
            auto [it, fresh] = single[section].try_emplace(key, RawEntry{value, line});
            if (!fresh) fail(line, "duplicate key '" + key + "' in [" + section + "]");
        }
    }

    auto get = [&](const std::string& sec, const std::string& key) -> const RawEntry* {
        auto s = single.find(sec);
        if (s == single.end()) return nullptr;
        auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    };
    auto require = [&](const std::string& sec, const std::string& key) -> const RawEntry& {
        const RawEntry* e = get(sec, key);
        if (!e) throw ConfigError("config: missing required key '" + key + "' in [" + sec + "]");
        return *e;
    };

    RunConfig cfg;

    // [solver]
    const double eps = to_double(require("solver", "epsilon").value,
                                 require("solver", "epsilon").line, "epsilon");
    const long n = to_int(require("solver", "n").value, require("solver", "n").line, "n");
    long dim = 2;
    if (const RawEntry* e = get("solver", "dim")) dim = to_int(e->value, e->line, "dim");
    cfg.params.epsilon = eps;
    cfg.params.grid = TorusGrid::make(static_cast<int>(dim), static_cast<int>(n));
    if (const RawEntry* e = get("solver", "alpha"))
        cfg.params.alpha = to_double(e->value, e->line, "alpha");
    if (const RawEntry* e = get("solver", "scheme")) {
        if (e->value == "imex")
            cfg.params.scheme = Scheme::imex;
        else if (e->value == "explicit")
            cfg.params.scheme = Scheme::explicit_euler;
        else
            fail(e->line, "scheme must be 'imex' or 'explicit', got '" + e->value + "'");
    }
    cfg.params.t_final =
        to_double(require("solver", "t_final").value, require("solver", "t_final").line, "t_final");
    if (const RawEntry* e = get("solver", "oracle_dt"))
        cfg.oracle_dt = to_double(e->value, e->line, "oracle_dt");
    if (!(cfg.oracle_dt > 0.0)) throw ConfigError("config: oracle_dt must be positive");

    const RawEntry* dte = get("solver", "dt");
    if (!dte || dte->value == "auto")
        cfg.params.dt = snapped_auto_dt(cfg.params.t_final, cfg.params.dt_limit());
    else
        cfg.params.dt = to_double(dte->value, dte->line, "dt");

    // [region]
    const RawEntry& kind_e = require("region", "kind");
    RegionKind kind;
    try {
        kind = region_kind_from_name(kind_e.value);
    } catch (const std::exception&) {
        fail(kind_e.line, "unknown region kind '" + kind_e.value + "'");
    }
    auto forbid = [&](const char* key) {
        if (const RawEntry* e = get("region", key))
            fail(e->line, std::string("key '") + key + "' is not valid for region kind '" +
                              kind_e.value + "'");
    };
    const int d = cfg.params.grid.dim;
    switch (kind) {
        case RegionKind::ball: {
            forbid("center2");
            forbid("radius2");
            forbid("semi_axes");
            forbid("half_width");
            auto c = parse_point(require("region", "center").value, d,
                                 require("region", "center").line, "center");
            double r = to_double(require("region", "radius").value,
                                 require("region", "radius").line, "radius");
            cfg.region = Region::ball(c, r);
            break;
        }
        case RegionKind::two_balls: {
            forbid("semi_axes");
            forbid("half_width");
            auto c1 = parse_point(require("region", "center").value, d,
                                  require("region", "center").line, "center");
            auto c2 = parse_point(require("region", "center2").value, d,
                                  require("region", "center2").line, "center2");
            double r1 = to_double(require("region", "radius").value,
                                  require("region", "radius").line, "radius");
            double r2 = to_double(require("region", "radius2").value,
                                  require("region", "radius2").line, "radius2");
            cfg.region = Region::two_balls(c1, r1, c2, r2);
            break;
        }
        case RegionKind::ellipse: {
            forbid("center2");
            forbid("radius2");
            forbid("radius");
            forbid("half_width");
            auto c = parse_point(require("region", "center").value, d,
                                 require("region", "center").line, "center");
            const RawEntry& ax = require("region", "semi_axes");
            auto t = tokens(ax.value);
            if (t.size() != 2) fail(ax.line, "'semi_axes' needs exactly 2 values");
            cfg.region = Region::ellipse(c, to_double(t[0], ax.line, "semi_axes"),
                                         to_double(t[1], ax.line, "semi_axes"));
            break;
        }
        case RegionKind::stripe: {
            forbid("center");
            forbid("center2");
            forbid("radius");
            forbid("radius2");
            forbid("semi_axes");
            cfg.region = Region::stripe(to_double(require("region", "half_width").value,
                                                  require("region", "half_width").line,
                                                  "half_width"));
            break;
        }
    }

    // [output]
    if (const RawEntry* e = get("output", "dir")) cfg.output_dir = e->value;
    if (const RawEntry* e = get("output", "record_stride")) {
        cfg.record_stride = static_cast<int>(to_int(e->value, e->line, "record_stride"));
        if (cfg.record_stride < 1) fail(e->line, "record_stride must be >= 1");
    }
    if (const RawEntry* e = get("output", "snapshot_stride")) {
        cfg.snapshot_stride = static_cast<int>(to_int(e->value, e->line, "snapshot_stride"));
        if (cfg.snapshot_stride < 0) fail(e->line, "snapshot_stride must be >= 0");
    }
    if (const RawEntry* e = get("output", "observables")) {
        if (e->value == "all")
            cfg.cheap_observables = false;
        else if (e->value == "cheap")
            cfg.cheap_observables = true;
        else
            fail(e->line, "observables must be 'all' or 'cheap'");
    }

    // [brakke]
    if (const RawEntry* e = get("brakke", "C")) {
        cfg.brakke_C = to_double(e->value, e->line, "C");
        if (cfg.brakke_C < 0.0) fail(e->line, "C must be >= 0");
    }
    if (const RawEntry* e = get("brakke", "max_residual")) {
        cfg.brakke_max_residual = to_double(e->value, e->line, "max_residual");
        if (cfg.brakke_max_residual < 0.0) fail(e->line, "max_residual must be >= 0");
    }
    for (const RawEntry& e : repeated["brakke.test"]) {
        auto t = tokens(e.value);
        const std::size_t want = static_cast<std::size_t>(d) + 4;
        if (t.size() != want)
            fail(e.line, "brakke test needs '" + std::string(d == 2 ? "x y" : "x y z") +
                             " r t1 t2 one|hat'");
        BrakkeTest bt;
        for (int a = 0; a < d; ++a) bt.x0[a] = to_double(t[a], e.line, "test");
        bt.r = to_double(t[d], e.line, "test");
        bt.t1 = to_double(t[d + 1], e.line, "test");
        bt.t2 = to_double(t[d + 2], e.line, "test");
        const std::string& prof = t[d + 3];
        if (prof == "one")
            bt.temporal = BrakkeTest::Temporal::constant_one;
        else if (prof == "hat")
            bt.temporal = BrakkeTest::Temporal::hat;
        else
            fail(e.line, "brakke test temporal profile must be 'one' or 'hat'");
        try {
            bt.validate();
        } catch (const std::exception& ex) {
            fail(e.line, ex.what());
        }
        if (bt.t2 > cfg.params.t_final + 1e-12)
            fail(e.line, "brakke window extends past t_final");
        cfg.brakke_tests.push_back(bt);
    }

    // [sweep]
    const bool sweep_eps = get("sweep", "epsilons") != nullptr;
    const bool sweep_ns = get("sweep", "ns") != nullptr;
    if (sweep_eps != sweep_ns)
        throw ConfigError("config: [sweep] needs both 'epsilons' and 'ns'");
    if (sweep_eps) {
        cfg.has_sweep = true;
        const RawEntry& ee = *get("sweep", "epsilons");
        for (const auto& t : tokens(ee.value))
            cfg.sweep_epsilons.push_back(to_double(t, ee.line, "epsilons"));
        const RawEntry& ne = *get("sweep", "ns");
        for (const auto& t : tokens(ne.value))
            cfg.sweep_ns.push_back(static_cast<int>(to_int(t, ne.line, "ns")));
        if (cfg.sweep_epsilons.empty()) fail(ee.line, "'epsilons' must not be empty");
        if (cfg.sweep_epsilons.size() != cfg.sweep_ns.size())
            fail(ne.line, "'epsilons' and 'ns' must have the same length");
        for (std::size_t i = 1; i < cfg.sweep_epsilons.size(); ++i)
            if (!(cfg.sweep_epsilons[i] < cfg.sweep_epsilons[i - 1]))
                fail(ee.line, "'epsilons' must be strictly descending");
        for (std::size_t i = 0; i < cfg.sweep_epsilons.size(); ++i)
            if (cfg.sweep_epsilons[i] * cfg.sweep_ns[i] < 2.0)
                fail(ee.line, "sweep member " + std::to_string(i) +
                                  " is under-resolved: epsilon >= 4h recommended and epsilon >= "
                                  "2h required");
    }
    for (const RawEntry& e : repeated["sweep.assert"]) {
        if (!cfg.has_sweep) fail(e.line, "'assert' requires 'epsilons' and 'ns'");
        auto t = tokens(e.value);
        if (t.size() != 3) fail(e.line, "assert needs '<observable> <decreasing|uniform> <factor>'");
        TrendAssertion ta;
        ta.observable = t[0];
        const auto& names = sweep_observable_names();
        if (std::find(names.begin(), names.end(), ta.observable) == names.end())
            fail(e.line, "unknown observable '" + ta.observable + "'");
        if (t[1] == "decreasing")
            ta.decreasing = true;
        else if (t[1] == "uniform")
            ta.decreasing = false;
        else
            fail(e.line, "assert direction must be 'decreasing' or 'uniform'");
        ta.factor = to_double(t[2], e.line, "assert");
        if (!(ta.factor >= 1.0)) fail(e.line, "assert factor must be >= 1");
        cfg.sweep_asserts.push_back(ta);
    }

    // final cross-checks, reusing the solver and initial-data precondition text
    cfg.region.validate(cfg.params.grid.dim, cfg.params.epsilon);
    cfg.params.validate();
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    std::string out = "[solver]\n";
    append_num(out, "epsilon", cfg.params.epsilon);
    append_num(out, "alpha", cfg.params.alpha);
    out += "n = " + std::to_string(cfg.params.grid.n) + "\n";
    out += "dim = " + std::to_string(cfg.params.grid.dim) + "\n";
    out += std::string("scheme = ") +
           (cfg.params.scheme == Scheme::imex ? "imex" : "explicit") + "\n";
    append_num(out, "dt", cfg.params.dt);
    append_num(out, "t_final", cfg.params.t_final);
    append_num(out, "oracle_dt", cfg.oracle_dt);

    out += "\n[region]\n";
    out += "kind = " + region_kind_name(cfg.region.kind) + "\n";
    const int d = cfg.params.grid.dim;
    char buf[160];
    auto point = [&](const char* key, const std::array<double, 3>& p) {
        if (d == 2)
            std::snprintf(buf, sizeof buf, "%s = %.17g %.17g\n", key, p[0], p[1]);
        else
            std::snprintf(buf, sizeof buf, "%s = %.17g %.17g %.17g\n", key, p[0], p[1], p[2]);
        out += buf;
    };
    switch (cfg.region.kind) {
        case RegionKind::ball:
            point("center", cfg.region.centers[0]);
            append_num(out, "radius", cfg.region.radii[0]);
            break;
        case RegionKind::two_balls:
            point("center", cfg.region.centers[0]);
            append_num(out, "radius", cfg.region.radii[0]);
            point("center2", cfg.region.centers[1]);
            append_num(out, "radius2", cfg.region.radii[1]);
            break;
        case RegionKind::ellipse:
            point("center", cfg.region.centers[0]);
            std::snprintf(buf, sizeof buf, "semi_axes = %.17g %.17g\n", cfg.region.semi_axes[0],
                          cfg.region.semi_axes[1]);
            out += buf;
            break;
        case RegionKind::stripe:
            append_num(out, "half_width", cfg.region.half_width);
            break;
    }

    out += "\n[output]\n";
    out += "dir = " + cfg.output_dir + "\n";
    out += "record_stride = " + std::to_string(cfg.record_stride) + "\n";
    out += "snapshot_stride = " + std::to_string(cfg.snapshot_stride) + "\n";
    out += std::string("observables = ") + (cfg.cheap_observables ? "cheap" : "all") + "\n";

    if (!cfg.brakke_tests.empty() || cfg.brakke_C != 0.0 || cfg.brakke_max_residual != 0.0) {
        out += "\n[brakke]\n";
        append_num(out, "C", cfg.brakke_C);
        append_num(out, "max_residual", cfg.brakke_max_residual);
        for (const auto& t : cfg.brakke_tests) {
            out += "test =";
            for (int a = 0; a < d; ++a) {
                std::snprintf(buf, sizeof buf, " %.17g", t.x0[a]);
                out += buf;
            }
            std::snprintf(buf, sizeof buf, " %.17g %.17g %.17g %s\n", t.r, t.t1, t.t2,
                          t.temporal == BrakkeTest::Temporal::constant_one ? "one" : "hat");
            out += buf;
        }
    }

    if (cfg.has_sweep) {
        out += "\n[sweep]\nepsilons =";
        for (double e : cfg.sweep_epsilons) {
            std::snprintf(buf, sizeof buf, " %.17g", e);
            out += buf;
        }
        out += "\nns =";
        for (int n : cfg.sweep_ns) out += " " + std::to_string(n);
        out += "\n";
        for (const auto& a : cfg.sweep_asserts) {
            std::snprintf(buf, sizeof buf, "assert = %s %s %.17g\n", a.observable.c_str(),
                          a.decreasing ? "decreasing" : "uniform", a.factor);
            out += buf;
        }
    }
    return out;
}

bool operator==(const TrendAssertion& a, const TrendAssertion& b) {
    return a.observable == b.observable && a.decreasing == b.decreasing && a.factor == b.factor;
}

namespace {

bool region_equal(const Region& a, const Region& b) {
    return a.kind == b.kind && a.centers == b.centers && a.radii == b.radii &&
           a.semi_axes == b.semi_axes && a.half_width == b.half_width;
}

bool test_equal(const BrakkeTest& a, const BrakkeTest& b) {
    return a.x0 == b.x0 && a.r == b.r && a.t1 == b.t1 && a.t2 == b.t2 &&
           a.temporal == b.temporal;
}

}  // namespace

bool operator==(const RunConfig& a, const RunConfig& b) {
    if (!(a.params.epsilon == b.params.epsilon && a.params.alpha == b.params.alpha &&
          a.params.dt == b.params.dt && a.params.t_final == b.params.t_final &&
          a.params.scheme == b.params.scheme && a.params.grid == b.params.grid))
        return false;
    if (!region_equal(a.region, b.region)) return false;
    if (a.output_dir != b.output_dir || a.record_stride != b.record_stride ||
        a.snapshot_stride != b.snapshot_stride || a.cheap_observables != b.cheap_observables ||
        a.oracle_dt != b.oracle_dt)
        return false;
    if (a.brakke_tests.size() != b.brakke_tests.size()) return false;
    for (std::size_t i = 0; i < a.brakke_tests.size(); ++i)
        if (!test_equal(a.brakke_tests[i], b.brakke_tests[i])) return false;
    if (a.brakke_C != b.brakke_C || a.brakke_max_residual != b.brakke_max_residual) return false;
    return a.has_sweep == b.has_sweep && a.sweep_epsilons == b.sweep_epsilons &&
           a.sweep_ns == b.sweep_ns && a.sweep_asserts == b.sweep_asserts;
}

}  // namespace vpmf
