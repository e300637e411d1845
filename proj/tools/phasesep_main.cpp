// Command-line front end: threshold solvers, separability checks, trajectory
// tables, grid runs, and smear certificates, with JSON/CSV reports.

#include <phasesep/bipartite.hpp>
#include <phasesep/io.hpp>
#include <phasesep/phase_space.hpp>
#include <phasesep/single_particle.hpp>
#include <phasesep/solver.hpp>
#include <phasesep/svg.hpp>
#include <phasesep/wigner_grid.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

using nlohmann::json;
using namespace phasesep;

constexpr const char* kToolVersion = "0.1.0";

struct CommonOpts {
    double hbar = 1.0;
    double mass = 1.0;
    double diffusion = 1.0;
    std::string output;        // empty -> stdout
    std::string format = "json";
    bool no_meta = false;
};

PhysicalParams params_of(const CommonOpts& c) {
    PhysicalParams p{c.hbar, c.mass, c.diffusion};
    p.validate();
    return p;
}

std::string precision_name() {
    const char* env = std::getenv("PHASESEP_PRECISION");
    if (env == nullptr || *env == '\0') return "strict";
    return env;
}

void add_report_opts(CLI::App* cmd, CommonOpts& c, bool with_params = true) {
    if (with_params) {
        cmd->add_option("--hbar", c.hbar, "reduced Planck constant")->check(CLI::PositiveNumber);
        cmd->add_option("--mass", c.mass, "particle mass")->check(CLI::PositiveNumber);
        cmd->add_option("--diffusion", c.diffusion, "momentum diffusion coefficient D")
            ->check(CLI::PositiveNumber);
    }
    cmd->add_option("-o,--output", c.output, "write the report to this file instead of stdout");
    cmd->add_option("--format", c.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_flag("--no-meta", c.no_meta, "omit the timestamp so reruns are byte-identical");
}

json base_config(const std::string& subcommand, const CommonOpts& c) {
    json cfg;
    cfg["subcommand"] = subcommand;
    cfg["hbar"] = c.hbar;
    cfg["mass"] = c.mass;
    cfg["diffusion"] = c.diffusion;
    cfg["format"] = c.format;
    cfg["precision"] = precision_name();
    return cfg;
}

json meta_block(bool no_meta) {
    json meta;
    meta["tool"] = "phasesep";
    meta["version"] = kToolVersion;
    if (!no_meta) {
        std::time_t now = std::time(nullptr);
        char buf[32];
        std::tm tm_utc{};
        gmtime_r(&now, &tm_utc);
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
        meta["timestamp"] = buf;
    }
    return meta;
}

json assemble_report(json payload, json config, bool no_meta) {
    payload["config"] = std::move(config);
    payload["meta"] = meta_block(no_meta);
    return payload;
}

void flatten_json(const json& j, const std::string& prefix,
                  std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (const auto& item : j.items()) {
            const std::string key = prefix.empty() ? item.key() : prefix + "." + item.key();
            flatten_json(item.value(), key, out);
        }
    } else if (j.is_array()) {
        int i = 0;
        for (const auto& v : j) {
            flatten_json(v, prefix + "[" + std::to_string(i++) + "]", out);
        }
    } else if (j.is_string()) {
        out.emplace_back(prefix, j.get<std::string>());
    } else {
        out.emplace_back(prefix, j.dump());
    }
}

std::string render_report(const json& doc, const std::string& format) {
    if (format == "json") return doc.dump(2) + "\n";
    std::vector<std::pair<std::string, std::string>> rows;
    flatten_json(doc, "", rows);
    std::ostringstream os;
    os << "key,value\n";
    for (const auto& [k, v] : rows) os << k << "," << v << "\n";
    return os.str();
}

void write_text(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open output file: " + path);
    os << text;
    if (!os) throw std::domain_error("failed writing output file: " + path);
}

void emit_report(const json& payload, const json& config, const CommonOpts& c) {
    json doc = assemble_report(payload, config, c.no_meta);
    write_text(render_report(doc, c.format), c.output);
}

// Trajectory and summary tables keep the pinned CSV layout (header first,
// no comment lines); the resolved configuration goes to a sidecar JSON file
// next to the table when writing to disk.
void write_table(const std::string& table, const json& config, const CommonOpts& c) {
    write_text(table, c.output);
    if (!c.output.empty()) {
        json doc;
        doc["config"] = config;
        doc["meta"] = meta_block(c.no_meta);
        write_text(doc.dump(2) + "\n", c.output + ".meta.json");
    }
}

std::string format_bool(bool b) { return b ? "1" : "0"; }

// ---------------------------------------------------------------------------
// disentangle-time

struct DisentangleOpts {
    CommonOpts common;
    double s = 1.0;
    bool optimize = false;
    double s_min = 0.5;
    double s_max = 1.5;
    CLI::Option* s_opt = nullptr;
    CLI::Option* optimize_opt = nullptr;
};

int run_disentangle(const DisentangleOpts& o) {
    if (o.optimize && o.s_opt->count() > 0)
        throw std::invalid_argument("choose either --s or --optimize-s, not both");
    const SolverSettings settings = SolverSettings::from_env();
    const PhysicalParams params = params_of(o.common);

    json config = base_config("disentangle-time", o.common);
    json payload;
    if (o.optimize) {
        config["optimize_s"] = true;
        config["s_min"] = o.s_min;
        config["s_max"] = o.s_max;
        auto [s_star, result] = optimize_s(o.s_min, o.s_max, settings);
        payload = json::parse(threshold_report_json(result, "s", params));
        payload["s_star"] = s_star;
    } else {
        config["s"] = o.s;
        ThresholdResult result = general_threshold(o.s, settings);
        payload = json::parse(threshold_report_json(result, "s", params));
    }
    emit_report(payload, config, o.common);
    return 0;
}

// ---------------------------------------------------------------------------
// epr-time

struct EprOpts {
    CommonOpts common;
    double c = 1.0;
    bool worst_case = false;
    double sP2 = 0.0;
    double sX2 = 0.0;
    CLI::Option* c_opt = nullptr;
    CLI::Option* sX2_opt = nullptr;
};

int run_epr(const EprOpts& o) {
    if (o.worst_case == (o.c_opt->count() > 0))
        throw std::invalid_argument("give exactly one of --c or --worst-case");
    const SolverSettings settings = SolverSettings::from_env();
    const PhysicalParams params = params_of(o.common);

    json config = base_config("epr-time", o.common);
    json payload;
    if (o.worst_case) {
        config["worst_case"] = true;
        auto [c_star, result] = worst_case_epr(settings);
        payload = json::parse(threshold_report_json(result, "c", params));
        payload["c_star"] = c_star;
    } else {
        config["c"] = o.c;
        config["sP2"] = o.sP2;
        ThresholdResult result;
        if (o.sX2_opt->count() > 0) {
            config["sX2"] = o.sX2;
            result = threshold(epr_condition(o.c, o.sP2, o.sX2), settings);
            result.parameter = o.c;
        } else {
            result = epr_threshold(o.c, o.sP2, settings);
        }
        payload = json::parse(threshold_report_json(result, "c", params));
    }
    emit_report(payload, config, o.common);
    return 0;
}

// ---------------------------------------------------------------------------
// evolve

struct EvolveOpts {
    CommonOpts common;
    std::string state_path;
    double t_max = 0.0;
    int steps = 100;
    std::string svg_path;
};

void require_dimensionless_params(const CommonOpts& c, const char* what) {
    if (c.hbar != 1.0 || c.mass != 1.0 || c.diffusion != 1.0)
        throw std::invalid_argument(std::string(what) +
                                    " evolve in dimensionless units; drop --hbar/--mass/--diffusion");
}

std::string one_mode_table(const GaussianState& state, double t_max, int steps,
                           const PhysicalParams& params, const std::string& svg_path) {
    std::ostringstream os;
    os << "t,mean_p,mean_x,cov_pp,cov_px,cov_xx,det_cov\n";
    std::vector<double> ts, cpp, cpx, cxx;
    for (int i = 1; i <= steps; ++i) {
        const double t = t_max * static_cast<double>(i) / static_cast<double>(steps);
        const GaussianState st = evolve(state, t, params);
        const CovarianceMatrix2 c = st.mode_cov(0);
        os << format_double(t) << ',' << format_double(st.mean(0)) << ','
           << format_double(st.mean(1)) << ',' << format_double(c.spp) << ','
           << format_double(c.spx) << ',' << format_double(c.sxx) << ','
           << format_double(c.det()) << '\n';
        ts.push_back(t);
        cpp.push_back(c.spp);
        cpx.push_back(c.spx);
        cxx.push_back(c.sxx);
    }
    if (!svg_path.empty() && !ts.empty()) {
        std::vector<std::pair<std::string, std::vector<double>>> series{
            {"cov_pp", cpp}, {"cov_px", cpx}, {"cov_xx", cxx}};
        write_text(line_chart_svg(ts, series, "t", "covariance"), svg_path);
    }
    return os.str();
}

std::string pair_table_row(double t, const FactoredBipartiteState& f) {
    const CriterionReport rep = criterion_report(f);
    const bool duan_pair = rep.duan_lhs >= 2.0 && rep.duan_mirror_lhs >= 2.0;
    std::ostringstream os;
    os << format_double(t) << ',' << format_double(f.sK2) << ',' << format_double(f.sX2)
       << ',' << format_double(f.sP2) << ',' << format_double(f.sQ2) << ','
       << format_double(rep.duan_lhs) << ',' << format_double(rep.duan_mirror_lhs) << ','
       << format_bool(rep.wigner_valid) << ',' << format_bool(rep.ph_separable) << ','
       << format_bool(duan_pair) << '\n';
    return os.str();
}

constexpr const char* kPairHeader =
    "t,sK2,sX2,sP2,sQ2,duan_lhs,duan_mirror_lhs,wigner_valid,ph_separable,duan_separable\n";

std::string pair_table(const std::vector<std::pair<double, FactoredBipartiteState>>& rows,
                       const std::string& svg_path) {
    std::ostringstream os;
    os << kPairHeader;
    std::vector<double> ts, duan, mirror;
    for (const auto& [t, f] : rows) {
        os << pair_table_row(t, f);
        ts.push_back(t);
        duan.push_back(duan_lhs(f));
        mirror.push_back(duan_mirror_lhs(f));
    }
    if (!svg_path.empty() && !ts.empty()) {
        std::vector<std::pair<std::string, std::vector<double>>> series{
            {"duan_lhs", duan}, {"duan_mirror_lhs", mirror}};
        write_text(line_chart_svg(ts, series, "t", "sum of rotated variances"), svg_path);
    }
    return os.str();
}

int run_evolve(const EvolveOpts& o) {
    if (o.t_max <= 0.0) throw std::invalid_argument("--t-max must be positive");
    if (o.steps < 0) throw std::invalid_argument("--steps must be non-negative");
    const StateVariant state = load_state_file(o.state_path);
    const PhysicalParams params = params_of(o.common);
    json config = base_config("evolve", o.common);
    config["state"] = o.state_path;
    config["t_max"] = o.t_max;
    config["steps"] = o.steps;

    std::string table;
    if (std::holds_alternative<FactoredBipartiteState>(state)) {
        require_dimensionless_params(o.common, "factored states");
        const auto& f = std::get<FactoredBipartiteState>(state);
        if (f.units != UnitSystem::dimensionless)
            throw std::invalid_argument("factored states must be dimensionless");
        std::vector<std::pair<double, FactoredBipartiteState>> rows;
        for (int i = 1; i <= o.steps; ++i) {
            const double t = o.t_max * static_cast<double>(i) / static_cast<double>(o.steps);
            rows.emplace_back(t, evolve_epr(f, t));
        }
        table = pair_table(rows, o.svg_path);
    } else {
        const auto& g = std::get<GaussianState>(state);
        if (g.modes() == 1) {
            table = one_mode_table(g, o.t_max, o.steps, params, o.svg_path);
        } else if (g.modes() == 2) {
            std::vector<std::pair<double, FactoredBipartiteState>> rows;
            for (int i = 1; i <= o.steps; ++i) {
                const double t = o.t_max * static_cast<double>(i) / static_cast<double>(o.steps);
                GaussianState st = evolve_bipartite(g, t, params);
                if (st.units == UnitSystem::si) st = to_dimensionless(st, params);
                rows.emplace_back(t, widths_from_rotated(rotate_to_epr(st)));
            }
            table = pair_table(rows, o.svg_path);
        } else {
            throw std::invalid_argument("evolve expects a one- or two-mode state");
        }
    }
    write_table(table, config, o.common);
    return 0;
}

// ---------------------------------------------------------------------------
// check

struct CheckOpts {
    CommonOpts common;
    std::string state_path;
};

int run_check(const CheckOpts& o) {
    const StateVariant state = load_state_file(o.state_path);
    const PhysicalParams params = params_of(o.common);
    json config = base_config("check", o.common);
    config["state"] = o.state_path;

    FactoredBipartiteState f;
    if (std::holds_alternative<FactoredBipartiteState>(state)) {
        f = std::get<FactoredBipartiteState>(state);
        if (f.units != UnitSystem::dimensionless)
            throw std::invalid_argument("factored states must be dimensionless");
    } else {
        GaussianState g = std::get<GaussianState>(state);
        if (g.modes() != 2)
            throw std::invalid_argument("check expects a two-mode or factored state");
        if (g.units == UnitSystem::si) g = to_dimensionless(g, params);
        f = widths_from_rotated(rotate_to_epr(g));
    }
    const CriterionReport rep = criterion_report(f);
    json payload = json::parse(criterion_report_json(rep));
    emit_report(payload, config, o.common);
    return 0;
}

// ---------------------------------------------------------------------------
// certify

struct CertifyOpts {
    CommonOpts common;
    double t_bar = 0.0;
    double s = 1.0;
};

int run_certify(const CertifyOpts& o) {
    json config = base_config("certify", o.common);
    config["t"] = o.t_bar;
    config["s"] = o.s;
    const SeparationCertificate cert = separation_certificate(o.t_bar, o.s);
    json payload = json::parse(certificate_json(cert));
    emit_report(payload, config, o.common);
    return 0;
}

// ---------------------------------------------------------------------------
// grid

struct GridOpts {
    CommonOpts common;
    std::string initial = "gaussian";
    double mean_p = 0.0;
    double mean_x = 0.0;
    double cov_pp = 0.5;
    double cov_xx = 0.5;
    double cov_px = 0.0;
    double separation = 8.0;
    int np = 512;
    int nx = 512;
    double p_max = 10.0;
    double x_max = 10.0;
    double dt = 1e-3;
    double t_max = 0.05;
    int samples = 10;
    std::vector<double> snapshot_times;
    std::string snapshot_prefix = "grid";
    std::string snapshot_format = "csv";
    std::string svg_path;
};

std::string snapshot_name(const GridOpts& o, double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "_t%.6g.%s", t,
                  o.snapshot_format == "csv" ? "csv" : "wgrd");
    return o.snapshot_prefix + buf;
}

void write_snapshot(const WignerGrid& grid, const GridOpts& o, double t) {
    const std::string path = snapshot_name(o, t);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open snapshot file: " + path);
    if (o.snapshot_format == "csv")
        write_grid_csv(os, grid);
    else
        write_grid_raster(os, grid);
    if (!os) throw std::domain_error("failed writing snapshot file: " + path);
}

int run_grid(const GridOpts& o) {
    if (o.t_max < 0.0) throw std::invalid_argument("--t-max must be non-negative");
    if (o.samples < 1) throw std::invalid_argument("--samples must be at least 1");
    const PhysicalParams params = params_of(o.common);

    GaussianMixtureState mixture;
    std::optional<Eigen::Vector2d> probe;
    if (o.initial == "gaussian") {
        const CovarianceMatrix2 cov{o.cov_pp, o.cov_xx, o.cov_px};
        if (!cov.is_psd()) throw std::invalid_argument("initial covariance is not positive");
        GaussianComponent& comp = mixture.components.emplace_back();
        comp.amplitude = 1.0;
        comp.mean = Eigen::Vector2d(o.mean_p, o.mean_x);
        comp.cov = cov;
    } else {
        mixture = make_cat_state(o.separation);
        probe = Eigen::Vector2d(o.separation, 0.0);
    }
    mixture.validate();

    json config = base_config("grid", o.common);
    config["initial"] = o.initial;
    if (o.initial == "gaussian") {
        config["mean_p"] = o.mean_p;
        config["mean_x"] = o.mean_x;
        config["cov_pp"] = o.cov_pp;
        config["cov_px"] = o.cov_px;
        config["cov_xx"] = o.cov_xx;
    } else {
        config["separation"] = o.separation;
    }
    config["np"] = o.np;
    config["nx"] = o.nx;
    config["p_max"] = o.p_max;
    config["x_max"] = o.x_max;
    config["dt"] = o.dt;
    config["t_max"] = o.t_max;
    config["samples"] = o.samples;
    config["snapshot_prefix"] = o.snapshot_prefix;
    config["snapshot_format"] = o.snapshot_format;

    WignerGrid grid = rasterize(mixture, o.np, o.nx, o.p_max, o.x_max);

    // Snap every requested time to a whole number of steps so the splitting
    // scheme never has to take a fractional step.
    auto steps_for = [&](double t) {
        const long n = std::lround(t / o.dt);
        if (std::abs(static_cast<double>(n) * o.dt - t) > 1e-6 * o.dt)
            throw std::invalid_argument("time " + std::to_string(t) +
                                        " is not a whole number of --dt steps");
        return n;
    };
    const long total_steps = steps_for(o.t_max);
    std::vector<long> snapshot_steps;
    snapshot_steps.reserve(o.snapshot_times.size());
    for (double t : o.snapshot_times) {
        const long s = steps_for(t);
        if (s < 0 || s > total_steps)
            throw std::invalid_argument("snapshot time outside [0, --t-max]");
        snapshot_steps.push_back(s);
    }

    std::ostringstream table;
    table << "t,mean_p,mean_x,cov_pp,cov_px,cov_xx,fringe_visibility,integral\n";
    const double fringe0 = probe ? fringe_amplitude(grid, *probe) : 0.0;

    auto emit_row = [&](long step) {
        const double t = static_cast<double>(step) * o.dt;
        const GridMoments m = moments(grid);
        table << format_double(t) << ',' << format_double(m.mean(0)) << ','
              << format_double(m.mean(1)) << ',' << format_double(m.cov.spp) << ','
              << format_double(m.cov.spx) << ',' << format_double(m.cov.sxx) << ',';
        if (probe) table << format_double(fringe_amplitude(grid, *probe) / fringe0);
        table << ',' << format_double(m.mass) << '\n';
    };
    auto maybe_snapshot = [&](long step) {
        for (long s : snapshot_steps)
            if (s == step) write_snapshot(grid, o, static_cast<double>(step) * o.dt);
    };

    // Walk through every step at which something must happen (summary row or
    // snapshot), evolving segment by segment so each event lands exactly.
    std::vector<long> sample_steps{0};
    for (int i = 1; i <= o.samples; ++i)
        sample_steps.push_back(std::lround(static_cast<double>(total_steps) *
                                           static_cast<double>(i) / o.samples));
    std::vector<long> events = sample_steps;
    events.insert(events.end(), snapshot_steps.begin(), snapshot_steps.end());
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());

    long current = 0;
    emit_row(current);
    maybe_snapshot(current);
    for (long target : events) {
        if (target <= current) continue;
        grid = evolve_grid(grid, static_cast<double>(target - current) * o.dt, o.dt, params);
        current = target;
        maybe_snapshot(current);
        if (std::find(sample_steps.begin(), sample_steps.end(), current) != sample_steps.end() &&
            current != 0)
            emit_row(current);
    }
    if (!o.svg_path.empty()) write_text(heatmap_svg(grid), o.svg_path);
    write_table(table.str(), config, o.common);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"phase-space separation toolkit for open quantum dynamics"};
    app.require_subcommand(1);
    // One config file for the whole invocation, with keys scoped per
    // subcommand ([disentangle-time] s=1.2 or disentangle-time.s=1.2).
    // Explicit flags always win; unknown keys and missing files are errors.
    app.set_config("--config", "",
                   "key=value file with [subcommand] sections; explicit flags win")
        ->check(CLI::ExistingFile);
    app.allow_config_extras(CLI::config_extras_mode::error);

    DisentangleOpts dis;
    CLI::App* dis_cmd = app.add_subcommand(
        "disentangle-time", "time after which a one-particle state is classically explainable");
    dis.s_opt = dis_cmd->add_option("--s", dis.s, "initial momentum variance (position fixed at 1/(2s))")
                    ->check(CLI::PositiveNumber);
    dis.optimize_opt = dis_cmd->add_flag("--optimize-s", dis.optimize,
                                         "search for the variance ratio with the latest threshold");
    dis_cmd->add_option("--s-min", dis.s_min, "lower end of the --optimize-s bracket")
        ->check(CLI::PositiveNumber);
    dis_cmd->add_option("--s-max", dis.s_max, "upper end of the --optimize-s bracket")
        ->check(CLI::PositiveNumber);
    add_report_opts(dis_cmd, dis.common);

    EprOpts epr;
    CLI::App* epr_cmd = app.add_subcommand(
        "epr-time", "time after which an EPR-correlated pair passes the separability tests");
    epr.c_opt = epr_cmd->add_option("--c", epr.c, "initial relative-momentum variance");
    epr_cmd->add_flag("--worst-case", epr.worst_case,
                      "report the squeezing with the latest threshold");
    epr_cmd->add_option("--sP2", epr.sP2, "initial total-momentum variance")
        ->check(CLI::NonNegativeNumber);
    epr.sX2_opt = epr_cmd->add_option("--sX2", epr.sX2,
                                      "override the relative-position variance (default 1/(4c))")
        ->check(CLI::PositiveNumber);
    add_report_opts(epr_cmd, epr.common);

    EvolveOpts evo;
    CLI::App* evo_cmd =
        app.add_subcommand("evolve", "tabulate moments or pair criteria along a trajectory");
    evo_cmd->add_option("--state", evo.state_path, "JSON state file")->required();
    evo_cmd->add_option("--t-max", evo.t_max, "final time")->required();
    evo_cmd->add_option("--steps", evo.steps, "number of rows (0 emits just the header)");
    evo_cmd->add_option("--svg", evo.svg_path, "also write a line chart here");
    add_report_opts(evo_cmd, evo.common);

    CheckOpts chk;
    CLI::App* chk_cmd =
        app.add_subcommand("check", "evaluate the separability criteria for a pair state");
    chk_cmd->add_option("--state", chk.state_path, "JSON state file")->required();
    add_report_opts(chk_cmd, chk.common);

    CertifyOpts cert;
    CLI::App* cert_cmd = app.add_subcommand(
        "certify", "build the classical-noise certificate at a given dimensionless time");
    cert_cmd->add_option("--t", cert.t_bar, "dimensionless time")->required();
    cert_cmd->add_option("--s", cert.s, "variance ratio of the reference state")
        ->check(CLI::PositiveNumber);
    add_report_opts(cert_cmd, cert.common, /*with_params=*/false);

    GridOpts grd;
    CLI::App* grd_cmd =
        app.add_subcommand("grid", "finite-difference evolution on a phase-space grid");
    grd_cmd->add_option("--initial", grd.initial, "initial state family")
        ->check(CLI::IsMember({"gaussian", "cat"}));
    grd_cmd->add_option("--mean-p", grd.mean_p, "gaussian: mean momentum");
    grd_cmd->add_option("--mean-x", grd.mean_x, "gaussian: mean position");
    grd_cmd->add_option("--cov-pp", grd.cov_pp, "gaussian: momentum variance")
        ->check(CLI::PositiveNumber);
    grd_cmd->add_option("--cov-xx", grd.cov_xx, "gaussian: position variance")
        ->check(CLI::PositiveNumber);
    grd_cmd->add_option("--cov-px", grd.cov_px, "gaussian: covariance");
    grd_cmd->add_option("--separation", grd.separation, "cat: distance between the two packets")
        ->check(CLI::PositiveNumber);
    grd_cmd->add_option("--np", grd.np, "grid points along momentum");
    grd_cmd->add_option("--nx", grd.nx, "grid points along position");
    grd_cmd->add_option("--p-max", grd.p_max, "momentum half-width of the window")
        ->check(CLI::PositiveNumber);
    grd_cmd->add_option("--x-max", grd.x_max, "position half-width of the window")
        ->check(CLI::PositiveNumber);
    grd_cmd->add_option("--dt", grd.dt, "time step")->check(CLI::PositiveNumber);
    grd_cmd->add_option("--t-max", grd.t_max, "final time");
    grd_cmd->add_option("--samples", grd.samples, "summary rows after t=0");
    grd_cmd->add_option("--snapshot-times", grd.snapshot_times, "write full grids at these times");
    grd_cmd->add_option("--snapshot-prefix", grd.snapshot_prefix, "snapshot filename prefix");
    grd_cmd->add_option("--snapshot-format", grd.snapshot_format, "snapshot file format")
        ->check(CLI::IsMember({"csv", "raster"}));
    grd_cmd->add_option("--svg", grd.svg_path, "write a heatmap of the final grid here");
    add_report_opts(grd_cmd, grd.common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (dis_cmd->parsed()) return run_disentangle(dis);
        if (epr_cmd->parsed()) return run_epr(epr);
        if (evo_cmd->parsed()) return run_evolve(evo);
        if (chk_cmd->parsed()) return run_check(chk);
        if (cert_cmd->parsed()) return run_certify(cert);
        if (grd_cmd->parsed()) return run_grid(grd);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
