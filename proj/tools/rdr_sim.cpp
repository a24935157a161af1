// Copyright 2026 The rdr-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// rdr_sim: command-line front end over the rdr C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "rdr/rdr.h"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    if (std::isnan(v)) return "none";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

int fail_with_status(rdr_status s) {
    std::cerr << "error: " << rdr_last_error();
    double t = 0.0;
    if (rdr_last_error_time(&t)) std::cerr << " (at t = " << fmt(t) << " us)";
    std::cerr << "\n";
    return rdr_status_classify(s) == RDR_CLASS_NUMERICAL ? kExitNumerical : kExitConfig;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json read_json_file(const std::string &path) {
    try {
        return Json::parse(read_file(path));
    } catch (const Json::parse_error &e) {
        throw UsageError("invalid JSON in '" + path + "': " + e.what());
    }
}

double parse_double(const std::string &s) {
    double v = 0.0;
    const char *b = s.data();
    const char *e = s.data() + s.size();
    if (b != e && *b == '+') ++b;
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e || !std::isfinite(v)) throw UsageError("bad number '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

// "1,3,10", "0.1..1.5" (8 points) or "0.1..1.5:n".
std::vector<double> parse_values(const std::string &text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        std::vector<double> out;
        for (const auto &p : split(text, ',')) out.push_back(parse_double(p));
        if (out.empty()) throw UsageError("no sweep values given");
        return out;
    }
    std::string hi_part = text.substr(dots + 2);
    int n = 8;
    if (const auto colon = hi_part.find(':'); colon != std::string::npos) {
        const double nn = parse_double(hi_part.substr(colon + 1));
        if (nn < 1 || nn != std::floor(nn) || nn > 10000) throw UsageError("bad point count in '" + text + "'");
        n = static_cast<int>(nn);
        hi_part = hi_part.substr(0, colon);
    }
    const double lo = parse_double(text.substr(0, dots));
    const double hi = parse_double(hi_part);
    if (n == 1) return {lo};
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
    return out;
}

struct Common {
    std::string dims;
    double dt_ns = 0.0;
    double t_final_us = -1.0;
    std::string form;
    std::string out_dir = "rdr_out";
    bool reduced = false;

    void add_to(CLI::App *app) {
        app->add_option("--dims", dims, "Truncation N_m,N_r");
        app->add_option("--dt-ns", dt_ns, "Time step in ns");
        app->add_option("--t-final-us", t_final_us, "Final time in us");
        app->add_option("--form", form, "Hamiltonian form: full, displaced or rwa");
        app->add_option("--out", out_dir, "Output directory");
        app->add_flag("--reduced", reduced, "Scaled acceptance variant (occupations /4, times /2)");
    }

    Json overrides() const {
        Json o = Json::object();
        if (!dims.empty()) {
            const auto parts = split(dims, ',');
            if (parts.size() != 2) throw UsageError("--dims expects N_m,N_r");
            const double m = parse_double(parts[0]), r = parse_double(parts[1]);
            if (m != std::floor(m) || r != std::floor(r)) throw UsageError("--dims expects integers");
            o["dims"] = Json::array({static_cast<int>(m), static_cast<int>(r)});
        }
        if (dt_ns != 0.0) o["dt_ns"] = dt_ns;
        if (t_final_us >= 0.0) o["t_final_us"] = t_final_us;
        if (!form.empty()) o["form"] = form;
        if (reduced) o["reduced"] = true;
        return o;
    }
};

// CSV: header row then one row per sample. Grids carry the p axis in the header.
void write_table(const rdr_output *out, size_t t, const fs::path &path, bool header_only) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    const size_t ncol = rdr_output_column_count(out, t);
    const size_t nrow = rdr_output_row_count(out, t);
    const bool grid = rdr_output_table_kind(out, t) == RDR_TABLE_GRID;
    for (size_t c = 0; c < ncol; ++c) {
        if (c) f << ',';
        f << (grid && c == 0 ? "x\\p" : rdr_output_column_name(out, t, c));
    }
    f << '\n';
    if (header_only) return;
    std::vector<const double *> cols(ncol);
    for (size_t c = 0; c < ncol; ++c) cols[c] = rdr_output_column(out, t, c);
    for (size_t r = 0; r < nrow; ++r) {
        for (size_t c = 0; c < ncol; ++c) {
            if (c) f << ',';
            f << fmt(cols[c][r]);
        }
        f << '\n';
    }
}

int emit(rdr_status s, rdr_output *out, const std::string &command, const std::string &scenario,
         const Json &request, const fs::path &dir, double wall_s, bool header_only) {
    if (s != RDR_OK) return fail_with_status(s);
    std::unique_ptr<rdr_output, decltype(&rdr_output_free)> guard(out, rdr_output_free);
    const Json meta = Json::parse(rdr_output_metadata(out));
    fs::create_directories(dir);
    Json files = Json::array();
    for (size_t t = 0; t < rdr_output_table_count(out); ++t) {
        const fs::path p = dir / (std::string(rdr_output_table_name(out, t)) + ".csv");
        const bool series = rdr_output_table_kind(out, t) == RDR_TABLE_SERIES;
        write_table(out, t, p, header_only && series);
        files.push_back(p.string());
    }
    const Json manifest{{"command", command},
                        {"scenario", scenario},
                        {"artifact_version", rdr_version()},
                        {"wall_clock_s", wall_s},
                        {"request", request},
                        {"outputs", files},
                        {"metadata", meta}};
    const fs::path mpath = dir / "manifest.json";
    std::ofstream(mpath) << manifest.dump(2) << '\n';

    auto warn = [](const Json &list) {
        if (!list.is_array()) return;
        for (const auto &w : list) std::cerr << "warning: " << w.get<std::string>() << "\n";
    };
    warn(meta.value("warnings", Json()));
    if (meta.contains("runs")) {
        for (const auto &r : meta["runs"]) {
            warn(r["warnings"]);
            std::cout << r["table"].get<std::string>() << ": 0.99 crossing "
                      << (r["crossing_us"].is_null() ? std::string("none") : fmt(r["crossing_us"].get<double>()) + " us")
                      << "\n";
        }
    }
    if (meta.contains("sweep")) {
        for (const auto &p : meta["sweep"]["points"]) {
            std::cout << meta["sweep"]["axis"].get<std::string>() << " = " << fmt(p["value"].get<double>());
            auto show = [&](const char *key) {
                return p[key].is_null() ? std::string("none") : fmt(p[key].get<double>());
            };
            if (meta["sweep"]["reports_crossing"].get<bool>()) std::cout << "  crossing_us " << show("crossing_us");
            if (meta["sweep"]["reports_steady_fidelity"].get<bool>()) {
                std::cout << "  steady_fidelity " << show("steady_fidelity");
            }
            if (!p["error"].get<std::string>().empty()) std::cout << "  error: " << p["error"].get<std::string>();
            std::cout << "\n";
        }
    }
    if (meta.contains("fit")) {
        std::cout << "plateau slope " << fmt(meta["fit"]["slope_per_us"].get<double>()) << " /us over ["
                  << fmt(meta["fit"]["t_start_us"].get<double>()) << ", " << fmt(meta["fit"]["t_end_us"].get<double>())
                  << "] us; kappa/4 = " << fmt(meta["fit"]["kappa_over_4_per_us"].get<double>()) << " /us\n";
    }
    std::cout << "wrote " << files.size() << " table(s) and " << mpath.string() << "\n";
    return kExitOk;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_list() {
    char *json = nullptr;
    const rdr_status s = rdr_catalog(&json);
    if (s != RDR_OK) return fail_with_status(s);
    const Json cat = Json::parse(json);
    rdr_string_free(json);
    for (const auto &e : cat) {
        std::printf("%-14s %s\n", e["name"].get<std::string>().c_str(), e["description"].get<std::string>().c_str());
    }
    return kExitOk;
}

int cmd_calibrate(double target, const std::string &config_path, bool as_json) {
    Json req{{"target_n_m", target}};
    if (!config_path.empty()) {
        const Json cfg = read_json_file(config_path);
        if (!cfg.is_object()) throw UsageError("config must be a JSON object");
        if (cfg.contains("params")) req["params"] = cfg["params"];
        if (cfg.contains("target_n_m")) req["target_n_m"] = cfg["target_n_m"];
    }
    char *json = nullptr;
    const rdr_status s = rdr_calibrate(req.dump().c_str(), &json);
    if (s != RDR_OK) return fail_with_status(s);
    const Json r = Json::parse(json);
    rdr_string_free(json);
    if (as_json) {
        std::cout << r.dump(2) << "\n";
        return kExitOk;
    }
    auto freq = [&](const char *key) {
        return fmt(r[key]["rad_per_us"].get<double>()) + " rad/us (" + fmt(r[key]["over_2pi_mhz"].get<double>()) +
               " MHz x 2pi)";
    };
    std::cout << "target n_m          " << fmt(r["target_n_m"].get<double>()) << "\n"
              << "eps_m               " << freq("eps_m") << "\n"
              << "eps_r               " << freq("eps_r") << "\n"
              << "Delta_q             " << freq("delta_q") << "\n"
              << "g_m                 " << freq("g_m") << "\n"
              << "g_r                 " << freq("g_r") << "\n"
              << "weak coupling       " << r["weak_coupling"]["verdict"].get<std::string>() << " (g/(kappa/2) = "
              << fmt(r["weak_coupling"]["g_over_half_kappa"].get<double>()) << ")\n"
              << "kappa/4 bound       " << fmt(r["kappa_over_4_per_us"].get<double>()) << " photons/us\n"
              << "predicted max rate  " << fmt(r["predicted_max_rate_per_us"].get<double>()) << " photons/us\n";
    for (const auto &w : r["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Rabi driven reset simulation toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(rdr_version()));

    auto *list = app.add_subcommand("list", "Print the scenario catalog");

    double target = 1.0;
    std::string cal_config;
    bool cal_json = false;
    auto *calibrate = app.add_subcommand("calibrate", "Print the drive calibration for a target occupation");
    calibrate->add_option("--target", target, "Target memory occupation n_m");
    calibrate->add_option("--config", cal_config, "JSON config supplying params and target_n_m");
    calibrate->add_flag("--json", cal_json, "Print the report as JSON");

    Common run_opts;
    std::string run_scenario, run_config, run_manifest;
    auto *run = app.add_subcommand("run", "Run a catalog or configured scenario");
    run->add_option("scenario", run_scenario, "Catalog scenario name");
    run->add_option("--config", run_config, "JSON scenario config");
    run->add_option("--from-manifest", run_manifest, "Re-run the request stored in a manifest");
    run_opts.add_to(run);

    Common sweep_opts;
    std::string sweep_scenario, sweep_axis, sweep_values, sweep_config;
    auto *sweep = app.add_subcommand("sweep", "Sweep one parameter of a scenario");
    sweep->add_option("scenario", sweep_scenario, "Catalog scenario name, or 'config' with --config")->required();
    sweep->add_option("axis", sweep_axis, "T1, T2, omega_R or drive")->required();
    sweep->add_option("values", sweep_values, "v1,v2,... or lo..hi[:n]")->required();
    sweep->add_option("--config", sweep_config, "JSON scenario config");
    sweep_opts.add_to(sweep);

    Common wig_opts;
    std::string wig_scenario, wig_times, wig_state, wig_config;
    double wig_half_width = 6.0;
    int wig_points = 81;
    auto *wig = app.add_subcommand("wigner", "Wigner grids of the memory mode at given times");
    wig->add_option("scenario", wig_scenario, "Catalog scenario name, or 'config' with --config")->required();
    wig->add_option("--times", wig_times, "Snapshot times in us: t1,t2,...")->required();
    wig->add_option("--state", wig_state, "fig4 initial state: cat, fock, thermal, plus_node, minus_node");
    wig->add_option("--half-width", wig_half_width, "Grid half width in phase-space units");
    wig->add_option("--points", wig_points, "Grid points per axis");
    wig->add_option("--config", wig_config, "JSON scenario config");
    wig_opts.add_to(wig);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        const auto t0 = std::chrono::steady_clock::now();
        if (list->parsed()) return cmd_list();
        if (calibrate->parsed()) return cmd_calibrate(target, cal_config, cal_json);

        if (run->parsed()) {
            Json req;
            std::string name;
            if (!run_manifest.empty()) {
                const Json m = read_json_file(run_manifest);
                if (!m.contains("request") || m.value("command", "") != "run") {
                    throw UsageError("'" + run_manifest + "' is not a run manifest");
                }
                req = m["request"];
                name = m.value("scenario", "run");
            } else if (!run_config.empty()) {
                if (!run_scenario.empty()) throw UsageError("give either a scenario name or --config");
                req["config"] = read_json_file(run_config);
                name = req["config"].value("name", "config");
            } else {
                if (run_scenario.empty()) throw UsageError("run needs a scenario name or --config");
                req["scenario"] = run_scenario;
                name = run_scenario;
            }
            if (run_manifest.empty()) req["overrides"] = run_opts.overrides();
            rdr_output *out = nullptr;
            const rdr_status s = rdr_run(req.dump().c_str(), &out);
            const bool header_only = req.contains("overrides") && req["overrides"].contains("t_final_us") &&
                                     req["overrides"]["t_final_us"].get<double>() == 0.0;
            return emit(s, out, "run", name, req, fs::path(run_opts.out_dir) / name, seconds_since(t0), header_only);
        }

        if (sweep->parsed()) {
            Json req{{"axis", sweep_axis}, {"values", parse_values(sweep_values)}, {"overrides", sweep_opts.overrides()}};
            if (!sweep_config.empty()) req["config"] = read_json_file(sweep_config);
            else req["scenario"] = sweep_scenario;
            rdr_output *out = nullptr;
            const rdr_status s = rdr_sweep(req.dump().c_str(), &out);
            return emit(s, out, "sweep", sweep_scenario, req,
                        fs::path(sweep_opts.out_dir) / sweep_scenario / ("sweep_" + sweep_axis), seconds_since(t0),
                        false);
        }

        if (wig->parsed()) {
            std::vector<double> times;
            for (const auto &p : split(wig_times, ',')) times.push_back(parse_double(p));
            Json req{{"times_us", times},
                     {"half_width", wig_half_width},
                     {"points", wig_points},
                     {"overrides", wig_opts.overrides()}};
            if (!wig_state.empty()) req["state"] = wig_state;
            if (!wig_config.empty()) req["config"] = read_json_file(wig_config);
            else req["scenario"] = wig_scenario;
            rdr_output *out = nullptr;
            const rdr_status s = rdr_wigner(req.dump().c_str(), &out);
            return emit(s, out, "wigner", wig_scenario, req, fs::path(wig_opts.out_dir) / wig_scenario / "wigner",
                        seconds_since(t0), false);
        }
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
