#include "sweep.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "common.hpp"
#include "csv.hpp"
#include "metrics.hpp"

namespace leakage {

namespace {

struct TomlValue {
    std::string raw;
    bool is_string = false;
};

std::map<std::string, TomlValue> parse_flat_toml(const std::string& text) {
    std::map<std::string, TomlValue> out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view sv(line);
        auto trim = [](std::string_view v) {
            while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
            while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
            return v;
        };
        sv = trim(sv);
        if (sv.empty() || sv.front() == '#') continue;
        if (sv.front() == '[')
            throw DataError("sweep config:" + std::to_string(line_no) +
                            ": tables are not supported, use flat keys");
        auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw DataError("sweep config:" + std::to_string(line_no) + ": expected key = value");
        std::string key(trim(sv.substr(0, eq)));
        std::string_view val = trim(sv.substr(eq + 1));
        // strip trailing comment outside of strings
        if (!val.empty() && val.front() != '"') {
            auto hash = val.find('#');
            if (hash != std::string_view::npos) val = trim(val.substr(0, hash));
        }
        TomlValue tv;
        if (!val.empty() && val.front() == '"') {
            if (val.size() < 2 || val.back() != '"')
                throw DataError("sweep config:" + std::to_string(line_no) +
                                ": unterminated string");
            tv.raw = std::string(val.substr(1, val.size() - 2));
            tv.is_string = true;
        } else {
            tv.raw = std::string(val);
        }
        if (key.empty() || tv.raw.empty())
            throw DataError("sweep config:" + std::to_string(line_no) + ": empty key or value");
        out[key] = tv;
    }
    return out;
}

}  // namespace

SweepConfig parse_sweep_config(const std::string& text) {
    auto kv = parse_flat_toml(text);
    SweepConfig cfg;
    std::map<std::string, bool> used;

    auto number = [&](const char* key, double& target) {
        auto it = kv.find(key);
        if (it == kv.end()) return;
        used[key] = true;
        double v;
        if (it->second.is_string || !csv::parse_double(it->second.raw, v))
            throw DataError(std::string("sweep config: ") + key + " must be a number");
        target = v;
    };
    auto boolean = [&](const char* key, bool& target) {
        auto it = kv.find(key);
        if (it == kv.end()) return;
        used[key] = true;
        if (it->second.raw == "true") target = true;
        else if (it->second.raw == "false") target = false;
        else throw DataError(std::string("sweep config: ") + key + " must be true or false");
    };
    auto string_value = [&](const char* key, std::string& target) {
        auto it = kv.find(key);
        if (it == kv.end()) return;
        used[key] = true;
        target = it->second.raw;
    };

    number("mu_min", cfg.mu_min);
    number("mu_max", cfg.mu_max);
    number("mu_step", cfg.mu_step);
    number("alpha_min", cfg.alpha_min);
    number("alpha_max", cfg.alpha_max);
    number("alpha_step", cfg.alpha_step);

    double hours = double(cfg.base.hours), seed = double(cfg.base.seed);
    double parallelism = cfg.parallelism, weight = cfg.base.timestep_weight_h;
    double battery_hours = cfg.base.battery_hours;
    number("hours", hours);
    number("seed", seed);
    number("parallelism", parallelism);
    number("timestep_weight_h", weight);
    number("battery_hours", battery_hours);
    cfg.base.hours = std::size_t(hours);
    cfg.base.seed = std::uint64_t(seed);
    cfg.parallelism = std::max(1, int(parallelism));
    cfg.base.timestep_weight_h = weight;
    cfg.base.battery_hours = battery_hours;

    boolean("cyclic_storage", cfg.base.cyclic_storage);
    boolean("annualize", cfg.base.annualize);
    boolean("details", cfg.details);
    string_value("sampling", cfg.base.sampling);
    string_value("out_dir", cfg.out_dir);
    string_value("data_dir", cfg.base.data_dir);
    cfg.base.synthetic = cfg.base.data_dir.empty();

    for (const auto& [key, value] : kv) {
        (void)value;
        if (!used.count(key)) throw DataError("sweep config: unknown key '" + key + "'");
    }
    return cfg;
}

SweepConfig read_sweep_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path.string() + ": cannot open file");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_sweep_config(text);
}

std::vector<double> grid_axis(double lo, double hi, double step) {
    if (!(step > 0)) throw DataError("sweep: step must be positive");
    if (hi < lo) throw DataError("sweep: grid maximum below minimum");
    std::vector<double> axis;
    if (hi - lo < step * 0.5) {
        axis.push_back(lo);
        return axis;
    }
    double count_f = (hi - lo) / step;
    std::size_t count = std::size_t(std::llround(count_f));
    if (std::abs(lo + double(count) * step - hi) > 1e-9 * std::max(1.0, std::abs(hi)))
        throw DataError("sweep: endpoint not reachable with the given step");
    for (std::size_t k = 0; k <= count; ++k) axis.push_back(lo + double(k) * step);
    axis.back() = hi;
    return axis;
}

std::vector<std::pair<double, double>> sweep_grid(const SweepConfig& cfg) {
    std::vector<std::pair<double, double>> grid;
    for (double mu : grid_axis(cfg.mu_min, cfg.mu_max, cfg.mu_step))
        for (double alpha : grid_axis(cfg.alpha_min, cfg.alpha_max, cfg.alpha_step))
            grid.emplace_back(mu, alpha);
    return grid;
}

namespace {

std::string point_file_name(double mu, double alpha) {
    return "mu" + csv::format_double(mu) + "_alpha" + csv::format_double(alpha) + ".csv";
}

std::string sanitize_error(std::string msg) {
    for (char& c : msg) {
        if (c == ',' ) c = ';';
        if (c == '\n') c = ' ';
    }
    return msg;
}

const std::vector<std::string>& summary_carriers() {
    static const std::vector<std::string> names = {"wind", "solar", "coal",
                                                   "gas",  "hydro", "battery"};
    return names;
}

std::string point_row(double mu, double alpha, const std::string& status,
                      const SystemSummary* summary, int iterations, const std::string& error) {
    std::string s = csv::format_double(mu) + "," + csv::format_double(alpha) + "," + status;
    auto carrier_value = [&](const std::vector<double>& values, const std::string& name) {
        if (!summary) return 0.0;
        for (std::size_t i = 0; i < summary->carrier.size(); ++i)
            if (summary->carrier[i] == name) return values[i];
        return 0.0;
    };
    if (summary) {
        s += "," + csv::format_double(summary->objective);
        for (const auto& name : summary_carriers())
            s += "," + csv::format_double(carrier_value(summary->capacity_mw, name));
        for (const auto& name : summary_carriers())
            s += "," + csv::format_double(carrier_value(summary->generation_mwh, name));
        s += "," + csv::format_double(summary->battery_exchange_mwh);
        s += "," + csv::format_double(summary->conventional_share);
        s += "," + csv::format_double(summary->co2_total_t);
        s += "," + csv::format_double(summary->total_lcoe);
        s += "," + csv::format_double(summary->total_demand_mwh);
    } else {
        for (int k = 0; k < 18; ++k) s += ",0";
    }
    s += "," + std::to_string(iterations);
    s += "," + error;
    s += "\n";
    return s;
}

std::uint64_t config_hash(const SweepConfig& cfg) {
    std::string canon;
    for (double v : {cfg.mu_min, cfg.mu_max, cfg.mu_step, cfg.alpha_min, cfg.alpha_max,
                     cfg.alpha_step, cfg.base.timestep_weight_h, cfg.base.battery_hours,
                     double(cfg.base.hours), double(cfg.base.seed)})
        canon += csv::format_double(v) + "|";
    canon += cfg.base.sampling + "|" + cfg.base.data_dir + "|";
    canon += cfg.base.synthetic ? "syn|" : "csv|";
    canon += cfg.base.cyclic_storage ? "cyc|" : "soc0|";
    canon += cfg.base.annualize ? "ann" : "raw";
    return fnv1a64(canon);
}

}  // namespace

std::string summary_csv_header() {
    std::string s = "mu,alpha,status,objective_mu";
    for (const auto& name : summary_carriers()) s += ",cap_" + name + "_mw";
    for (const auto& name : summary_carriers()) s += ",gen_" + name + "_mwh";
    s += ",battery_exchange_mwh,conventional_share,co2_total_t,total_lcoe_mu_per_mwh,"
         "total_demand_mwh,iterations,error\n";
    return s;
}

SweepOutcome run_sweep(const SweepConfig& cfg, bool force) {
    if (cfg.out_dir.empty()) throw DataError("sweep: out_dir is required");
    std::filesystem::path out(cfg.out_dir);
    std::filesystem::path points = out / "points";
    std::error_code ec;
    std::filesystem::create_directories(points, ec);
    if (ec) throw DataError("sweep: cannot create output directory " + out.string());

    auto grid = sweep_grid(cfg);

    // manifest guards against mixing stores from different configurations
    nlohmann::json manifest;
    manifest["version"] = version_string();
    manifest["config_hash"] = config_hash(cfg);
    manifest["points"] = grid.size();
    std::filesystem::path manifest_path = out / "manifest.json";
    if (std::filesystem::exists(manifest_path) && !force) {
        std::ifstream in(manifest_path);
        nlohmann::json old = nlohmann::json::parse(in, nullptr, false);
        if (old.is_discarded() || old.value("config_hash", std::uint64_t(0)) !=
                                      manifest["config_hash"].get<std::uint64_t>())
            throw DataError("sweep: " + out.string() +
                            " holds results for a different configuration (rerun with force or "
                            "use a fresh directory)");
    }
    csv::write_file_atomic(manifest_path, manifest.dump(2) + "\n");

    SweepOutcome outcome;
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> solved{0}, skipped{0}, failed{0};
    std::mutex io_mutex;
    std::vector<std::string> errors;

    auto worker = [&]() {
        while (true) {
            std::size_t k = next.fetch_add(1);
            if (k >= grid.size()) return;
            auto [mu, alpha] = grid[k];
            std::filesystem::path point = points / point_file_name(mu, alpha);
            if (!force && std::filesystem::exists(point)) {
                skipped.fetch_add(1);
                continue;
            }
            std::string row;
            try {
                ScenarioSpec spec = cfg.base;
                spec.mu = mu;
                spec.alpha = alpha;
                ScenarioInputs inputs = assemble_scenario(spec);
                LinearProgram lp = build_lp(inputs);
                Solution sol = solve(lp);
                if (sol.status != SolveStatus::Optimal)
                    throw SolverError("status " + std::string(sol.status == SolveStatus::Infeasible
                                                                  ? "infeasible: "
                                                                  : "unbounded: ") +
                                      sol.message);
                SystemSummary summary = system_summary(inputs, lp, sol);
                row = point_row(mu, alpha, "optimal", &summary, sol.stats.iterations, "");
                if (cfg.details) {
                    std::filesystem::path detail =
                        out / ("scenario_" + point_file_name(mu, alpha));
                    detail.replace_extension();
                    write_scenario_dir(detail, spec, lp, sol);
                }
                solved.fetch_add(1);
            } catch (const std::exception& e) {
                row = point_row(mu, alpha, "failed", nullptr, 0, sanitize_error(e.what()));
                failed.fetch_add(1);
                std::lock_guard<std::mutex> lock(io_mutex);
                errors.push_back(point_file_name(mu, alpha) + ": " + e.what());
            }
            csv::write_file_atomic(point, summary_csv_header() + row);
        }
    };

    std::vector<std::thread> pool;
    int workers = std::max(1, cfg.parallelism);
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    // merge per-point files, sorted by (mu, alpha)
    std::vector<std::pair<std::pair<double, double>, std::string>> rows;
    for (const auto& [mu, alpha] : grid) {
        std::filesystem::path point = points / point_file_name(mu, alpha);
        if (!std::filesystem::exists(point))
            throw DataError("sweep: missing point file " + point.string());
        csv::Table t = csv::read_file(point);
        if (t.rows.size() != 1)
            throw DataError("sweep: point file " + point.string() + " must hold one row");
        std::string line;
        for (std::size_t i = 0; i < t.rows[0].size(); ++i)
            line += (i ? "," : "") + t.rows[0][i];
        rows.push_back({{mu, alpha}, line + "\n"});
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::string summary = summary_csv_header();
    for (const auto& r : rows) summary += r.second;
    outcome.summary_path = out / "summary.csv";
    csv::write_file_atomic(outcome.summary_path, summary);

    outcome.solved = solved.load();
    outcome.skipped = skipped.load();
    outcome.failed = failed.load();
    return outcome;
}

}  // namespace leakage
