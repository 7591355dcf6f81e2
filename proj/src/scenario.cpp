#include "scenario.hpp"

#include <json.hpp>

#include <fstream>

#include "common.hpp"
#include "csv.hpp"
#include "mps.hpp"
#include "pricing.hpp"

namespace leakage {

namespace {

// Four sampling blocks spread across the seasons (day-of-year starts).
constexpr std::size_t kSeasonStartDays[4] = {15, 106, 197, 288};

std::vector<std::size_t> seasonal_hours(std::size_t hours) {
    std::vector<std::size_t> picks;
    picks.reserve(hours);
    std::size_t base = hours / 4, extra = hours % 4;
    for (std::size_t blk = 0; blk < 4; ++blk) {
        std::size_t len = base + (blk < extra ? 1 : 0);
        std::size_t start = kSeasonStartDays[blk] * 24;
        for (std::size_t h = 0; h < len; ++h) picks.push_back(start + h);
    }
    return picks;
}

}  // namespace

ScenarioInputs assemble_scenario(const ScenarioSpec& spec) {
    ScenarioInputs in;
    in.network = default_network();
    in.pricing = make_pricing(in.network, spec.mu, spec.alpha);
    in.options.timestep_weight_h = spec.timestep_weight_h;
    in.options.cyclic_storage = spec.cyclic_storage;
    in.options.battery_hours = spec.battery_hours;
    in.options.annualize = spec.annualize;

    if (spec.synthetic) {
        if (spec.hours == 0) throw DataError("scenario: synthetic series needs hours >= 1");
        // blocks of more than 1848 h would run past the year end
        if (spec.sampling == "seasonal" && spec.hours <= 4 * 1848) {
            TimeSeriesSet year = synthetic_timeseries(in.network, 8760, spec.seed);
            in.series = year.sample_hours(seasonal_hours(spec.hours));
        } else if (spec.sampling == "seasonal" || spec.sampling == "head") {
            in.series = synthetic_timeseries(in.network, spec.hours, spec.seed);
        } else {
            throw DataError("scenario: unknown sampling '" + spec.sampling + "'");
        }
    } else {
        if (spec.data_dir.empty()) throw DataError("scenario: data_dir required");
        TimeSeriesSet full = load_timeseries(spec.data_dir, in.network);
        if (spec.hours == 0 || spec.hours == full.steps()) {
            in.series = std::move(full);
        } else if (spec.hours < full.steps()) {
            std::vector<std::size_t> head(spec.hours);
            for (std::size_t i = 0; i < spec.hours; ++i) head[i] = i;
            in.series = full.sample_hours(head);
        } else {
            throw DataError("scenario: data provides " + std::to_string(full.steps()) +
                            " hours, requested " + std::to_string(spec.hours));
        }
    }
    in.validate();
    return in;
}

std::string scenario_spec_to_json(const ScenarioSpec& spec, const Solution* solution) {
    nlohmann::json j;
    j["mu"] = spec.mu;
    j["alpha"] = spec.alpha;
    j["synthetic"] = spec.synthetic;
    j["seed"] = spec.seed;
    j["data_dir"] = spec.data_dir;
    j["hours"] = spec.hours;
    j["sampling"] = spec.sampling;
    j["timestep_weight_h"] = spec.timestep_weight_h;
    j["cyclic_storage"] = spec.cyclic_storage;
    j["battery_hours"] = spec.battery_hours;
    j["annualize"] = spec.annualize;
    if (solution) {
        j["status"] = solution->status == SolveStatus::Optimal ? "optimal"
                      : solution->status == SolveStatus::Infeasible ? "infeasible"
                                                                    : "unbounded";
        j["objective"] = solution->objective;
        j["iterations"] = solution->stats.iterations;
    }
    return j.dump(2) + "\n";
}

ScenarioSpec scenario_spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("scenario.json: ") + e.what());
    }
    ScenarioSpec spec;
    try {
        spec.mu = j.at("mu").get<double>();
        spec.alpha = j.at("alpha").get<double>();
        spec.synthetic = j.at("synthetic").get<bool>();
        spec.seed = j.at("seed").get<std::uint64_t>();
        spec.data_dir = j.at("data_dir").get<std::string>();
        spec.hours = j.at("hours").get<std::size_t>();
        spec.sampling = j.at("sampling").get<std::string>();
        spec.timestep_weight_h = j.at("timestep_weight_h").get<double>();
        spec.cyclic_storage = j.at("cyclic_storage").get<bool>();
        spec.battery_hours = j.at("battery_hours").get<double>();
        spec.annualize = j.at("annualize").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("scenario.json: missing or invalid field: ") + e.what());
    }
    return spec;
}

void write_scenario_dir(const std::filesystem::path& dir, const ScenarioSpec& spec,
                        const LinearProgram& lp, const Solution& solution) {
    std::filesystem::create_directories(dir);
    csv::write_file_atomic(dir / "scenario.json", scenario_spec_to_json(spec, &solution));
    mps::write_solution(lp, solution, dir / "solution.csv");
}

LoadedScenario load_scenario_dir(const std::filesystem::path& dir) {
    std::ifstream in(dir / "scenario.json");
    if (!in) throw DataError((dir / "scenario.json").string() + ": cannot open");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    LoadedScenario out;
    out.spec = scenario_spec_from_json(text);
    out.inputs = assemble_scenario(out.spec);
    out.lp = build_lp(out.inputs);
    out.solution = mps::read_solution(dir / "solution.csv", out.lp);
    return out;
}

}  // namespace leakage
