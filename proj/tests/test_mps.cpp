#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "common.hpp"
#include "mps.hpp"
#include "solver.hpp"
#include "support/toys.hpp"

using namespace leakage;

namespace {

LinearProgram textbook_lp() {
    LinearProgram lp;
    int x = lp.add_column("x", 0, std::numeric_limits<double>::infinity(), 1.0);
    int row = lp.add_row("floor", RowSense::GreaterEqual, 3.0);
    lp.add_entry(row, x, 1.0);
    return lp;
}

bool same_lp(const LinearProgram& a, const LinearProgram& b) {
    if (a.num_rows() != b.num_rows() || a.num_columns() != b.num_columns()) return false;
    for (int i = 0; i < a.num_rows(); ++i) {
        if (a.row_name(i) != b.row_name(i)) return false;
        if (a.row_sense()[std::size_t(i)] != b.row_sense()[std::size_t(i)]) return false;
        if (a.rhs()[std::size_t(i)] != b.rhs()[std::size_t(i)]) return false;
    }
    for (int j = 0; j < a.num_columns(); ++j) {
        if (a.column_name(j) != b.column_name(j)) return false;
        if (a.objective()[std::size_t(j)] != b.objective()[std::size_t(j)]) return false;
        if (a.column_lower()[std::size_t(j)] != b.column_lower()[std::size_t(j)]) return false;
        if (a.column_upper()[std::size_t(j)] != b.column_upper()[std::size_t(j)]) return false;
    }
    auto ea = a.entries();
    auto eb = b.entries();
    auto key = [](const LinearProgram::Entry& e) { return std::pair{e.col, e.row}; };
    std::sort(ea.begin(), ea.end(), [&](auto& l, auto& r) { return key(l) < key(r); });
    std::sort(eb.begin(), eb.end(), [&](auto& l, auto& r) { return key(l) < key(r); });
    if (ea.size() != eb.size()) return false;
    for (std::size_t k = 0; k < ea.size(); ++k) {
        if (ea[k].row != eb[k].row || ea[k].col != eb[k].col || ea[k].value != eb[k].value)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("mps round-trip is coefficient-identical") {
    SUBCASE("textbook program") {
        LinearProgram lp = textbook_lp();
        LinearProgram back = mps::parse(mps::to_string(lp));
        CHECK(same_lp(lp, back));
    }
    SUBCASE("full scenario program with structured names and boxed columns") {
        testsupport::ToySpec spec;
        spec.demand_mw = {40, 10};
        spec.steps = 3;
        spec.carriers = {"coal", "wind", "battery", "hydro"};
        spec.chain_link_capacity_mw = 25;
        spec.hydro_power_mw = 5;
        spec.hydro_energy_mwh = 50;
        spec.hydro_inflow_mwh = 2;
        LinearProgram lp = build_lp(testsupport::make_toy(spec));
        LinearProgram back = mps::parse(mps::to_string(lp));
        CHECK(same_lp(lp, back));
        // and the text itself is reproducible
        CHECK(mps::to_string(lp) == mps::to_string(back));
    }
}

TEST_CASE("mps export writes deterministic files") {
    LinearProgram lp = textbook_lp();
    auto dir = std::filesystem::temp_directory_path() / "lkg_mps";
    std::filesystem::create_directories(dir);
    mps::write_file(lp, dir / "a.mps");
    mps::write_file(lp, dir / "b.mps");
    std::ifstream fa(dir / "a.mps"), fb(dir / "b.mps");
    std::string a((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string b((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(a == b);
    CHECK(a.find("ENDATA") != std::string::npos);
}

TEST_CASE("mps parser rejects what it cannot faithfully represent") {
    CHECK_THROWS_AS(mps::parse("NAME t\nROWS\n N COST\nRANGES\nENDATA\n"), DataError);
    CHECK_THROWS_AS(mps::parse("NAME t\nROWS\n N COST\n"), DataError);  // no ENDATA
    CHECK_THROWS_AS(mps::parse("NAME t\nROWS\n N COST\nCOLUMNS\n    x  MARKER  'MARKER'\nENDATA\n"),
                    DataError);
    CHECK_THROWS_AS(mps::parse("NAME t\nROWS\n E r\nCOLUMNS\n    x r 1\nRHS\nENDATA\n"),
                    DataError);  // no objective row
}

TEST_CASE("solution files round-trip and are verified on import") {
    testsupport::ToySpec spec;
    spec.demand_mw = {25};
    spec.steps = 2;
    spec.carriers = {"coal", "gas"};
    ScenarioInputs in = testsupport::make_toy(spec);
    LinearProgram lp = build_lp(in);
    Solution sol = solve(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);

    auto dir = std::filesystem::temp_directory_path() / "lkg_solution";
    std::filesystem::create_directories(dir);
    mps::write_solution(lp, sol, dir / "solution.csv");
    Solution loaded = mps::read_solution(dir / "solution.csv", lp);
    CHECK(loaded.objective == doctest::Approx(sol.objective).epsilon(1e-12));
    CHECK(loaded.primal == sol.primal);
    CHECK(loaded.dual == sol.dual);

    SUBCASE("a hand-written external optimum imports cleanly") {
        // min x st x >= 3: optimum x = 3, dual 1
        LinearProgram text = textbook_lp();
        std::ofstream out(dir / "external.csv");
        out << "#objective,3\n";
        out << "name,value,dual\n";
        out << "x,3,0\n";
        out << "floor,3,1\n";
        out.close();
        Solution ext = mps::read_solution(dir / "external.csv", text);
        Solution native = solve(text);
        CHECK(std::abs(ext.objective - native.objective) <=
              1e-6 * (1.0 + std::abs(native.objective)));
    }

    SUBCASE("missing columns are named") {
        std::string text = mps::solution_to_csv(lp, sol);
        // drop the first column line (line 3)
        auto p1 = text.find('\n');
        auto p2 = text.find('\n', p1 + 1);
        auto p3 = text.find('\n', p2 + 1);
        std::string broken = text.substr(0, p2 + 1) + text.substr(p3 + 1);
        std::ofstream(dir / "missing.csv") << broken;
        try {
            mps::read_solution(dir / "missing.csv", lp);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find("missing column") != std::string::npos);
            CHECK(std::string(e.what()).find(lp.column_name(0)) != std::string::npos);
        }
    }

    SUBCASE("unknown names are rejected") {
        std::string text = mps::solution_to_csv(lp, sol);
        text += "ghost,1,0\n";
        std::ofstream(dir / "unknown.csv") << text;
        CHECK_THROWS_AS(mps::read_solution(dir / "unknown.csv", lp), DataError);
    }

    SUBCASE("infeasible claims fail verification") {
        Solution bad = sol;
        bad.primal[0] += 7.0;
        bad.objective = 0;  // also inconsistent, but feasibility fails first
        std::string text = mps::solution_to_csv(lp, bad);
        std::ofstream(dir / "bad.csv") << text;
        CHECK_THROWS_AS(mps::read_solution(dir / "bad.csv", lp), DataError);
    }
}

TEST_CASE("exported program solves to the same objective after re-import") {
    testsupport::ToySpec spec;
    spec.demand_mw = {30, 12};
    spec.steps = 2;
    spec.carriers = {"coal", "gas", "wind"};
    spec.chain_link_capacity_mw = 10;
    spec.carbon_price = {90, 0};
    LinearProgram lp = build_lp(testsupport::make_toy(spec));

    Solution native = solve(lp);
    LinearProgram round = mps::parse(mps::to_string(lp));
    Solution reparsed = solve(round);
    REQUIRE(native.status == SolveStatus::Optimal);
    REQUIRE(reparsed.status == SolveStatus::Optimal);
    CHECK(reparsed.objective ==
          doctest::Approx(native.objective).epsilon(1e-9));
}
