#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "catsim/config.hpp"

using namespace catsim;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("an empty config file yields the default run") {
    auto path = temp_file("catsim_empty.cfg", "");
    RunConfig cfg = load_config(path.string());
    CHECK(cfg.theta == doctest::Approx(0.25));
    CHECK(cfg.alpha == doctest::Approx(2.0 * std::numbers::sqrt2));
    CHECK(cfg.fock_dim == 40);
    CHECK(cfg.phi_points == 41);
    CHECK(cfg.mode == "ideal");
    CHECK(cfg.experiment.empty());
    cfg.experiment = "ramsey";
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("comments, spacing, and lists parse") {
    auto path = temp_file("catsim_parse.cfg",
                          "# header comment\n"
                          "experiment = ramsey\n"
                          "theta_list = 0, 0.25 , 0.5  # sweep\n"
                          "\n"
                          "fock_dim=24\n"
                          "include_confusion = false\n");
    RunConfig cfg = load_config(path.string());
    CHECK(cfg.experiment == "ramsey");
    REQUIRE(cfg.theta_list.size() == 3);
    CHECK(cfg.theta_list[1] == doctest::Approx(0.25));
    CHECK(cfg.fock_dim == 24);
    CHECK_FALSE(cfg.include_confusion);
}

TEST_CASE("malformed configs are rejected with the offending line") {
    auto check_message = [](const std::string& text, const std::string& fragment) {
        auto path = temp_file("catsim_bad.cfg", text);
        try {
            load_config(path.string());
            FAIL("expected a parse error for: " << text);
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find(fragment) != std::string::npos);
            CHECK(std::string(e.what()).find(":1:") != std::string::npos);
        }
    };
    check_message("not a key value line\n", "expected 'key = value'");
    check_message("mystery_knob = 3\n", "unknown key");
    check_message("theta = fast\n", "expected a number");
    check_message("include_confusion = maybe\n", "expected true or false");
    check_message("theta =\n", "missing value");

    auto dup = temp_file("catsim_dup.cfg", "theta = 0.1\ntheta = 0.2\n");
    CHECK_THROWS_WITH_AS(load_config(dup.string()),
                         doctest::Contains("duplicate key"), std::runtime_error);
    CHECK_THROWS_AS(load_config("/nonexistent/catsim.cfg"), std::runtime_error);
}

TEST_CASE("validation rejects unusable runs by naming the field") {
    RunConfig cfg;
    cfg.experiment = "ramsey";

    RunConfig zero_chi = cfg;
    zero_chi.chi_hz = 0.0;
    CHECK_THROWS_WITH_AS(zero_chi.validate(), doctest::Contains("dispersive"),
                         std::invalid_argument);

    RunConfig too_big = cfg;
    too_big.alpha = 5.0;
    CHECK_THROWS_WITH_AS(too_big.validate(), doctest::Contains("truncation"),
                         std::invalid_argument);

    RunConfig bad_exp = cfg;
    bad_exp.experiment = "interference";
    CHECK_THROWS_WITH_AS(bad_exp.validate(), doctest::Contains("experiment"),
                         std::invalid_argument);

    RunConfig bad_mode = cfg;
    bad_mode.mode = "fast";
    CHECK_THROWS_WITH_AS(bad_mode.validate(), doctest::Contains("mode"),
                         std::invalid_argument);

    RunConfig sweep = cfg;
    sweep.experiment = "eraser";
    sweep.theta_list = {0.0, 0.25};
    CHECK_THROWS_WITH_AS(sweep.validate(), doctest::Contains("theta_list"),
                         std::invalid_argument);

    RunConfig few = cfg;
    few.phi_points = 1;
    CHECK_THROWS_WITH_AS(few.validate(), doctest::Contains("phi_points"),
                         std::invalid_argument);
}

TEST_CASE("the effective config echo round-trips exactly") {
    RunConfig cfg;
    cfg.experiment = "ramsey";
    cfg.mode = "noisy";
    cfg.theta = 0.3121;
    cfg.theta_list = {0.0, 1.0 / 3.0, 0.5};
    cfg.alpha = 1.7320508075688772;
    cfg.chi_hz = -1.64e6;
    cfg.dt_s = 7.3e-10;
    cfg.include_confusion = false;
    cfg.output_dir = "runs/morning";

    auto first = std::filesystem::temp_directory_path() / "catsim_echo1.cfg";
    auto second = std::filesystem::temp_directory_path() / "catsim_echo2.cfg";
    write_effective_config(cfg, first.string());
    RunConfig reloaded = load_config(first.string());
    write_effective_config(reloaded, second.string());

    CHECK(slurp(first) == slurp(second));
    CHECK(reloaded.theta == cfg.theta);
    CHECK(reloaded.theta_list == cfg.theta_list);
    CHECK(reloaded.dt_s == cfg.dt_s);
    CHECK(reloaded.output_dir == cfg.output_dir);
    CHECK(reloaded.mode == "noisy");
}

TEST_CASE("config fields map onto the protocol parameters") {
    RunConfig cfg;
    cfg.experiment = "eraser";
    cfg.theta = 0.5;
    cfg.alpha = 1.25;
    cfg.alpha_imag = -0.5;
    cfg.phi_points = 5;
    cfg.phi_min = 0.5;
    cfg.phi_max = 1.5;
    cfg.mode = "noisy";
    cfg.readout_g_fidelity = 0.9;
    cfg.readout_e_fidelity = 0.8;

    ProtocolParams p = cfg.protocol();
    CHECK(p.theta == doctest::Approx(std::numbers::pi / 2));
    CHECK(p.alpha.real() == doctest::Approx(1.25));
    CHECK(p.alpha.imag() == doctest::Approx(-0.5));
    REQUIRE(p.phi_grid.size() == 5);
    CHECK(p.phi_grid.front() == doctest::Approx(std::numbers::pi / 2));
    CHECK(p.phi_grid.back() == doctest::Approx(1.5 * std::numbers::pi));
    CHECK(p.mode == EvolutionMode::Noisy);
    CHECK(p.device.readout_confusion(0, 0) == doctest::Approx(0.9));
    CHECK(p.device.readout_confusion(1, 0) == doctest::Approx(0.1));
    CHECK(p.device.readout_confusion(0, 1) == doctest::Approx(0.2));
    CHECK(p.device.readout_confusion(1, 1) == doctest::Approx(0.8));
}

TEST_CASE("summary rows evaluate their check kinds") {
    CHECK(SummaryRow{"m", 0.505, CheckKind::Band, 0.52, 0.02}.passed());
    CHECK_FALSE(SummaryRow{"m", 0.49, CheckKind::Band, 0.52, 0.02}.passed());
    CHECK(SummaryRow{"m", 0.07, CheckKind::Upper, 0.08, 0.0}.passed());
    CHECK_FALSE(SummaryRow{"m", 0.09, CheckKind::Upper, 0.08, 0.0}.passed());
    CHECK(SummaryRow{"m", 0.995, CheckKind::Lower, 0.99, 0.0}.passed());
    CHECK_FALSE(SummaryRow{"m", 0.985, CheckKind::Lower, 0.99, 0.0}.passed());
    CHECK(SummaryRow{"m", 123.0, CheckKind::None, 0.0, 0.0}.passed());
}

TEST_CASE("a small sweep produces per-angle curves that all pass") {
    RunConfig cfg;
    cfg.experiment = "ramsey";
    cfg.theta_list = {0.0, 0.25, 0.5};
    cfg.alpha = 1.0;
    cfg.fock_dim = 24;
    cfg.phi_points = 9;

    ExperimentResult res = execute_experiment(cfg);
    REQUIRE(res.curves.size() == 3);
    CHECK(res.curves[0].first == "ramsey_theta_0");
    CHECK(res.curves[1].first == "ramsey_theta_0.25");
    CHECK(res.curves[2].first == "ramsey_theta_0.5");
    CHECK(res.all_passed());

    // visibilities fall from 1 toward the coherent-overlap floor
    double vis0 = 0.0, vis2 = 0.0;
    for (const auto& row : res.rows) {
        if (row.metric == "visibility_theta_0") vis0 = row.value;
        if (row.metric == "visibility_theta_0.5") vis2 = row.value;
    }
    CHECK(vis0 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(vis2 == doctest::Approx(std::exp(-2.0)).epsilon(1e-4));
}

TEST_CASE("curve and summary files follow the frozen schema") {
    CurveData curve;
    curve.phi = {0.0, std::numbers::pi};
    curve.value = {0.125, 0.875};
    curve.label = "P_g";
    auto curve_path = std::filesystem::temp_directory_path() / "catsim_curve.csv";
    write_curve_csv(curve, curve_path.string());
    std::string text = slurp(curve_path);
    CHECK(text.find("phi_over_pi,probability\n") == 0);
    CHECK(text.find("\n0,0.125\n") != std::string::npos);
    CHECK(text.find("\n1,0.875\n") != std::string::npos);

    std::vector<SummaryRow> rows = {
        {"alpha_metric", 0.41, CheckKind::Band, 0.4, 0.02},
        {"raw_metric", 7.0, CheckKind::None, 0.0, 0.0},
    };
    auto summary_path = std::filesystem::temp_directory_path() / "catsim_summary.csv";
    write_summary_csv(rows, summary_path.string());
    text = slurp(summary_path);
    CHECK(text.find("metric,value,target,tolerance,check,status\n") == 0);
    CHECK(text.find("alpha_metric,0.41,0.4,0.02,band,PASS\n") != std::string::npos);
    CHECK(text.find("raw_metric,7,,,none,INFO\n") != std::string::npos);
}
