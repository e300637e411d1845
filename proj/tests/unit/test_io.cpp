#include <phasesep/io.hpp>

#include <phasesep/solver.hpp>
#include <phasesep/svg.hpp>

#include <doctest.h>
#include <json.hpp>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "test_states.hpp"

using namespace phasesep;
using doctest::Approx;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

/// Unique scratch file removed at scope exit.
struct TempFile {
    fs::path path;
    explicit TempFile(const std::string& name)
        : path(fs::temp_directory_path() /
               ("phasesep_test_" + std::to_string(::getpid()) + "_" + name)) {}
    ~TempFile() {
        std::error_code ec;
        fs::remove(path, ec);
    }
    void write(const std::string& text) const {
        std::ofstream os(path, std::ios::binary);
        os << text;
    }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("doubles are printed with shortest-round-trip precision") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("gaussian states round trip through JSON exactly") {
    std::mt19937 rng(41);
    const GaussianState st = GaussianState::product(
        testutil::random_one_mode(rng), testutil::random_one_mode(rng));
    const GaussianState back = gaussian_state_from_json(gaussian_state_to_json(st));
    CHECK(back.units == st.units);
    CHECK(back.mean == st.mean);
    CHECK(back.cov == st.cov);
}

TEST_CASE("factored states round trip through JSON exactly") {
    std::mt19937 rng(42);
    const FactoredBipartiteState f = testutil::random_factored(rng);
    const FactoredBipartiteState back =
        factored_state_from_json(factored_state_to_json(f));
    CHECK(back.sK2 == f.sK2);
    CHECK(back.sX2 == f.sX2);
    CHECK(back.sP2 == f.sP2);
    CHECK(back.sQ2 == f.sQ2);
    CHECK(back.units == f.units);
}

TEST_CASE("state parsing diagnoses malformed documents") {
    // Missing field.
    CHECK_THROWS_WITH_AS(
        factored_state_from_json(R"({"units":"dimensionless","sK2":1,"sX2":1,"sP2":1})"),
        doctest::Contains("sQ2"), std::invalid_argument);
    // Unknown field.
    CHECK_THROWS_WITH_AS(
        factored_state_from_json(
            R"({"units":"dimensionless","sK2":1,"sX2":1,"sP2":1,"sQ2":1,"bogus":2})"),
        doctest::Contains("bogus"), std::invalid_argument);
    // Wrong type.
    CHECK_THROWS_AS(
        factored_state_from_json(
            R"({"units":"dimensionless","sK2":"x","sX2":1,"sP2":1,"sQ2":1})"),
        std::invalid_argument);
    // Unphysical value.
    CHECK_THROWS_AS(
        factored_state_from_json(
            R"({"units":"dimensionless","sK2":-1,"sX2":1,"sP2":1,"sQ2":1})"),
        std::invalid_argument);
    // Syntax error: the diagnostic carries the line number.
    CHECK_THROWS_WITH_AS(gaussian_state_from_json("{\n  \"modes\": 1,\n  ]\n}"),
                         doctest::Contains(":3"), std::invalid_argument);
    // Covariance shape mismatch.
    CHECK_THROWS_AS(
        gaussian_state_from_json(
            R"({"modes":1,"units":"dimensionless","mean":[0,0],"cov":[[1,0]]})"),
        std::invalid_argument);
}

TEST_CASE("state files are recognized by flavor") {
    std::mt19937 rng(43);
    TempFile g("state_g.json");
    g.write(gaussian_state_to_json(testutil::random_one_mode(rng)));
    CHECK(std::holds_alternative<GaussianState>(load_state_file(g.path)));

    TempFile f("state_f.json");
    f.write(factored_state_to_json(testutil::random_factored(rng)));
    CHECK(std::holds_alternative<FactoredBipartiteState>(load_state_file(f.path)));

    TempFile junk("state_junk.json");
    junk.write(R"({"neither":1})");
    CHECK_THROWS_AS(load_state_file(junk.path), std::invalid_argument);
    CHECK_THROWS_AS(load_state_file(fs::path("/nonexistent/state.json")),
                    std::invalid_argument);
}

TEST_CASE("report builders emit the pinned schemas") {
    const json rep = json::parse(criterion_report_json(
        criterion_report(make_epr_state(1.0, 0.5, 0.5))));
    CHECK(rep.at("wigner_valid") == true);
    CHECK(rep.at("ph_separable") == false);
    CHECK(rep.at("duan_lhs").get<double>() == Approx(2.25).epsilon(1e-15));
    CHECK(rep.contains("duan_mirror_lhs"));

    const PhysicalParams params{1.0, 4.0, 1.0};
    const json thr =
        json::parse(threshold_report_json(general_threshold(1.0), "s", params));
    CHECK(thr.at("parameter_name") == "s");
    CHECK(thr.at("parameter").get<double>() == 1.0);
    CHECK(thr.at("t_bar").get<double>() == Approx(1.3926467817026408).epsilon(1e-12));
    CHECK(thr.at("t_physical").get<double>() ==
          Approx(2.0 * thr.at("t_bar").get<double>()).epsilon(1e-14));
    CHECK(thr.at("params").at("mass").get<double>() == 4.0);

    // A bare threshold has no parameter; it serializes as null.
    ThresholdResult bare = threshold(general_condition(1.0));
    const json thr2 = json::parse(
        threshold_report_json(bare, "s", PhysicalParams::dimensionless()));
    CHECK(thr2.at("parameter").is_null());

    const json cert = json::parse(certificate_json(separation_certificate(1.40, 1.0)));
    CHECK(cert.at("valid") == true);
    CHECK(cert.at("det_b").get<double>() == Approx(0.2612).epsilon(1e-12));
    CHECK(cert.at("b").at("spx").get<double>() == Approx(1.46).epsilon(1e-14));
    CHECK_FALSE(cert.contains("smeared_cov"));
}

TEST_CASE("grid CSV layout") {
    const WignerGrid grid = rasterize(
        GaussianState::one_mode({0.0, 0.0}, {0.5, 0.5, 0.0}), 8, 8, 6.0, 6.0);
    std::ostringstream os;
    write_grid_csv(os, grid);
    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "p,x,w");
    int rows = 0;
    double first_w = 0.0;
    while (std::getline(is, line)) {
        if (rows == 0) {
            const auto last_comma = line.rfind(',');
            first_w = std::stod(line.substr(last_comma + 1));
        }
        ++rows;
    }
    CHECK(rows == 64);
    CHECK(first_w == grid.values(0, 0));
}

TEST_CASE("grid rasters round trip bit-exactly") {
    std::mt19937 rng(44);
    WignerGrid grid;
    grid.p_max = 3.0;
    grid.x_max = 5.0;
    grid.values.resize(16, 8);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 8; ++j)
            grid.values(i, j) = testutil::uniform(rng, -1.0, 1.0);

    std::stringstream buf;
    write_grid_raster(buf, grid);
    const WignerGrid back = read_grid_raster(buf);
    CHECK(back.np() == 16);
    CHECK(back.nx() == 8);
    CHECK(back.p_max == grid.p_max);
    CHECK(back.x_max == grid.x_max);
    CHECK((back.values == grid.values).all());

    // Corrupt magic.
    std::string bytes = buf.str();
    write_grid_raster(buf = std::stringstream(), grid);
    bytes = buf.str();
    bytes[0] = 'X';
    std::stringstream bad(bytes);
    CHECK_THROWS_AS(read_grid_raster(bad), std::invalid_argument);

    // Truncated payload.
    std::stringstream cut(bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS_AS(read_grid_raster(cut), std::invalid_argument);
}

}  // TEST_SUITE

TEST_SUITE("svg") {

TEST_CASE("line charts are deterministic and contain every series") {
    const std::vector<double> xs{0.0, 0.5, 1.0, 1.5};
    const std::vector<std::pair<std::string, std::vector<double>>> series{
        {"alpha", {1.0, 2.0, 1.5, 3.0}}, {"beta", {0.0, -1.0, -0.5, 0.5}}};
    const std::string svg = line_chart_svg(xs, series, "time", "value");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("alpha") != std::string::npos);
    CHECK(svg.find("beta") != std::string::npos);
    CHECK(svg.find("time") != std::string::npos);
    std::size_t polylines = 0;
    for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos;
         ++pos)
        ++polylines;
    CHECK(polylines == 2);
    CHECK(svg == line_chart_svg(xs, series, "time", "value"));

    CHECK_THROWS_AS(line_chart_svg({}, series, "x", "y"), std::invalid_argument);
    CHECK_THROWS_AS(
        line_chart_svg(xs, {{"short", {1.0}}}, "x", "y"), std::invalid_argument);
}

TEST_CASE("heatmaps render a downsampled grid") {
    const WignerGrid grid = rasterize(
        GaussianState::one_mode({0.0, 0.0}, {0.5, 0.5, 0.0}), 64, 64, 8.0, 8.0);
    const std::string svg = heatmap_svg(grid, 32);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("<rect") != std::string::npos);
    CHECK(svg == heatmap_svg(grid, 32));
    CHECK_THROWS_AS(heatmap_svg(grid, 0), std::invalid_argument);
}

}  // TEST_SUITE
