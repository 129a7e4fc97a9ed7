#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "heron/io.hpp"

using namespace heron;
using heron::io::json;

#ifndef HERON_SCHEMA_DIR
#define HERON_SCHEMA_DIR "schemas"
#endif

namespace {

json schema(const std::string& name) {
    return io::load_json_file(std::string(HERON_SCHEMA_DIR) + "/" + name +
                              ".schema.json");
}

FockVector random_state(int dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    FockVector v(dim);
    for (int n = 0; n < dim; ++n) v.amps[n] = Complex(g(rng), g(rng));
    return v.normalize();
}

}  // namespace

TEST_CASE("state vector JSON round trip is exact") {
    const FockVector v = random_state(6, 2);
    const json j = io::to_json(v);
    CHECK(io::validate_schema(j, schema("state")).empty());

    // serialize/parse through text, amplitudes must survive bit-exactly
    const FockVector back = io::fock_from_json(json::parse(j.dump()));
    REQUIRE(back.dim() == 6);
    for (int n = 0; n < 6; ++n) CHECK(back.amps[n] == v.amps[n]);
}

TEST_CASE("density operator JSON round trip is exact") {
    const DensityOperator rho =
        loss_channel(DensityOperator::pure(random_state(5, 3)), 0.8);
    const json j = io::to_json(rho);
    CHECK(io::validate_schema(j, schema("state")).empty());

    const DensityOperator back = io::density_from_json(json::parse(j.dump()));
    REQUIRE(back.dim() == 5);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c) CHECK(back.mat(r, c) == rho.mat(r, c));
}

TEST_CASE("vector and matrix payloads are told apart by entry count") {
    const FockVector v = random_state(4, 4);
    CHECK_THROWS_AS(io::density_from_json(io::to_json(v)), ParseError);
    const DensityOperator rho = DensityOperator::pure(v);
    CHECK_THROWS_AS(io::fock_from_json(io::to_json(rho)), ParseError);
}

TEST_CASE("herald config round trip") {
    HeraldConfig config;
    config.q = 0.07;
    config.betas = {Complex(0.1, -0.2), Complex(0.0, 0.05), Complex(-0.3, 0.0)};
    config.signal_dim = 9;
    config.idler_dim = 7;
    config.eta_signal = 0.78;
    config.eta_detector = 0.6;
    config.dark_prob = 0.01;

    const json j = io::to_json(config);
    CHECK(io::validate_schema(j, schema("herald_config")).empty());

    const HeraldConfig back = io::herald_config_from_json(j);
    CHECK(back.q == config.q);
    CHECK(back.betas == config.betas);
    CHECK(back.signal_dim == config.signal_dim);
    CHECK(back.idler_dim == config.idler_dim);
    CHECK(back.eta_signal == config.eta_signal);
    CHECK(back.eta_detector == config.eta_detector);
    CHECK(back.dark_prob == config.dark_prob);

    json bad = j;
    bad["q"] = 1.5;
    CHECK_THROWS_AS(io::herald_config_from_json(bad), RangeError);
    bad = j;
    bad.erase("betas");
    CHECK_THROWS_AS(io::herald_config_from_json(bad), ParseError);
}

TEST_CASE("herald outcome export") {
    HeraldConfig config;
    config.q = 0.05;
    config.signal_dim = 6;
    config.idler_dim = 4;
    const HeraldOutcome outcome = herald(config);
    const json j = io::to_json(outcome);
    CHECK(io::validate_schema(j, schema("herald_outcome")).empty());
    CHECK(j["probability"].get<double>() == outcome.probability);
    const DensityOperator back = io::density_from_json(j);
    CHECK((back.mat - outcome.rho.mat).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("recipe JSON round trip") {
    const DisplacementRecipe recipe =
        solve_displacements(preset_target("cat-odd"), 0.1);
    const json j = io::to_json(recipe);
    CHECK(io::validate_schema(j, schema("recipe")).empty());
    const DisplacementRecipe back = io::recipe_from_json(j);
    CHECK(back.q == recipe.q);
    CHECK(back.betas == recipe.betas);
}

TEST_CASE("wigner grid exports") {
    const DensityOperator vac = DensityOperator::pure(FockVector::basis(0, 3));
    const WignerGrid grid = wigner_grid(vac, {-2.0, 2.0, -2.0, 2.0, 5, 4});

    const json j = io::to_json(grid);
    CHECK(io::validate_schema(j, schema("wigner_grid")).empty());
    CHECK(j["values"].size() == 20);

    std::ostringstream csv;
    io::write_grid_csv(grid, csv);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,p,w");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 20);
}

TEST_CASE("records CSV and JSON round trips") {
    const DensityOperator rho = DensityOperator::pure(FockVector::basis(1, 4));
    const auto records =
        sample_quadratures(rho, 200, PhaseSchedule::uniform_scan(8), 13);

    std::ostringstream csv;
    io::write_records_csv(records, csv);
    std::istringstream in(csv.str());
    const auto back = io::read_records_csv(in);
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(back[i].theta == records[i].theta);
        CHECK(back[i].x == records[i].x);
    }

    const json j = io::records_to_json(records);
    CHECK(io::validate_schema(j, schema("records")).empty());
    const auto jback = io::records_from_json(j);
    REQUIRE(jback.size() == records.size());
    CHECK(jback[100].x == records[100].x);

    std::istringstream bad("theta,x\n0.1,notanumber\n");
    CHECK_THROWS_AS(io::read_records_csv(bad), ParseError);
}

TEST_CASE("diagnostics and metrics exports") {
    const DensityOperator rho = DensityOperator::pure(FockVector::basis(0, 4));
    const auto records =
        sample_quadratures(rho, 500, PhaseSchedule::uniform_scan(8), 1);
    TomoSettings settings;
    settings.dim = 4;
    settings.max_iters = 50;
    settings.convergence_tol = 1e-8;
    const TomoResult result = mle_reconstruct(records, settings);

    CHECK(io::validate_schema(io::to_json(result), schema("diagnostics")).empty());
    CHECK(io::validate_schema(io::to_json(metrics(result.rho)), schema("metrics"))
              .empty());
}

TEST_CASE("schema validator catches structural problems") {
    const json good = {{"dim", 2}, {"entries", {{1.0, 0.0}, {0.0, 0.0}}}};
    CHECK(io::validate_schema(good, schema("state")).empty());

    json missing = good;
    missing.erase("dim");
    CHECK_FALSE(io::validate_schema(missing, schema("state")).empty());

    json wrong_type = good;
    wrong_type["dim"] = "two";
    CHECK_FALSE(io::validate_schema(wrong_type, schema("state")).empty());

    json bad_pair = good;
    bad_pair["entries"][0] = {1.0};
    CHECK_FALSE(io::validate_schema(bad_pair, schema("state")).empty());
}

TEST_CASE("malformed state JSON is rejected") {
    CHECK_THROWS_AS(io::fock_from_json(json::parse("{\"dim\": 0, \"entries\": []}")),
                    ParseError);
    CHECK_THROWS_AS(io::fock_from_json(json::parse("{\"entries\": []}")),
                    ParseError);
    CHECK_THROWS_AS(
        io::fock_from_json(json::parse("{\"dim\": 1, \"entries\": [[1, 0, 0]]}")),
        ParseError);
    CHECK_THROWS_AS(io::load_json_file("/nonexistent/path.json"), ParseError);
}
