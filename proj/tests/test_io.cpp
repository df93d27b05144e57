#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "hyperstat/generators.hpp"
#include "hyperstat/io.hpp"
#include "hyperstat/negtype.hpp"
#include "hyperstat/sample.hpp"

using namespace hyperstat;

namespace {

std::filesystem::path scratch_file(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "hyperstat_io_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string write_scratch(const std::string& name, const std::string& content) {
    const auto path = scratch_file(name);
    std::ofstream out(path);
    out << content;
    return path.string();
}

template <class Fn>
std::string message_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("csv round trip through each coordinate model") {
    const auto sample = gen::uniform_ball(2, 7, 1.5, 51);
    for (auto model : {geometry::Model::Hyperboloid, geometry::Model::Klein, geometry::Model::Poincare}) {
        const auto path = scratch_file(std::string("roundtrip_") + geometry::to_string(model) + ".csv").string();
        io::write_sample_csv(path, sample, model);
        const auto back = io::ingest_auto(path);
        REQUIRE(back.is_sample());
        CHECK(back.source_model == model);
        REQUIRE(back.sample->size() == 7);
        CHECK((back.sample->points - sample.points).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("json round trip preserves points and names the model") {
    const auto sample = gen::uniform_ball(3, 5, 1.0, 52);
    const auto path = scratch_file("roundtrip.json").string();
    io::write_sample_json(path, sample, geometry::Model::Poincare);
    const auto back = io::ingest_auto(path);
    REQUIRE(back.is_sample());
    CHECK(back.source_model == geometry::Model::Poincare);
    CHECK((back.sample->points - sample.points).cwiseAbs().maxCoeff() <= 1e-12);
    // the file is genuine json with the declared shape
    std::ifstream in(path);
    const auto doc = nlohmann::json::parse(in);
    CHECK(doc.at("model") == "poincare");
    CHECK(doc.at("points").size() == 5);
}

TEST_CASE("ingest-emit-ingest is idempotent at the byte level") {
    const auto sample = gen::uniform_ball(2, 9, 2.0, 53);
    const auto first = scratch_file("idem1.csv").string();
    io::write_sample_csv(first, sample, geometry::Model::Klein);
    const auto second = scratch_file("idem2.csv").string();
    io::write_sample_csv(second, *io::ingest_auto(first).sample, geometry::Model::Hyperboloid);
    const auto third = scratch_file("idem3.csv").string();
    io::write_sample_csv(third, *io::ingest_auto(second).sample, geometry::Model::Hyperboloid);
    CHECK(io::read_file(second) == io::read_file(third));
}

TEST_CASE("square csv without a model header ingests as a distance matrix") {
    Eigen::MatrixXd d(3, 3);
    d << 0, 1, 2, 1, 0, 1.5, 2, 1.5, 0;
    const auto path = scratch_file("matrix.csv").string();
    io::write_matrix_csv(path, d);
    const auto back = io::ingest_auto(path);
    CHECK(!back.is_sample());
    REQUIRE(back.matrix.has_value());
    CHECK(back.matrix->entries() == d);  // %.17g survives the round trip bit for bit
}

TEST_CASE("parse errors carry line and column") {
    const auto p1 = write_scratch("bad_number.csv", "hyperboloid,2\n1.0,abc,0.0\n");
    const auto m1 = message_of([&] { io::ingest_auto(p1); });
    CHECK(m1.find("line 2") != std::string::npos);
    CHECK(m1.find("column 5") != std::string::npos);
    CHECK_THROWS_AS(io::ingest_auto(p1), ParseError);

    const auto p2 = write_scratch("ragged.csv", "hyperboloid,2\n1.0,0.0,0.0\n1.0,0.0\n");
    const auto m2 = message_of([&] { io::ingest_auto(p2); });
    CHECK(m2.find("line 3") != std::string::npos);
    CHECK_THROWS_AS(io::ingest_auto(p2), ParseError);

    const auto p3 = write_scratch("model.csv", "sphere,2\n1.0,0.0,0.0\n");
    CHECK_THROWS_AS(io::ingest_auto(p3), ParseError);

    const auto p4 = write_scratch("nonsquare.csv", "0,1\n1,0\n2,1\n");
    CHECK_THROWS_AS(io::ingest_auto(p4), ParseError);

    CHECK_THROWS_AS(io::ingest_auto(write_scratch("empty.csv", "")), ParseError);
    CHECK_THROWS_AS(io::ingest_auto(write_scratch("header_only.csv", "klein,2\n")), PreconditionError);
}

TEST_CASE("invalid points are precondition errors with their line") {
    const auto p = write_scratch("outside.csv", "klein,2\n0.1,0.2\n1.2,0.0\n");
    CHECK_THROWS_AS(io::ingest_auto(p), PreconditionError);
    const auto m = message_of([&] { io::ingest_auto(p); });
    CHECK(m.find("line 3") != std::string::npos);
}

TEST_CASE("json ingest validates its shape") {
    CHECK_THROWS_AS(io::ingest_auto(write_scratch("noflavor.json", R"({"points": [[1.0, 0.0, 0.0]]})")), ParseError);
    CHECK_THROWS_AS(io::ingest_auto(write_scratch("badpoints.json", R"({"model": "klein", "points": 3})")),
                    ParseError);
    CHECK_THROWS_AS(io::ingest_auto(write_scratch("trailing.json", R"({"model": "klein", "points": [[0.1)")),
                    ParseError);
    CHECK_THROWS_AS(io::ingest("/nonexistent/path.json", io::Format::Json), PreconditionError);
}

TEST_CASE("doubles print with 17 significant digits and read back exactly") {
    for (double x : {3.141592653589793, 0.1, 1.0 / 3.0, 1e-300, 1.7976931348623157e308, 0.0, -42.0}) {
        const auto s = io::format_double(x);
        CHECK(std::stod(s) == x);
    }
    CHECK(io::format_double(1.0) == "1");
    CHECK_THROWS_AS(io::format_double(std::nan("")), NumericError);
    CHECK_THROWS_AS(io::format_double(std::numeric_limits<double>::infinity()), NumericError);
}

TEST_CASE("report writer: insertion order, escapes, and stable bytes") {
    auto obj = io::Json::object();
    obj.set("zeta", 1).set("alpha", io::Json::array().push(true).push(io::Json()).push("x\"y"));
    obj.set("num", 0.5);
    const auto text = obj.dump();
    // semantic content survives a real json parser
    const auto doc = nlohmann::json::parse(text);
    CHECK(doc.at("zeta") == 1);
    CHECK(doc.at("alpha")[0] == true);
    CHECK(doc.at("alpha")[1].is_null());
    CHECK(doc.at("alpha")[2] == "x\"y");
    CHECK(doc.at("num") == 0.5);
    // insertion order, not alphabetical
    CHECK(text.find("zeta") < text.find("alpha"));
    CHECK(obj.dump() == text);
    // replacing a key keeps its position
    obj.set("zeta", 2);
    const auto text2 = obj.dump();
    CHECK(text2.find("zeta") < text2.find("alpha"));
    CHECK(nlohmann::json::parse(text2).at("zeta") == 2);
}

TEST_CASE("report writer rejects kind confusion") {
    auto arr = io::Json::array();
    CHECK_THROWS_AS(arr.set("k", 1), PreconditionError);
    auto obj = io::Json::object();
    CHECK_THROWS_AS(obj.push(1), PreconditionError);
}
