// hyperstat: batch CLI for statistics on real hyperbolic space.
//
// Subcommands: check-negtype, energy-test, dcov-test, crofton-verify, gen.
// Every run emits a schema-versioned JSON report (stdout, optionally
// --out) that is byte-reproducible from inputs, flags, and seed. Exit
// codes: 0 all checks pass, 1 a check failed, 2 parse error,
// 3 precondition violation, 4 numeric failure. HYPERSTAT_THREADS caps
// worker threads.

#include <cmath>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "hyperstat/crofton.hpp"
#include "hyperstat/energetics.hpp"
#include "hyperstat/errors.hpp"
#include "hyperstat/generators.hpp"
#include "hyperstat/geometry.hpp"
#include "hyperstat/io.hpp"
#include "hyperstat/negtype.hpp"
#include "hyperstat/rng.hpp"
#include "hyperstat/sample.hpp"

namespace {

using hyperstat::io::Json;

/// Assembles the report envelope in a fixed key order:
/// schema, command, seed, config, tolerances, result, checks, pass.
class Report {
  public:
    Report(std::string command, std::uint64_t seed) : command_(std::move(command)), seed_(seed) {}

    Json& config() { return config_; }
    Json& tolerances() { return tolerances_; }
    Json& result() { return result_; }

    void add_check(const std::string& name, bool pass, Json details = Json::object()) {
        details.set("name", name);
        details.set("pass", pass);
        checks_.push(std::move(details));
        all_pass_ = all_pass_ && pass;
    }

    bool all_pass() const { return all_pass_; }

    int emit(const std::string& out_path) {
        Json doc = Json::object();
        doc.set("schema", 1);
        doc.set("command", command_);
        doc.set("seed", seed_);
        doc.set("config", std::move(config_));
        doc.set("tolerances", std::move(tolerances_));
        doc.set("result", std::move(result_));
        doc.set("checks", std::move(checks_));
        doc.set("pass", all_pass_);
        const std::string text = doc.dump() + "\n";
        std::fputs(text.c_str(), stdout);
        if (!out_path.empty()) hyperstat::io::write_file(out_path, text);
        return all_pass_ ? 0 : 1;
    }

  private:
    std::string command_;
    std::uint64_t seed_;
    Json config_ = Json::object();
    Json tolerances_ = Json::object();
    Json result_ = Json::object();
    Json checks_ = Json::array();
    bool all_pass_ = true;
};

Json vector_json(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push(v[i]);
    return a;
}

hyperstat::metric::Sample load_point_sample(const std::string& path) {
    hyperstat::io::Ingested in = hyperstat::io::ingest_auto(path);
    if (!in.is_sample())
        throw hyperstat::PreconditionError(path + " holds a raw distance matrix; this command needs point samples");
    return *std::move(in.sample);
}

// ---------------------------------------------------------------- commands

struct NegTypeOpts {
    std::string input;
    double tol = 1e-9;
    std::string out;
};

int run_check_negtype(const NegTypeOpts& o) {
    hyperstat::io::Ingested in = hyperstat::io::ingest_auto(o.input);
    const hyperstat::negtype::DistanceMatrix d =
        in.is_sample() ? hyperstat::negtype::distance_matrix(*in.sample) : *std::move(in.matrix);
    const hyperstat::negtype::NegTypeReport rep = hyperstat::negtype::classify(d, o.tol);

    Report report("check-negtype", 0);
    report.config().set("input", o.input).set("points", d.size()).set(
        "input_kind", in.is_sample() ? "points" : "raw-matrix");
    report.tolerances().set("classify_tol", o.tol);
    report.result()
        .set("verdict", hyperstat::negtype::to_string(rep.verdict))
        .set("eigenvalues", vector_json(rep.eigenvalues))
        .set("witness", rep.witness ? vector_json(*rep.witness) : Json());
    report.add_check("negative-type", rep.verdict != hyperstat::negtype::Verdict::NotNegativeType);
    return report.emit(o.out);
}

struct TestOpts {
    std::string input;
    std::string input2;
    int permutations = 500;
    std::uint64_t seed = 0;
    double alpha = 0.05;
    std::string out;
};

int run_energy_test(const TestOpts& o) {
    const auto mu1 = load_point_sample(o.input);
    const auto mu2 = load_point_sample(o.input2);
    const auto r = hyperstat::energetics::energy_perm_test(mu1, mu2, o.permutations, o.seed);

    Report report("energy-test", o.seed);
    report.config().set("input", o.input).set("input2", o.input2).set("permutations", o.permutations);
    report.tolerances().set("alpha", o.alpha);
    report.result()
        .set("statistic", r.statistic)
        .set("p_value", r.p_value)
        .set("permutations", r.permutations)
        .set("seed", r.seed)
        .set("sizes", Json::array().push(mu1.size()).push(mu2.size()));
    report.add_check("reject-null", r.p_value < o.alpha,
                     Json::object().set("p_value", r.p_value).set("alpha", o.alpha));
    return report.emit(o.out);
}

int run_dcov_test(const TestOpts& o) {
    const auto sx = load_point_sample(o.input);
    const auto sy = load_point_sample(o.input2);
    const auto r = hyperstat::energetics::dcov_perm_test(sx, sy, o.permutations, o.seed);

    Report report("dcov-test", o.seed);
    report.config().set("input", o.input).set("input2", o.input2).set("permutations", o.permutations);
    report.tolerances().set("alpha", o.alpha);
    report.result()
        .set("statistic", r.statistic)
        .set("p_value", r.p_value)
        .set("permutations", r.permutations)
        .set("seed", r.seed)
        .set("sizes", Json::array().push(sx.size()).push(sy.size()));
    report.add_check("reject-null", r.p_value < o.alpha,
                     Json::object().set("p_value", r.p_value).set("alpha", o.alpha));
    return report.emit(o.out);
}

struct CroftonOpts {
    int dim = 2;
    std::int64_t mc_samples = 200000;
    std::uint64_t seed = 0;
    std::string out;
};

int run_crofton_verify(const CroftonOpts& o) {
    namespace geo = hyperstat::geometry;
    namespace cro = hyperstat::crofton;
    constexpr int kPairs = 20;
    constexpr double kWindowScale = 1.5;  // R = 1.5 * (d/2)
    constexpr double kSigmaBand = 3.0;
    constexpr double kSeCoeff = 0.01;     // std_error budget 0.01 * max(1, d)

    Report report("crofton-verify", o.seed);
    report.config().set("dim", o.dim).set("mc_samples", o.mc_samples).set("pairs", kPairs);
    report.tolerances()
        .set("sigma_band", kSigmaBand)
        .set("se_coeff", kSeCoeff)
        .set("window_scale", kWindowScale);

    hyperstat::rng::Stream setup = hyperstat::rng::make_stream(o.seed, "cli.crofton-verify.setup");
    const geo::HyperboloidPoint origin = geo::HyperboloidPoint::origin(o.dim);
    auto pair_seed = [&](const char* tag, int k) {
        return o.seed ^ hyperstat::rng::fnv1a64(std::string(tag) + "#" + std::to_string(k));
    };
    auto at_distance = [&](double d, const Eigen::VectorXd& w) {
        Eigen::VectorXd c(o.dim + 1);
        c[0] = std::cosh(d);
        c.tail(o.dim) = std::sinh(d) * w;
        return geo::HyperboloidPoint(c);
    };

    bool cut_pass = true, se_pass = true, embed_pass = true;
    Json pairs = Json::array();
    for (int k = 0; k < kPairs; ++k) {
        const double d = 0.1 + (3.0 - 0.1) * k / (kPairs - 1);
        const Eigen::VectorXd w = geo::random_direction(o.dim, setup);
        const geo::HyperboloidPoint y = at_distance(d, w);
        const double exact = geo::dist(origin, y);
        const double window = kWindowScale * (exact / 2.0);

        const auto one = cro::cut_measure(origin, y,
                                          cro::CroftonSampler::make(o.dim, window, o.mc_samples, pair_seed("one", k)),
                                          cro::Orientation::FirstInSecondOut);
        const auto both = cro::cut_measure(origin, y,
                                           cro::CroftonSampler::make(o.dim, window, o.mc_samples, pair_seed("both", k)),
                                           cro::Orientation::Both);

        const bool p_cut = std::abs(one.value - exact / 2.0) <= kSigmaBand * one.std_error;
        const bool p_se = one.std_error <= kSeCoeff * std::max(1.0, exact);
        const bool p_embed = std::abs(both.value - exact) <= kSigmaBand * both.std_error;
        cut_pass = cut_pass && p_cut;
        se_pass = se_pass && p_se;
        embed_pass = embed_pass && p_embed;

        pairs.push(Json::object()
                       .set("d", exact)
                       .set("estimate", one.value)
                       .set("std_error", one.std_error)
                       .set("pass", p_cut && p_se)
                       .set("both_estimate", both.value)
                       .set("both_std_error", both.std_error)
                       .set("both_pass", p_embed));
    }
    report.result().set("pairs", std::move(pairs));

    report.add_check("eq-cut-pairs", cut_pass);
    report.add_check("std-error-budget", se_pass);
    report.add_check("embedding-pairs", embed_pass);

    {
        // isometry invariance of the cut measure at d = 1.5
        const double d = 1.5;
        const Eigen::VectorXd w = geo::random_direction(o.dim, setup);
        const geo::HyperboloidPoint y = at_distance(d, w);
        const geo::Isometry g = geo::random_isometry(o.dim, setup, 1.0);
        const double window = kWindowScale * (geo::dist(origin, y) / 2.0);
        const auto base = cro::cut_measure(origin, y,
                                           cro::CroftonSampler::make(o.dim, window, o.mc_samples, pair_seed("iso", 0)),
                                           cro::Orientation::Both);
        const auto moved = cro::cut_measure(geo::apply(g, origin), geo::apply(g, y),
                                            cro::CroftonSampler::make(o.dim, window, o.mc_samples, pair_seed("iso", 1)),
                                            cro::Orientation::Both);
        const double band = kSigmaBand * std::hypot(base.std_error, moved.std_error);
        report.add_check("isometry-invariance", std::abs(base.value - moved.value) <= band,
                         Json::object()
                             .set("base", base.value)
                             .set("moved", moved.value)
                             .set("band", band));
    }
    {
        // additivity along the geodesic: cut(x,m) + cut(m,y) = cut(x,y)
        const double d = 2.0;
        const Eigen::VectorXd w = geo::random_direction(o.dim, setup);
        const geo::HyperboloidPoint y = at_distance(d, w);
        const geo::HyperboloidPoint m = geo::geodesic_point(origin, y, 0.5);
        const double window = kWindowScale * (geo::dist(origin, y) / 2.0);
        auto run = [&](const geo::HyperboloidPoint& a, const geo::HyperboloidPoint& b, int idx) {
            return cro::cut_measure(a, b, cro::CroftonSampler::make(o.dim, window, o.mc_samples, pair_seed("add", idx)),
                                    cro::Orientation::Both);
        };
        const auto xm = run(origin, m, 0);
        const auto my = run(m, y, 1);
        const auto xy = run(origin, y, 2);
        const double band =
            kSigmaBand * std::sqrt(xm.std_error * xm.std_error + my.std_error * my.std_error +
                                   xy.std_error * xy.std_error);
        report.add_check("additivity", std::abs(xm.value + my.value - xy.value) <= band,
                         Json::object()
                             .set("split_sum", xm.value + my.value)
                             .set("direct", xy.value)
                             .set("band", band));
    }
    return report.emit(o.out);
}

struct GenOpts {
    std::string generator;
    int n = 100;
    int dim = 2;
    double radius = 1.0;
    double radius2 = 1.5;
    double scale = 0.1;
    std::uint64_t seed = 0;
    std::string model = "hyperboloid";
    std::string out;
};

std::pair<std::string, std::string> paired_paths(const std::string& out) {
    const auto dot = out.rfind('.');
    const auto slash = out.rfind('/');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    const std::string stem = has_ext ? out.substr(0, dot) : out;
    const std::string ext = has_ext ? out.substr(dot) : std::string(".csv");
    return {stem + "_1" + ext, stem + "_2" + ext};
}

void write_sample_auto(const std::string& path, const hyperstat::metric::Sample& s, hyperstat::geometry::Model model) {
    const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
    if (json)
        hyperstat::io::write_sample_json(path, s, model);
    else
        hyperstat::io::write_sample_csv(path, s, model);
}

int run_gen(const GenOpts& o) {
    const hyperstat::geometry::Model model = hyperstat::geometry::model_from_string(o.model);

    Report report("gen", o.seed);
    report.config()
        .set("generator", o.generator)
        .set("n", o.n)
        .set("dim", o.dim)
        .set("radius", o.radius)
        .set("radius2", o.radius2)
        .set("scale", o.scale)
        .set("model", o.model)
        .set("out", o.out);

    Json files = Json::array();
    if (o.generator == "uniform-ball") {
        const auto s = hyperstat::gen::uniform_ball(o.dim, o.n, o.radius, o.seed);
        write_sample_auto(o.out, s, model);
        files.push(o.out);
    } else if (o.generator == "two-ball") {
        const auto [a, b] = hyperstat::gen::two_ball(o.dim, o.n, o.radius, o.radius2, o.seed);
        const auto [p1, p2] = paired_paths(o.out);
        write_sample_auto(p1, a, model);
        write_sample_auto(p2, b, model);
        files.push(p1).push(p2);
    } else if (o.generator == "paired-dependent") {
        const auto [a, b] = hyperstat::gen::paired_dependent(o.dim, o.n, o.scale, o.seed, o.radius);
        const auto [p1, p2] = paired_paths(o.out);
        write_sample_auto(p1, a, model);
        write_sample_auto(p2, b, model);
        files.push(p1).push(p2);
    } else if (o.generator == "paired-independent") {
        const auto [a, b] = hyperstat::gen::paired_independent(o.dim, o.n, o.radius, o.seed);
        const auto [p1, p2] = paired_paths(o.out);
        write_sample_auto(p1, a, model);
        write_sample_auto(p2, b, model);
        files.push(p1).push(p2);
    } else {
        throw hyperstat::ParseError("unknown generator '" + o.generator +
                                    "' (expected uniform-ball, two-ball, paired-dependent, paired-independent)");
    }
    report.result().set("files", std::move(files));
    return report.emit("");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"statistics on real hyperbolic space: negative-type checks, energy and distance-covariance "
                 "tests, and Crofton-measure verification. HYPERSTAT_THREADS caps parallelism."};
    app.require_subcommand(1);

    NegTypeOpts nt;
    auto* cn = app.add_subcommand("check-negtype", "classify a configuration's negative-type status");
    cn->add_option("--input", nt.input, "point file (csv/json) or raw distance matrix csv")->required();
    cn->add_option("--tol", nt.tol, "relative eigenvalue tolerance (default 1e-9)");
    cn->add_option("--out", nt.out, "also write the JSON report here");

    TestOpts et;
    auto* ce = app.add_subcommand("energy-test", "two-sample energy permutation test");
    ce->add_option("--input", et.input, "first sample (point file)")->required();
    ce->add_option("--input2", et.input2, "second sample (point file)")->required();
    ce->add_option("--permutations", et.permutations, "permutation count B (default 500)");
    ce->add_option("--seed", et.seed, "rng seed (default 0)");
    ce->add_option("--tol", et.alpha, "significance level for the reject-null check (default 0.05)");
    ce->add_option("--out", et.out, "also write the JSON report here");

    TestOpts dt;
    auto* cd = app.add_subcommand("dcov-test", "distance-covariance independence permutation test");
    cd->add_option("--input", dt.input, "first sample, row-paired with --input2")->required();
    cd->add_option("--input2", dt.input2, "second sample, row-paired with --input")->required();
    cd->add_option("--permutations", dt.permutations, "permutation count B (default 500)");
    cd->add_option("--seed", dt.seed, "rng seed (default 0)");
    cd->add_option("--tol", dt.alpha, "significance level for the reject-null check (default 0.05)");
    cd->add_option("--out", dt.out, "also write the JSON report here");

    CroftonOpts co;
    auto* cc = app.add_subcommand("crofton-verify", "cut-measure normalization and identity suite");
    cc->add_option("--dim", co.dim, "hyperbolic dimension (default 2)");
    cc->add_option("--mc-samples", co.mc_samples, "Monte Carlo budget per estimate (default 200000)");
    cc->add_option("--seed", co.seed, "rng seed (default 0)");
    cc->add_option("--out", co.out, "also write the JSON report here");

    GenOpts go;
    auto* cg = app.add_subcommand("gen", "generate synthetic samples");
    cg->add_option("generator", go.generator,
                   "uniform-ball | two-ball | paired-dependent | paired-independent")
        ->required();
    cg->add_option("--n", go.n, "points per sample (default 100)");
    cg->add_option("--dim", go.dim, "hyperbolic dimension (default 2)");
    cg->add_option("--radius", go.radius, "ball radius (default 1.0)");
    cg->add_option("--radius2", go.radius2, "second ball radius for two-ball (default 1.5)");
    cg->add_option("--scale", go.scale, "noise scale for paired-dependent (default 0.1)");
    cg->add_option("--seed", go.seed, "rng seed (default 0)");
    cg->add_option("--model", go.model, "output coordinates: hyperboloid | klein | poincare");
    cg->add_option("--out", go.out, "output path (paired generators add _1/_2)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*cn) return run_check_negtype(nt);
        if (*ce) return run_energy_test(et);
        if (*cd) return run_dcov_test(dt);
        if (*cc) return run_crofton_verify(co);
        if (*cg) return run_gen(go);
    } catch (const hyperstat::ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return 2;
    } catch (const hyperstat::PreconditionError& e) {
        std::fprintf(stderr, "precondition error: %s\n", e.what());
        return 3;
    } catch (const hyperstat::NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
    return 2;
}
