#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hyperstat/geometry.hpp"
#include "hyperstat/negtype.hpp"
#include "hyperstat/sample.hpp"

namespace hyperstat::io {

using Eigen::MatrixXd;

enum class Format { Csv, Json };

/// Result of reading a data file: either a point sample (stored in
/// canonical hyperboloid coordinates, with the source model remembered)
/// or a raw distance matrix.
struct Ingested {
    std::optional<metric::Sample> sample;
    std::optional<geometry::Model> source_model;
    std::optional<negtype::DistanceMatrix> matrix;

    bool is_sample() const { return sample.has_value(); }
};

/// Reads a point-set file (CSV: `model,dim` metadata row then coordinate
/// rows; JSON: {"model": ..., "points": [[...]]}) or a header-free square
/// CSV distance matrix. Malformed content raises ParseError with line and
/// column; rows violating model invariants raise PreconditionError naming
/// the row.
Ingested ingest(const std::string& path, Format format);

/// Format from the file extension: .json is JSON, anything else CSV.
Ingested ingest_auto(const std::string& path);

/// %.17g formatting used for every float that leaves the program; 17
/// significant digits round-trip IEEE doubles exactly.
std::string format_double(double v);

/// Writes a sample as CSV/JSON in the given model's coordinates. The
/// default (hyperboloid) reproduces the stored rows exactly, making
/// ingest(emit(ingest(f))) == ingest(f).
void write_sample_csv(const std::string& path, const metric::Sample& sample,
                      geometry::Model model = geometry::Model::Hyperboloid);
void write_sample_json(const std::string& path, const metric::Sample& sample,
                       geometry::Model model = geometry::Model::Hyperboloid);

/// Header-free CSV matrix, %.17g entries.
void write_matrix_csv(const std::string& path, const MatrixXd& m);

/// Order-preserving JSON value with %.17g float serialization, so reports
/// are byte-for-byte reproducible from (inputs, config, seed).
class Json {
  public:
    Json() : kind_(Kind::Null) {}
    Json(bool b) : kind_(Kind::Bool), bool_(b) {}
    Json(int v) : kind_(Kind::Int), int_(v) {}
    Json(std::int64_t v) : kind_(Kind::Int), int_(v) {}
    Json(std::uint64_t v) : kind_(Kind::UInt), uint_(v) {}
    Json(double v) : kind_(Kind::Double), double_(v) {}
    Json(const char* s) : kind_(Kind::String), string_(s) {}
    Json(std::string s) : kind_(Kind::String), string_(std::move(s)) {}

    static Json object();
    static Json array();

    /// Object field (insertion-ordered); replaces an existing key.
    Json& set(const std::string& key, Json value);
    /// Array element.
    Json& push(Json value);

    std::string dump(int indent = 2) const;

  private:
    enum class Kind { Null, Bool, Int, UInt, Double, String, Array, Object };

    void write(std::string& out, int indent, int depth) const;

    Kind kind_;
    bool bool_ = false;
    std::int64_t int_ = 0;
    std::uint64_t uint_ = 0;
    double double_ = 0.0;
    std::string string_;
    std::vector<Json> array_;
    std::vector<std::pair<std::string, Json>> object_;
};

/// Writes text to path, failing loudly.
void write_file(const std::string& path, const std::string& content);

/// Reads a whole file.
std::string read_file(const std::string& path);

}  // namespace hyperstat::io
