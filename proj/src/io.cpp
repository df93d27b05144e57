#include "hyperstat/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hyperstat/errors.hpp"

namespace hyperstat::io {

namespace {

struct CsvField {
    std::string text;
    int line;    // 1-based
    int column;  // 1-based, position of the field start
};

std::string trimmed(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::vector<CsvField>> read_csv(const std::string& content) {
    std::vector<std::vector<CsvField>> rows;
    std::vector<CsvField> row;
    CsvField field{"", 1, 1};
    int line = 1, column = 1;
    bool row_has_comma = false;
    auto flush_row = [&] {
        // blank lines (no commas, whitespace only) are skipped
        if (row_has_comma || !trimmed(field.text).empty() || !row.empty()) {
            row.push_back(field);
            rows.push_back(row);
        }
        row.clear();
        row_has_comma = false;
    };
    for (char c : content) {
        if (c == '\n') {
            flush_row();
            ++line;
            column = 1;
            field = CsvField{"", line, 1};
            continue;
        }
        if (c == ',') {
            row.push_back(field);
            row_has_comma = true;
            ++column;
            field = CsvField{"", line, column};
            continue;
        }
        if (c != '\r') field.text += c;
        ++column;
    }
    flush_row();
    return rows;
}

double parse_number(const CsvField& f) {
    const std::string t = trimmed(f.text);
    if (t.empty())
        throw ParseError("empty field at line " + std::to_string(f.line) + ", column " + std::to_string(f.column));
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw ParseError("not a number: '" + t + "' at line " + std::to_string(f.line) + ", column " +
                         std::to_string(f.column));
    }
    if (used != t.size())
        throw ParseError("trailing characters in number '" + t + "' at line " + std::to_string(f.line) +
                         ", column " + std::to_string(f.column));
    return v;
}

bool looks_numeric(const std::string& s) {
    const std::string t = trimmed(s);
    if (t.empty()) return false;
    std::size_t used = 0;
    try {
        (void)std::stod(t, &used);
    } catch (const std::exception&) {
        return false;
    }
    return used == t.size();
}

int expected_columns(geometry::Model model, int dim) {
    return model == geometry::Model::Hyperboloid ? dim + 1 : dim;
}

metric::Sample rows_to_sample(const MatrixXd& coords, geometry::Model model, int first_data_line) {
    MatrixXd hyper(coords.rows(), coords.cols() + (model == geometry::Model::Hyperboloid ? 0 : 1));
    for (Eigen::Index i = 0; i < coords.rows(); ++i) {
        try {
            hyper.row(i) = geometry::convert(coords.row(i).transpose(), model, geometry::Model::Hyperboloid);
        } catch (const Error& e) {
            throw PreconditionError("point at line " + std::to_string(first_data_line + static_cast<int>(i)) +
                                    ": " + e.what());
        }
    }
    return metric::make_hyperbolic_sample(hyper);
}

Ingested ingest_csv(const std::string& content) {
    const auto rows = read_csv(content);
    if (rows.empty()) throw ParseError("empty file");
    const auto& head = rows.front();

    const std::string first = trimmed(head.front().text);
    if (!looks_numeric(first)) {
        // metadata row: model,dim
        geometry::Model model;
        try {
            model = geometry::model_from_string(first);
        } catch (const Error&) {
            throw ParseError("unknown model '" + first + "' at line 1, column 1 (expected hyperboloid, klein, "
                             "poincare, or a numeric matrix row)");
        }
        if (head.size() != 2)
            throw ParseError("metadata row must be 'model,dim' (line 1 has " + std::to_string(head.size()) +
                             " fields)");
        const double dim_val = parse_number(head[1]);
        const int dim = static_cast<int>(dim_val);
        if (dim_val != dim || dim < 1)
            throw ParseError("dimension must be a positive integer at line 1, column " +
                             std::to_string(head[1].column));
        geometry::check_dim(dim);
        if (rows.size() < 2) throw PreconditionError("point file has no point rows");

        const int cols = expected_columns(model, dim);
        MatrixXd coords(rows.size() - 1, cols);
        for (std::size_t r = 1; r < rows.size(); ++r) {
            if (static_cast<int>(rows[r].size()) != cols)
                throw ParseError("line " + std::to_string(rows[r].front().line) + ": expected " +
                                 std::to_string(cols) + " coordinates, got " + std::to_string(rows[r].size()));
            for (int c = 0; c < cols; ++c) coords(static_cast<Eigen::Index>(r - 1), c) = parse_number(rows[r][c]);
        }
        Ingested out;
        out.sample = rows_to_sample(coords, model, 2);
        out.source_model = model;
        return out;
    }

    // numeric first row: raw distance matrix
    const std::size_t cols = head.size();
    MatrixXd m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols)
            throw ParseError("line " + std::to_string(rows[r].front().line) + ": expected " + std::to_string(cols) +
                             " fields, got " + std::to_string(rows[r].size()));
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_number(rows[r][c]);
    }
    if (m.rows() != m.cols())
        throw ParseError("matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                         "; a distance matrix must be square");
    Ingested out;
    out.matrix = negtype::DistanceMatrix(std::move(m));
    return out;
}

std::pair<int, int> line_column(const std::string& content, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < content.size(); ++i) {
        if (content[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

Ingested ingest_json(const std::string& content) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = line_column(content, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError("JSON parse error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                         ": " + e.what());
    }
    if (!j.is_object() || !j.contains("model") || !j.contains("points"))
        throw ParseError("ambiguous format: JSON input must be an object with 'model' and 'points' fields");
    if (!j["model"].is_string()) throw ParseError("'model' must be a string");
    geometry::Model model;
    try {
        model = geometry::model_from_string(j["model"].get<std::string>());
    } catch (const Error& e) {
        throw ParseError(std::string("bad 'model' field: ") + e.what());
    }
    const auto& pts = j["points"];
    if (!pts.is_array() || pts.empty()) throw ParseError("'points' must be a nonempty array of coordinate arrays");

    const std::size_t n = pts.size();
    std::size_t cols = 0;
    MatrixXd coords;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = pts[i];
        if (!row.is_array()) throw ParseError("point " + std::to_string(i) + " is not an array");
        if (i == 0) {
            cols = row.size();
            if (cols == 0) throw ParseError("point 0 is empty");
            coords.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols));
        }
        if (row.size() != cols)
            throw ParseError("point " + std::to_string(i) + " has " + std::to_string(row.size()) +
                             " coordinates, expected " + std::to_string(cols));
        for (std::size_t c = 0; c < cols; ++c) {
            if (!row[c].is_number())
                throw ParseError("point " + std::to_string(i) + ", coordinate " + std::to_string(c) +
                                 " is not a number");
            coords(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = row[c].get<double>();
        }
    }
    const int dim = model == geometry::Model::Hyperboloid ? static_cast<int>(cols) - 1 : static_cast<int>(cols);
    geometry::check_dim(dim);
    Ingested out;
    out.sample = rows_to_sample(coords, model, 0);
    out.source_model = model;
    return out;
}

}  // namespace

Ingested ingest(const std::string& path, Format format) {
    const std::string content = read_file(path);
    return format == Format::Json ? ingest_json(content) : ingest_csv(content);
}

Ingested ingest_auto(const std::string& path) {
    const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
    return ingest(path, json ? Format::Json : Format::Csv);
}

std::string format_double(double v) {
    if (!std::isfinite(v)) throw NumericError("refusing to serialize a non-finite number");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

MatrixXd sample_rows_in_model(const metric::Sample& sample, geometry::Model model) {
    if (sample.space.kind != metric::MetricSpace::Kind::Hyperbolic)
        throw PreconditionError("only hyperbolic samples can be written as point files");
    if (model == geometry::Model::Hyperboloid) return sample.points;
    MatrixXd out(sample.points.rows(), sample.points.cols() - 1);
    for (Eigen::Index i = 0; i < sample.points.rows(); ++i)
        out.row(i) = geometry::convert(sample.points.row(i).transpose(), geometry::Model::Hyperboloid, model);
    return out;
}

}  // namespace

void write_sample_csv(const std::string& path, const metric::Sample& sample, geometry::Model model) {
    const MatrixXd rows = sample_rows_in_model(sample, model);
    std::string out = std::string(geometry::to_string(model)) + "," + std::to_string(sample.space.dim) + "\n";
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        for (Eigen::Index j = 0; j < rows.cols(); ++j) {
            if (j) out += ',';
            out += format_double(rows(i, j));
        }
        out += '\n';
    }
    write_file(path, out);
}

void write_sample_json(const std::string& path, const metric::Sample& sample, geometry::Model model) {
    const MatrixXd rows = sample_rows_in_model(sample, model);
    Json points = Json::array();
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < rows.cols(); ++j) row.push(rows(i, j));
        points.push(std::move(row));
    }
    Json doc = Json::object();
    doc.set("model", geometry::to_string(model));
    doc.set("points", std::move(points));
    write_file(path, doc.dump() + "\n");
}

void write_matrix_csv(const std::string& path, const MatrixXd& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    write_file(path, out);
}

Json Json::object() {
    Json j;
    j.kind_ = Kind::Object;
    return j;
}

Json Json::array() {
    Json j;
    j.kind_ = Kind::Array;
    return j;
}

Json& Json::set(const std::string& key, Json value) {
    if (kind_ != Kind::Object) throw PreconditionError("Json::set on a non-object");
    for (auto& [k, v] : object_)
        if (k == key) {
            v = std::move(value);
            return *this;
        }
    object_.emplace_back(key, std::move(value));
    return *this;
}

Json& Json::push(Json value) {
    if (kind_ != Kind::Array) throw PreconditionError("Json::push on a non-array");
    array_.push_back(std::move(value));
    return *this;
}

namespace {

void escape_into(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

}  // namespace

void Json::write(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
    switch (kind_) {
        case Kind::Null: out += "null"; break;
        case Kind::Bool: out += bool_ ? "true" : "false"; break;
        case Kind::Int: out += std::to_string(int_); break;
        case Kind::UInt: out += std::to_string(uint_); break;
        case Kind::Double: out += format_double(double_); break;
        case Kind::String: escape_into(out, string_); break;
        case Kind::Array: {
            if (array_.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (std::size_t i = 0; i < array_.size(); ++i) {
                out += pad;
                array_[i].write(out, indent, depth + 1);
                if (i + 1 < array_.size()) out += ',';
                out += '\n';
            }
            out += close_pad + "]";
            break;
        }
        case Kind::Object: {
            if (object_.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            for (std::size_t i = 0; i < object_.size(); ++i) {
                out += pad;
                escape_into(out, object_[i].first);
                out += ": ";
                object_[i].second.write(out, indent, depth + 1);
                if (i + 1 < object_.size()) out += ',';
                out += '\n';
            }
            out += close_pad + "}";
            break;
        }
    }
}

std::string Json::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw PreconditionError("cannot open for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw PreconditionError("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw PreconditionError("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace hyperstat::io
