#include "compound/matrix_io.hpp"

#include "compound/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace compound::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void append_number(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

} // namespace

Matrix parse_csv(std::string_view text) {
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        const auto line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;
        if (trim(line).empty()) continue;

        std::vector<double> row;
        std::size_t col_no = 0;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            const auto token = trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            ++col_no;
            const std::string where = "line " + std::to_string(line_no) + ", column " + std::to_string(col_no);
            double v = 0.0;
            const auto* first = token.data();
            const auto* last = token.data() + token.size();
            if (!token.empty() && *first == '+') ++first;
            const auto [ptr, ec] = std::from_chars(first, last, v);
            require(!token.empty() && ec == std::errc() && ptr == last, ErrorTag::io_error,
                    "csv: non-numeric token '" + std::string(token) + "' at " + where);
            require(std::isfinite(v), ErrorTag::io_error, "csv: non-finite value at " + where);
            row.push_back(v);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            fail(ErrorTag::io_error, "csv: ragged row at line " + std::to_string(line_no) + " (" +
                                         std::to_string(row.size()) + " entries, expected " +
                                         std::to_string(rows.front().size()) + ")");
        rows.push_back(std::move(row));
    }
    require(!rows.empty(), ErrorTag::io_error, "csv: no data");

    Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return out;
}

Matrix parse_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorTag::io_error, std::string("json: ") + e.what());
    }
    require(doc.is_object() && doc.contains("rows") && doc.contains("cols") && doc.contains("data"), ErrorTag::io_error,
            "json: expected an object with \"rows\", \"cols\" and \"data\"");
    require(doc["rows"].is_number_integer() && doc["cols"].is_number_integer() && doc["data"].is_array(),
            ErrorTag::io_error, "json: \"rows\"/\"cols\" must be integers and \"data\" an array");
    const auto rows = doc["rows"].get<long long>();
    const auto cols = doc["cols"].get<long long>();
    const auto& data = doc["data"];
    require(rows >= 1 && cols >= 1, ErrorTag::io_error, "json: dimensions must be positive");
    require(static_cast<long long>(data.size()) == rows * cols, ErrorTag::io_error,
            "json: data has " + std::to_string(data.size()) + " entries, expected " + std::to_string(rows * cols));

    Matrix out(rows, cols);
    for (long long idx = 0; idx < rows * cols; ++idx) {
        const auto& v = data[static_cast<std::size_t>(idx)];
        require(v.is_number(), ErrorTag::io_error, "json: data[" + std::to_string(idx) + "] is not a number");
        const double d = v.get<double>();
        require(std::isfinite(d), ErrorTag::io_error, "json: data[" + std::to_string(idx) + "] is not finite");
        out(idx / cols, idx % cols) = d;
    }
    return out;
}

Matrix parse_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorTag::io_error, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto body = trim(text);
    try {
        if (ends_with(path, ".json") || (!body.empty() && body.front() == '{')) return parse_json(text);
        return parse_csv(text);
    } catch (const Error& e) {
        fail(e.tag(), path + ": " + e.what());
    }
}

std::string to_csv(const Matrix& x) {
    std::string out;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            if (j) out += ',';
            append_number(out, x(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const Matrix& x) {
    std::string out = "{\"rows\": " + std::to_string(x.rows()) + ", \"cols\": " + std::to_string(x.cols()) + ", \"data\": [";
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            if (i || j) out += ", ";
            append_number(out, x(i, j));
        }
    }
    out += "]}\n";
    return out;
}

void write_matrix(const std::string& path, const Matrix& x) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorTag::io_error, "cannot write '" + path + "'");
    out << (ends_with(path, ".json") ? to_json(x) : to_csv(x));
    require(static_cast<bool>(out), ErrorTag::io_error, "write failed for '" + path + "'");
}

} // namespace compound::io
