#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geom.hpp"
#include "validation.hpp"

namespace gac {

namespace detail {

// shortest round-trippable decimal form, so reruns are byte identical
inline std::string fmt_double(double v) {
    char buf[40];
    const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf, std::size_t(std::max(len, 0)));
}

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            std::size_t end = i;
            std::size_t b = start;
            while (b < end && (line[b] == ' ' || line[b] == '\t')) ++b;
            while (end > b && (line[end - 1] == ' ' || line[end - 1] == '\t' ||
                               line[end - 1] == '\r'))
                --end;
            out.push_back(line.substr(b, end - b));
            start = i + 1;
        }
    }
    return out;
}

inline double parse_double(const std::string& s, const std::string& where) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::runtime_error("csv: bad number '" + s + "' in " + where);
    return v;
}

inline std::uint64_t parse_uint(const std::string& s, const std::string& where) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::runtime_error("csv: bad integer '" + s + "' in " + where);
    return v;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // \n endings on every platform
    if (!out) throw std::runtime_error("csv: cannot write " + path);
    return out;
}

inline std::vector<std::vector<std::string>> read_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        rows.push_back(split_line(line));
    }
    if (rows.empty()) throw std::runtime_error("csv: empty file " + path);
    return rows;
}

} // namespace detail

// vertices: header x,y[,value]
inline void write_points_csv(const std::string& path, const std::vector<Point2>& pts,
                             const std::vector<double>* values = nullptr) {
    if (values && values->size() != pts.size())
        throw std::invalid_argument("write_points_csv: value count mismatch");
    auto out = detail::open_out(path);
    out << (values ? "x,y,value\n" : "x,y\n");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        out << detail::fmt_double(pts[i].x) << ',' << detail::fmt_double(pts[i].y);
        if (values) out << ',' << detail::fmt_double((*values)[i]);
        out << '\n';
    }
}

inline std::pair<std::vector<Point2>, std::vector<double>> read_points_csv(
    const std::string& path) {
    const auto rows = detail::read_rows(path);
    const auto& header = rows[0];
    if (header.size() < 2 || header[0] != "x" || header[1] != "y")
        throw std::runtime_error("csv: expected x,y[,value] header in " + path);
    const bool with_values = header.size() >= 3 && header[2] == "value";
    std::vector<Point2> pts;
    std::vector<double> vals;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() < (with_values ? 3u : 2u))
            throw std::runtime_error("csv: short row in " + path);
        pts.push_back({detail::parse_double(rows[r][0], path),
                       detail::parse_double(rows[r][1], path)});
        if (with_values) vals.push_back(detail::parse_double(rows[r][2], path));
    }
    return {std::move(pts), std::move(vals)};
}

// undirected edges: header src,dst with src < dst
inline void write_edges_csv(const std::string& path,
                            const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    auto out = detail::open_out(path);
    out << "src,dst\n";
    for (const auto& [a, b] : edges) out << a << ',' << b << '\n';
}

inline std::vector<std::pair<std::uint32_t, std::uint32_t>> read_edges_csv(
    const std::string& path) {
    const auto rows = detail::read_rows(path);
    if (rows[0].size() < 2 || rows[0][0] != "src" || rows[0][1] != "dst")
        throw std::runtime_error("csv: expected src,dst header in " + path);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() < 2) throw std::runtime_error("csv: short row in " + path);
        edges.emplace_back(std::uint32_t(detail::parse_uint(rows[r][0], path)),
                           std::uint32_t(detail::parse_uint(rows[r][1], path)));
    }
    return edges;
}

// scalar field: header vertex,value
inline void write_values_csv(const std::string& path, const std::vector<double>& values) {
    auto out = detail::open_out(path);
    out << "vertex,value\n";
    for (std::size_t i = 0; i < values.size(); ++i)
        out << i << ',' << detail::fmt_double(values[i]) << '\n';
}

inline std::vector<double> read_values_csv(const std::string& path) {
    const auto rows = detail::read_rows(path);
    if (rows[0].size() < 2 || rows[0][0] != "vertex" || rows[0][1] != "value")
        throw std::runtime_error("csv: expected vertex,value header in " + path);
    std::vector<double> vals;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() < 2) throw std::runtime_error("csv: short row in " + path);
        const std::size_t idx = detail::parse_uint(rows[r][0], path);
        if (idx != r - 1) throw std::runtime_error("csv: vertex ids must be 0..n-1 in " + path);
        vals.push_back(detail::parse_double(rows[r][1], path));
    }
    return vals;
}

// vector field: header vertex,vx,vy
inline void write_vectors_csv(const std::string& path, const std::vector<double>& x,
                              const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("write_vectors_csv: size mismatch");
    auto out = detail::open_out(path);
    out << "vertex,vx,vy\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        out << i << ',' << detail::fmt_double(x[i]) << ',' << detail::fmt_double(y[i]) << '\n';
}

// interior labels: header vertex,interior with 0/1 entries
inline void write_labels_csv(const std::string& path, const std::vector<std::uint8_t>& labels) {
    auto out = detail::open_out(path);
    out << "vertex,interior\n";
    for (std::size_t i = 0; i < labels.size(); ++i)
        out << i << ',' << (labels[i] ? 1 : 0) << '\n';
}

// seed sets: a bare list of vertex indices, optional single-column header
inline std::vector<std::uint32_t> read_index_csv(const std::string& path) {
    const auto rows = detail::read_rows(path);
    std::vector<std::uint32_t> idx;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].empty()) continue;
        if (r == 0 && !rows[r][0].empty() && !std::isdigit((unsigned char)rows[r][0][0]))
            continue; // header line
        idx.push_back(std::uint32_t(detail::parse_uint(rows[r][0], path)));
    }
    return idx;
}

inline void write_error_table_csv(const std::string& path, const ErrorTable& table) {
    auto out = detail::open_out(path);
    out << "n,trial,operator,filter,e_r\n";
    for (const ErrorRow& r : table)
        out << r.n << ',' << r.trial << ',' << r.op << ',' << r.filter << ','
            << detail::fmt_double(r.e_r) << '\n';
}

} // namespace gac
