#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hadamard/euclidean.hpp"
#include "hadamard/spd.hpp"
#include "hadamard/spider.hpp"
#include "hadamard/treespace.hpp"

namespace hadamard::io {

using nlohmann::json;

/// Shortest round-trip decimal text for a double (used by the CSV trace and
/// anywhere byte-stable formatting matters).
inline std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

// Point encodings: euclidean points are arrays of numbers, spider points are
// {ray, radius} objects, symmetric matrices are row-major arrays of rows,
// trees are Newick strings.

inline json encode_point(const EuclideanSpace&, const EuclideanSpace::Point& p) {
    return json(p);
}

inline EuclideanSpace::Point decode_point(const EuclideanSpace& space, const json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected an array for a euclidean point");
    EuclideanSpace::Point p = j.get<std::vector<double>>();
    space.validate(p);
    return p;
}

inline json encode_point(const SpiderSpace&, const SpiderSpace::Point& p) {
    return json{{"ray", p.ray}, {"radius", p.radius}};
}

inline SpiderSpace::Point decode_point(const SpiderSpace& space, const json& j) {
    if (!j.is_object() || !j.contains("ray") || !j.contains("radius"))
        throw std::invalid_argument("expected {ray, radius} for a spider point");
    SpiderPoint p{j.at("ray").get<int>(), j.at("radius").get<double>()};
    space.validate(p);
    return p;
}

inline json encode_point(const SpdSpace&, const SpdSpace::Point& p) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < p.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < p.cols(); ++c) row.push_back(p(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline SpdSpace::Point decode_point(const SpdSpace& space, const json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected an array of rows for a matrix");
    const std::size_t n = j.size();
    Eigen::MatrixXd m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        if (!j[r].is_array() || j[r].size() != n)
            throw std::invalid_argument("matrix rows must all have the same length");
        for (std::size_t c = 0; c < n; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                j[r][c].get<double>();
    }
    space.validate(m);  // symmetric positive definite on load
    return m;
}

inline json encode_point(const BhvSpace& space, const BhvSpace::Point& p) {
    return json(emit_newick(p, space.taxa()));
}

inline BhvSpace::Point decode_point(const BhvSpace& space, const json& j) {
    if (!j.is_string()) throw std::invalid_argument("expected a Newick string for a tree");
    return parse_newick(j.get<std::string>(), space.taxa(), space.tolerance());
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Writes through a temporary file in the same directory, then renames.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write file: " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, target);
}

}  // namespace hadamard::io
