#include "ggme/io.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "ggme/errors.hpp"

namespace ggme {

Matrix read_csv_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const char* b = cell.data();
            const char* e = b + cell.size();
            while (b < e && (*b == ' ' || *b == '\t')) ++b;
            while (e > b && (e[-1] == ' ' || e[-1] == '\t')) --e;
            double v;
            auto [ptr, ec] = std::from_chars(b, e, v);
            if (ec != std::errc() || ptr != e)
                throw IoError(path + ": bad cell '" + cell + "'");
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows[0].size())
            throw IoError(path + ": ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError(path + ": empty file");
    Matrix m(static_cast<long>(rows.size()), static_cast<long>(rows[0].size()));
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    return m;
}

void write_csv_matrix(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    char buf[40];
    for (long i = 0; i < m.rows(); ++i) {
        for (long j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            out << buf << (j + 1 < m.cols() ? "," : "");
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

std::string fnv1a_hex(const void* data, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= b[i];
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

std::string matrix_hash(const Matrix& m) {
    // hash the textual form (plus shape) so equal matrices hash equally
    // regardless of how they were produced
    std::string s;
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%ldx%ld;", (long)m.rows(), (long)m.cols());
    s += buf;
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g,", m(i, j));
            s += buf;
        }
    return fnv1a_hex(s.data(), s.size());
}

std::string string_hash(const std::string& s) { return fnv1a_hex(s.data(), s.size()); }

} // namespace ggme
