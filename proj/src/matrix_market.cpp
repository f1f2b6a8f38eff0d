#include "nodallab/matrix_market.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace nodallab {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct MmHeader {
    std::string object, format, field, symmetry;
};

MmHeader read_header(std::istream& is, std::string& size_line) {
    std::string line;
    if (!std::getline(is, line)) throw DataError("matrix market: empty stream");
    std::istringstream h(line);
    std::string banner;
    MmHeader hdr;
    h >> banner >> hdr.object >> hdr.format >> hdr.field >> hdr.symmetry;
    if (banner != "%%MatrixMarket" || hdr.object != "matrix")
        throw DataError("matrix market: bad banner: " + line);
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] == '%') continue;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        size_line = line;
        return hdr;
    }
    throw DataError("matrix market: missing size line");
}

}  // namespace

void write_matrix_market(std::ostream& os, const AdjacencyMatrix& a) {
    const auto edges = a.edge_list();
    os << "%%MatrixMarket matrix coordinate pattern symmetric\n";
    os << a.n << " " << a.n << " " << edges.size() << "\n";
    for (const auto& [i, j] : edges) os << (j + 1) << " " << (i + 1) << "\n";  // lower triangle
}

void write_matrix_market(std::ostream& os, const SymmetricMatrix& s) {
    std::vector<std::pair<std::pair<int, int>, double>> entries;
    for (int j = 0; j < s.n; ++j)
        for (int i = j; i < s.n; ++i)
            if (s.entries(i, j) != 0.0) entries.push_back({{i, j}, s.entries(i, j)});
    os << "%%MatrixMarket matrix coordinate real symmetric\n";
    os << s.n << " " << s.n << " " << entries.size() << "\n";
    for (const auto& [ij, v] : entries)
        os << (ij.first + 1) << " " << (ij.second + 1) << " " << format_double(v) << "\n";
}

AdjacencyMatrix read_adjacency_matrix_market(std::istream& is) {
    std::string size_line;
    const MmHeader hdr = read_header(is, size_line);
    if (hdr.format != "coordinate" || hdr.field != "pattern" || hdr.symmetry != "symmetric")
        throw DataError("matrix market: expected coordinate pattern symmetric");
    std::istringstream sz(size_line);
    int rows = 0, cols = 0;
    long nnz = 0;
    sz >> rows >> cols >> nnz;
    if (rows != cols || rows < 1) throw DataError("matrix market: bad sizes");
    AdjacencyMatrix a;
    a.n = rows;
    a.entries = Eigen::MatrixXd::Zero(rows, rows);
    for (long k = 0; k < nnz; ++k) {
        int i = 0, j = 0;
        if (!(is >> i >> j)) throw DataError("matrix market: truncated entries");
        if (i == j) throw DataError("matrix market: adjacency diagonal entry");
        a.entries(i - 1, j - 1) = 1.0;
        a.entries(j - 1, i - 1) = 1.0;
    }
    return a;
}

SymmetricMatrix read_symmetric_matrix_market(std::istream& is) {
    std::string size_line;
    const MmHeader hdr = read_header(is, size_line);
    if (hdr.format != "coordinate" || hdr.field != "real" || hdr.symmetry != "symmetric")
        throw DataError("matrix market: expected coordinate real symmetric");
    std::istringstream sz(size_line);
    int rows = 0, cols = 0;
    long nnz = 0;
    sz >> rows >> cols >> nnz;
    if (rows != cols || rows < 1) throw DataError("matrix market: bad sizes");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, rows);
    for (long k = 0; k < nnz; ++k) {
        int i = 0, j = 0;
        double v = 0.0;
        if (!(is >> i >> j >> v)) throw DataError("matrix market: truncated entries");
        m(i - 1, j - 1) = v;
        m(j - 1, i - 1) = v;
    }
    return SymmetricMatrix(std::move(m));
}

void save_matrix_market(const std::string& path, const AdjacencyMatrix& a) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot open for write: " + path);
    write_matrix_market(f, a);
}

void save_matrix_market(const std::string& path, const SymmetricMatrix& s) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot open for write: " + path);
    write_matrix_market(f, s);
}

AdjacencyMatrix load_adjacency_matrix_market(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open for read: " + path);
    return read_adjacency_matrix_market(f);
}

SymmetricMatrix load_symmetric_matrix_market(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open for read: " + path);
    return read_symmetric_matrix_market(f);
}

}  // namespace nodallab
