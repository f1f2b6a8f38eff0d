#pragma once
#include <iosfwd>
#include <string>

#include "nodallab/ensembles.hpp"

namespace nodallab {

// Matrix Market exchange format. Adjacency matrices are written as
// "coordinate pattern symmetric", dense symmetric matrices as
// "coordinate real symmetric" with round-trip-exact decimal doubles.
void write_matrix_market(std::ostream& os, const AdjacencyMatrix& a);
void write_matrix_market(std::ostream& os, const SymmetricMatrix& s);

AdjacencyMatrix read_adjacency_matrix_market(std::istream& is);
SymmetricMatrix read_symmetric_matrix_market(std::istream& is);

void save_matrix_market(const std::string& path, const AdjacencyMatrix& a);
void save_matrix_market(const std::string& path, const SymmetricMatrix& s);
AdjacencyMatrix load_adjacency_matrix_market(const std::string& path);
SymmetricMatrix load_symmetric_matrix_market(const std::string& path);

}  // namespace nodallab
