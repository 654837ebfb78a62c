#pragma once

// Exact rational dense linear algebra: row reduction, rank, nullspace and
// least-norm-style solves (free variables pinned to zero), used by the
// cohomology and lifting code.

#include <optional>
#include <vector>

#include "pforms/rat.hpp"

namespace pforms {

using QVec = std::vector<Rat>;
using QMatrix = std::vector<QVec>;

// Reduced row echelon form in place; returns pivot column indices.
std::vector<int> rref(QMatrix& m);

int rank(QMatrix m);

// Basis of the right nullspace of m (vectors of length ncols).
std::vector<QVec> nullspace(QMatrix m, int ncols);

// Solve m x = b exactly; free variables set to zero. Returns nullopt when
// inconsistent.
std::optional<QVec> solve(QMatrix m, QVec b);

// Rank of the stack of `rows`; utility for span computations.
int span_rank(const std::vector<QVec>& rows);

// True if v lies in the row span.
bool in_span(const std::vector<QVec>& rows, const QVec& v);

}  // namespace pforms
