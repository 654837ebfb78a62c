#include "pforms/linalgq.hpp"

namespace pforms {

std::vector<int> rref(QMatrix& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = rows;
    for (size_t i = r; i < rows; ++i)
      if (m[i][c] != 0) { piv = i; break; }
    if (piv == rows) continue;
    std::swap(m[r], m[piv]);
    Rat p = m[r][c];
    for (size_t j = c; j < cols; ++j) m[r][j] /= p;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

int rank(QMatrix m) { return static_cast<int>(rref(m).size()); }

std::vector<QVec> nullspace(QMatrix m, int ncols) {
  for (auto& row : m) row.resize(static_cast<size_t>(ncols), Rat(0));
  auto pivots = rref(m);
  std::vector<bool> is_pivot(static_cast<size_t>(ncols), false);
  for (int c : pivots) is_pivot[static_cast<size_t>(c)] = true;
  std::vector<QVec> basis;
  for (int free_c = 0; free_c < ncols; ++free_c) {
    if (is_pivot[static_cast<size_t>(free_c)]) continue;
    QVec v(static_cast<size_t>(ncols), Rat(0));
    v[static_cast<size_t>(free_c)] = 1;
    for (size_t r = 0; r < pivots.size() && r < m.size(); ++r) {
      int pc = pivots[r];
      v[static_cast<size_t>(pc)] = -m[r][static_cast<size_t>(free_c)];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<QVec> solve(QMatrix m, QVec b) {
  size_t rows = m.size();
  size_t cols = rows ? m[0].size() : 0;
  for (size_t i = 0; i < rows; ++i) m[i].push_back(b[i]);
  auto pivots = rref(m);
  // inconsistent iff a pivot lands in the augmented column
  if (!pivots.empty() && pivots.back() == static_cast<int>(cols)) return std::nullopt;
  QVec x(cols, Rat(0));
  for (size_t r = 0; r < pivots.size(); ++r) x[static_cast<size_t>(pivots[r])] = m[r][cols];
  return x;
}

int span_rank(const std::vector<QVec>& rows) {
  QMatrix m = rows;
  return rank(std::move(m));
}

bool in_span(const std::vector<QVec>& rows, const QVec& v) {
  int r0 = span_rank(rows);
  auto m = rows;
  m.push_back(v);
  return span_rank(m) == r0;
}

}  // namespace pforms
