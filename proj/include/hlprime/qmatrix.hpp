#pragma once

// Exact rational matrices: reduced row echelon form with a recorded row
// transform, rank, kernel basis.  Sizes here are tiny (rows = number of
// forms, cols = number of monomials), so simple Gaussian elimination over
// mpq is plenty.

#include <vector>

#include <gmpxx.h>

#include "hlprime/common.hpp"

namespace hlprime {

struct QMatrix {
    int rows = 0, cols = 0;
    std::vector<mpq_class> a;  // row-major

    QMatrix() = default;
    QMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, mpq_class(0)) {}

    mpq_class& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const mpq_class& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

struct RrefResult {
    QMatrix r;                    // the reduced matrix
    QMatrix transform;            // invertible T with r = T * input
    std::vector<int> pivot_cols;  // one per pivot row, ascending row order
    int rank = 0;
};

// Column j is eliminated before column j+1; callers order columns by
// whatever priority they need (e.g. decreasing graded-lex).
RrefResult rref(const QMatrix& m);

int rank(const QMatrix& m);

// Basis of the right kernel (columns become coordinates).
std::vector<std::vector<mpq_class>> kernel_basis(const QMatrix& m);

}  // namespace hlprime
