#include "hlprime/qmatrix.hpp"

namespace hlprime {

RrefResult rref(const QMatrix& m) {
    RrefResult out;
    out.r = m;
    out.transform = QMatrix(m.rows, m.rows);
    for (int i = 0; i < m.rows; ++i) out.transform.at(i, i) = 1;

    QMatrix& r = out.r;
    QMatrix& t = out.transform;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int piv = -1;
        for (int i = row; i < m.rows; ++i) {
            if (r.at(i, col) != 0) {
                piv = i;
                break;
            }
        }
        if (piv < 0) continue;
        if (piv != row) {
            for (int j = 0; j < m.cols; ++j) std::swap(r.at(piv, j), r.at(row, j));
            for (int j = 0; j < m.rows; ++j) std::swap(t.at(piv, j), t.at(row, j));
        }
        mpq_class inv = 1 / r.at(row, col);
        for (int j = 0; j < m.cols; ++j) r.at(row, j) *= inv;
        for (int j = 0; j < m.rows; ++j) t.at(row, j) *= inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == row || r.at(i, col) == 0) continue;
            mpq_class f = r.at(i, col);
            for (int j = 0; j < m.cols; ++j) r.at(i, j) -= f * r.at(row, j);
            for (int j = 0; j < m.rows; ++j) t.at(i, j) -= f * t.at(row, j);
        }
        out.pivot_cols.push_back(col);
        ++row;
    }
    out.rank = row;
    return out;
}

int rank(const QMatrix& m) { return rref(m).rank; }

std::vector<std::vector<mpq_class>> kernel_basis(const QMatrix& m) {
    RrefResult rr = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (int c : rr.pivot_cols) is_pivot[c] = true;
    std::vector<std::vector<mpq_class>> basis;
    for (int free = 0; free < m.cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<mpq_class> v(m.cols, mpq_class(0));
        v[free] = 1;
        for (int i = 0; i < rr.rank; ++i) {
            // pivot row i has leading 1 at pivot_cols[i]
            v[rr.pivot_cols[i]] = -rr.r.at(i, free);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace hlprime
