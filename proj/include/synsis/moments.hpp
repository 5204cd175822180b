#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "synsis/graph.hpp"
#include "synsis/model.hpp"

namespace synsis {

/// Index map for the stacked moment vector p: first moments p_i occupy
/// slots 0..N-1, canonical second moments p_{ij} (i < j) occupy slots
/// N..dim-1 in lexicographic order. dim = (N^2 + N) / 2.
class MomentIndex {
public:
    explicit MomentIndex(std::size_t n) : n_(static_cast<std::int64_t>(n)) {}

    std::int64_t nodes() const { return n_; }
    std::int64_t dim() const { return (n_ * n_ + n_) / 2; }

    std::int64_t single(int i) const;

    /// Symmetric in its arguments; i == j is rejected because diagonal
    /// second moments are not part of the stacked vector.
    std::int64_t pair(int i, int j) const;

private:
    std::int64_t n_;
};

/// Sparse square matrix in CSR form with the Metzler sign pattern
/// (all off-diagonal entries nonnegative). Rows and columns are indexed
/// by a MomentIndex. Immutable once built.
class MomentMatrix {
public:
    MomentMatrix(std::int64_t dim, std::vector<std::int64_t> row_ptr,
                 std::vector<std::int32_t> col, std::vector<double> val);

    std::int64_t dim() const { return dim_; }
    std::int64_t nnz() const { return static_cast<std::int64_t>(val_.size()); }

    bool is_metzler() const;
    double max_abs_diagonal() const;

    /// Entry lookup by binary search within the row; absent entries are 0.
    double coeff(std::int64_t row, std::int64_t col) const;

    /// y = M x (y is overwritten; no aliasing).
    void multiply(const std::vector<double>& x, std::vector<double>& y) const;

    const std::vector<std::int64_t>& row_ptr() const { return row_ptr_; }
    const std::vector<std::int32_t>& col() const { return col_; }
    const std::vector<double>& val() const { return val_; }

private:
    std::int64_t dim_;
    std::vector<std::int64_t> row_ptr_;
    std::vector<std::int32_t> col_;
    std::vector<double> val_;
};

/// Assembles the moment-bound matrix M over the stacked vector
/// (p_1..p_N, p_{ij} with i < j).
///
/// Single row i:  -delta_i on the diagonal, beta_i on each neighboring
/// single j, and gamma_j accumulated onto pair (j, k) for every neighbor
/// j of i and every neighbor k of j other than i.
///
/// Pair row (i, l), i < l:  diagonal -delta_i - delta_l - a_il (beta_i +
/// beta_l); a_il beta_l on single i and a_il beta_i on single l; beta_l on
/// pair (i, m) for neighbors m of l other than i; beta_i on pair (j, l)
/// for neighbors j of i other than l; gamma_m on pair (n, m) for neighbors
/// m of l and neighbors n of m other than l; gamma_j on pair (k, j) for
/// neighbors j of i and neighbors k of j other than i.
///
/// Coefficients landing on the same slot sum. Assembly is row-ordered and
/// deterministic.
MomentMatrix build_moment_matrix(const Graph& g, const ModelParams& p);

/// Coordinate-format dump: header "dim nnz", then one "row col value"
/// triple per line in row-major order.
void write_coordinate(std::ostream& out, const MomentMatrix& m);

} // namespace synsis
