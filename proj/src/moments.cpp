#include "synsis/moments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace synsis {

std::int64_t MomentIndex::single(int i) const {
    if (i < 0 || i >= n_)
        throw std::out_of_range("moment index: node out of range");
    return i;
}

std::int64_t MomentIndex::pair(int i, int j) const {
    if (i == j)
        throw std::invalid_argument("moment index: diagonal pair (i, i) is not tracked");
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
        throw std::out_of_range("moment index: node out of range");
    const std::int64_t a = std::min(i, j);
    const std::int64_t b = std::max(i, j);
    return n_ + a * n_ - a * (a + 1) / 2 + (b - a - 1);
}

MomentMatrix::MomentMatrix(std::int64_t dim, std::vector<std::int64_t> row_ptr,
                           std::vector<std::int32_t> col, std::vector<double> val)
    : dim_(dim), row_ptr_(std::move(row_ptr)), col_(std::move(col)), val_(std::move(val)) {
    if (row_ptr_.size() != static_cast<std::size_t>(dim_) + 1 || col_.size() != val_.size())
        throw std::invalid_argument("moment matrix: inconsistent CSR arrays");
}

bool MomentMatrix::is_metzler() const {
    for (std::int64_t r = 0; r < dim_; ++r)
        for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            if (col_[k] != r && val_[k] < 0.0)
                return false;
    return true;
}

double MomentMatrix::max_abs_diagonal() const {
    double m = 0.0;
    for (std::int64_t r = 0; r < dim_; ++r)
        m = std::max(m, std::abs(coeff(r, r)));
    return m;
}

double MomentMatrix::coeff(std::int64_t row, std::int64_t c) const {
    if (row < 0 || row >= dim_ || c < 0 || c >= dim_)
        throw std::out_of_range("moment matrix: index out of range");
    const auto begin = col_.begin() + row_ptr_[row];
    const auto end = col_.begin() + row_ptr_[row + 1];
    const auto it = std::lower_bound(begin, end, static_cast<std::int32_t>(c));
    if (it != end && *it == c)
        return val_[static_cast<std::size_t>(it - col_.begin())];
    return 0.0;
}

void MomentMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(static_cast<std::size_t>(dim_), 0.0);
    for (std::int64_t r = 0; r < dim_; ++r) {
        double acc = 0.0;
        for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            acc += val_[k] * x[static_cast<std::size_t>(col_[k])];
        y[static_cast<std::size_t>(r)] = acc;
    }
}

namespace {

/// Row-at-a-time accumulator over a dense scratch vector. Columns touched
/// by the current row are tracked so harvesting costs O(row nnz log) and
/// the scratch resets in O(row nnz).
class RowAssembler {
public:
    explicit RowAssembler(std::int64_t dim)
        : scratch_(static_cast<std::size_t>(dim), 0.0), used_(static_cast<std::size_t>(dim), 0) {
        row_ptr_.push_back(0);
    }

    void add(std::int64_t col, double v) {
        auto c = static_cast<std::size_t>(col);
        if (!used_[c]) {
            used_[c] = 1;
            touched_.push_back(static_cast<std::int32_t>(col));
        }
        scratch_[c] += v;
    }

    void finish_row() {
        std::sort(touched_.begin(), touched_.end());
        for (std::int32_t c : touched_) {
            const double v = scratch_[static_cast<std::size_t>(c)];
            if (v != 0.0) {
                col_.push_back(c);
                val_.push_back(v);
            }
            scratch_[static_cast<std::size_t>(c)] = 0.0;
            used_[static_cast<std::size_t>(c)] = 0;
        }
        touched_.clear();
        row_ptr_.push_back(static_cast<std::int64_t>(col_.size()));
    }

    MomentMatrix take(std::int64_t dim) {
        return MomentMatrix(dim, std::move(row_ptr_), std::move(col_), std::move(val_));
    }

private:
    std::vector<double> scratch_;
    std::vector<std::uint8_t> used_;
    std::vector<std::int32_t> touched_;
    std::vector<std::int64_t> row_ptr_;
    std::vector<std::int32_t> col_;
    std::vector<double> val_;
};

} // namespace

MomentMatrix build_moment_matrix(const Graph& g, const ModelParams& p) {
    const auto n = static_cast<int>(g.num_nodes());
    p.validate(g.num_nodes());
    const MomentIndex idx(g.num_nodes());
    const std::int64_t dim = idx.dim();
    RowAssembler rows(dim);

    // First-moment rows.
    for (int i = 0; i < n; ++i) {
        rows.add(idx.single(i), -p.delta[i]);
        for (int j : g.neighbors(i)) {
            rows.add(idx.single(j), p.beta[i]);
            for (int k : g.neighbors(j))
                if (k != i)
                    rows.add(idx.pair(j, k), p.gamma[j]);
        }
        rows.finish_row();
    }

    // Second-moment rows, lexicographic (i, l) with i < l. In a simple
    // graph none of the cross-pair or synergy slots below can coincide
    // with the row's own diagonal; add_offdiag enforces that.
    for (int i = 0; i < n; ++i) {
        for (int l = i + 1; l < n; ++l) {
            const std::int64_t diag = idx.pair(i, l);
            const bool adjacent = g.has_edge(i, l);
            auto add_offdiag = [&](std::int64_t c, double v) {
                if (c == diag)
                    throw std::logic_error("moment matrix: off-diagonal term hit the pair diagonal");
                rows.add(c, v);
            };
            rows.add(diag, -p.delta[i] - p.delta[l] -
                               (adjacent ? p.beta[i] + p.beta[l] : 0.0));
            if (adjacent) {
                rows.add(idx.single(i), p.beta[l]);
                rows.add(idx.single(l), p.beta[i]);
            }
            for (int m : g.neighbors(l)) {
                if (m != i)
                    add_offdiag(idx.pair(i, m), p.beta[l]);
                for (int nn : g.neighbors(m))
                    if (nn != l)
                        add_offdiag(idx.pair(nn, m), p.gamma[m]);
            }
            for (int j : g.neighbors(i)) {
                if (j != l)
                    add_offdiag(idx.pair(j, l), p.beta[i]);
                for (int k : g.neighbors(j))
                    if (k != i)
                        add_offdiag(idx.pair(k, j), p.gamma[j]);
            }
            rows.finish_row();
        }
    }

    return rows.take(dim);
}

void write_coordinate(std::ostream& out, const MomentMatrix& m) {
    out << m.dim() << ' ' << m.nnz() << '\n';
    char buf[64];
    for (std::int64_t r = 0; r < m.dim(); ++r) {
        for (std::int64_t k = m.row_ptr()[r]; k < m.row_ptr()[r + 1]; ++k) {
            std::snprintf(buf, sizeof(buf), "%lld %d %.17g", static_cast<long long>(r),
                          m.col()[k], m.val()[k]);
            out << buf << '\n';
        }
    }
}

} // namespace synsis
