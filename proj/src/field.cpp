#include "cqexp/field.hpp"

#include <algorithm>
#include <sstream>

namespace cqexp {

bool is_prime(std::int64_t d) {
    if (d < 2) return false;
    for (std::int64_t f = 2; f * f <= d; ++f) {
        if (d % f == 0) return false;
    }
    return true;
}

namespace {

void require_prime(std::int64_t d) {
    if (!is_prime(d)) {
        std::ostringstream os;
        os << "field modulus " << d << " is not prime";
        throw ValidationError(os.str());
    }
}

std::int64_t mod_reduce(std::int64_t v, std::int64_t d) {
    v %= d;
    return v < 0 ? v + d : v;
}

// Multiplicative inverse mod prime d via extended Euclid.
std::int64_t mod_inverse(std::int64_t a, std::int64_t d) {
    a = mod_reduce(a, d);
    if (a == 0) throw ValidationError("field element 0 has no inverse");
    std::int64_t t = 0, new_t = 1, r = d, new_r = a;
    while (new_r != 0) {
        const std::int64_t q = r / new_r;
        const std::int64_t next_t = t - q * new_t;
        const std::int64_t next_r = r - q * new_r;
        t = new_t;
        new_t = next_t;
        r = new_r;
        new_r = next_r;
    }
    return mod_reduce(t, d);
}

} // namespace

FieldMatrix::FieldMatrix(std::int64_t modulus, int rows, int cols)
    : mod_(modulus), rows_(rows), cols_(cols),
      entries_(static_cast<size_t>(rows) * cols, 0) {
    require_prime(mod_);
    if (rows < 0 || cols < 1) throw ValidationError("FieldMatrix: invalid shape");
}

FieldMatrix::FieldMatrix(std::int64_t modulus, int rows, int cols,
                         std::vector<std::int64_t> entries)
    : FieldMatrix(modulus, rows, cols) {
    if (entries.size() != entries_.size()) {
        throw ValidationError("FieldMatrix: entry count does not match shape");
    }
    for (size_t i = 0; i < entries.size(); ++i) entries_[i] = mod_reduce(entries[i], mod_);
}

void FieldMatrix::set(int r, int c, std::int64_t v) {
    entries_[static_cast<size_t>(r) * cols_ + c] = mod_reduce(v, mod_);
}

FieldMatrix FieldMatrix::identity(std::int64_t modulus, int n) {
    FieldMatrix m(modulus, n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

FieldMatrix FieldMatrix::transpose() const {
    FieldMatrix out(mod_, cols_, rows_);
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) out.set(c, r, at(r, c));
    }
    return out;
}

FieldMatrix FieldMatrix::multiply(const FieldMatrix& other) const {
    if (cols_ != other.rows_ || mod_ != other.mod_) {
        throw ValidationError("FieldMatrix::multiply: shape or modulus mismatch");
    }
    FieldMatrix out(mod_, rows_, other.cols_);
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < other.cols_; ++c) {
            std::int64_t acc = 0;
            for (int k = 0; k < cols_; ++k) acc += at(r, k) * other.at(k, c);
            out.set(r, c, acc);
        }
    }
    return out;
}

FieldVector FieldMatrix::apply(const FieldVector& v) const {
    if (static_cast<int>(v.size()) != cols_) {
        throw ValidationError("FieldMatrix::apply: vector length mismatch");
    }
    FieldVector out(rows_, 0);
    for (int r = 0; r < rows_; ++r) {
        std::int64_t acc = 0;
        for (int c = 0; c < cols_; ++c) acc += at(r, c) * v[c];
        out[r] = mod_reduce(acc, mod_);
    }
    return out;
}

FieldMatrix FieldMatrix::vstack(const FieldMatrix& below) const {
    if (cols_ != below.cols_ || mod_ != below.mod_) {
        throw ValidationError("FieldMatrix::vstack: shape or modulus mismatch");
    }
    FieldMatrix out(mod_, rows_ + below.rows_, cols_);
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) out.set(r, c, at(r, c));
    }
    for (int r = 0; r < below.rows_; ++r) {
        for (int c = 0; c < cols_; ++c) out.set(rows_ + r, c, below.at(r, c));
    }
    return out;
}

ToeplitzResult toeplitz(const FieldVector& seed, int m, int n, std::int64_t d) {
    if (m < 0 || n < 1 || m > n) throw ValidationError("toeplitz: need 0 <= m <= n");
    if (static_cast<int>(seed.size()) != m + n - 1) {
        throw ValidationError("toeplitz: seed must have m+n-1 elements");
    }
    FieldMatrix t(d, m, n);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) t.set(i, j, seed[i - j + n - 1]);
    }
    const bool full = row_reduce(t).rank == m;
    return ToeplitzResult{std::move(t), full};
}

RowReduceResult row_reduce(const FieldMatrix& a) {
    FieldMatrix r = a;
    const std::int64_t d = r.modulus();
    std::vector<int> pivots;
    int pivot_row = 0;
    for (int col = 0; col < r.cols() && pivot_row < r.rows(); ++col) {
        int found = -1;
        for (int row = pivot_row; row < r.rows(); ++row) {
            if (r.at(row, col) != 0) {
                found = row;
                break;
            }
        }
        if (found < 0) continue;
        if (found != pivot_row) {
            for (int c = 0; c < r.cols(); ++c) {
                const std::int64_t tmp = r.at(pivot_row, c);
                r.set(pivot_row, c, r.at(found, c));
                r.set(found, c, tmp);
            }
        }
        const std::int64_t inv = mod_inverse(r.at(pivot_row, col), d);
        for (int c = 0; c < r.cols(); ++c) r.set(pivot_row, c, r.at(pivot_row, c) * inv);
        for (int row = 0; row < r.rows(); ++row) {
            if (row == pivot_row) continue;
            const std::int64_t factor = r.at(row, col);
            if (factor == 0) continue;
            for (int c = 0; c < r.cols(); ++c) {
                r.set(row, c, r.at(row, c) + (d - factor) * r.at(pivot_row, c));
            }
        }
        pivots.push_back(col);
        ++pivot_row;
    }
    return RowReduceResult{std::move(r), static_cast<int>(pivots.size()), std::move(pivots)};
}

LinearFunctionPair complete_invertible(const FieldMatrix& h) {
    const RowReduceResult rr = row_reduce(h);
    if (rr.rank != h.rows()) {
        throw ValidationError("complete_invertible: check matrix is not full row rank");
    }
    FieldMatrix hat(h.modulus(), h.cols() - h.rows(), h.cols());
    int r = 0;
    for (int c = 0; c < h.cols(); ++c) {
        if (std::find(rr.pivot_cols.begin(), rr.pivot_cols.end(), c) ==
            rr.pivot_cols.end()) {
            hat.set(r++, c, 1);
        }
    }
    FieldMatrix combined = h.vstack(hat);
    if (row_reduce(combined).rank != combined.rows()) {
        throw ValidationError("complete_invertible: completion failed"); // unreachable
    }
    return LinearFunctionPair{h, std::move(hat), std::move(combined)};
}

FieldMatrix invert(const FieldMatrix& m) {
    if (m.rows() != m.cols()) throw ValidationError("invert: matrix must be square");
    const int n = m.rows();
    // Gauss-Jordan on [M | I].
    FieldMatrix aug(m.modulus(), n, 2 * n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) aug.set(r, c, m.at(r, c));
        aug.set(r, n + r, 1);
    }
    const RowReduceResult rr = row_reduce(aug);
    for (int i = 0; i < n; ++i) {
        if (i >= static_cast<int>(rr.pivot_cols.size()) || rr.pivot_cols[i] != i) {
            throw ValidationError("invert: matrix is singular");
        }
    }
    FieldMatrix inv(m.modulus(), n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) inv.set(r, c, rr.rref.at(r, n + c));
    }
    return inv;
}

DualMap dual_map(const FieldMatrix& m, int check_rows) {
    if (check_rows < 0 || check_rows > m.rows()) {
        throw ValidationError("dual_map: check row count out of range");
    }
    const FieldMatrix g = invert(m).transpose();
    const int n = g.cols();
    FieldMatrix check(g.modulus(), check_rows, n);
    FieldMatrix hat(g.modulus(), g.rows() - check_rows, n);
    for (int r = 0; r < check_rows; ++r) {
        for (int c = 0; c < n; ++c) check.set(r, c, g.at(r, c));
    }
    for (int r = check_rows; r < g.rows(); ++r) {
        for (int c = 0; c < n; ++c) hat.set(r - check_rows, c, g.at(r, c));
    }
    return DualMap{std::move(check), std::move(hat)};
}

FieldMatrix generator_from_check(const FieldMatrix& h) {
    const RowReduceResult rr = row_reduce(h);
    if (rr.rank != h.rows()) {
        throw ValidationError("generator_from_check: check matrix is not full row rank");
    }
    const std::int64_t d = h.modulus();
    const int n = h.cols();
    std::vector<int> free_cols;
    for (int c = 0; c < n; ++c) {
        if (std::find(rr.pivot_cols.begin(), rr.pivot_cols.end(), c) ==
            rr.pivot_cols.end()) {
            free_cols.push_back(c);
        }
    }
    FieldMatrix g(d, static_cast<int>(free_cols.size()), n);
    for (size_t k = 0; k < free_cols.size(); ++k) {
        const int f = free_cols[k];
        g.set(static_cast<int>(k), f, 1);
        for (int i = 0; i < rr.rank; ++i) {
            g.set(static_cast<int>(k), rr.pivot_cols[i], d - rr.rref.at(i, f));
        }
    }
    return g;
}

std::vector<FieldVector> coset_enumerate(const FieldMatrix& h, const FieldVector& syndrome,
                                         const Budget& budget) {
    if (static_cast<int>(syndrome.size()) != h.rows()) {
        throw ValidationError("coset_enumerate: syndrome length mismatch");
    }
    const RowReduceResult rr = row_reduce(h);
    if (rr.rank != h.rows()) {
        throw ValidationError("coset_enumerate: check matrix is not full row rank");
    }
    const std::int64_t d = h.modulus();
    const int n = h.cols();
    const int free_count = n - h.rows();
    double size = 1.0;
    for (int i = 0; i < free_count; ++i) size *= static_cast<double>(d);
    if (size > static_cast<double>(budget.max_enumeration)) {
        throw ResourceError("coset_enumerate: coset size exceeds enumeration budget");
    }

    // Particular solution from the reduced system: free coordinates zero.
    const FieldVector reduced_syndrome = [&] {
        // Row reduce [H | s] with the same operations: redo on augmented matrix.
        FieldMatrix aug(d, h.rows(), n + 1);
        for (int r = 0; r < h.rows(); ++r) {
            for (int c = 0; c < n; ++c) aug.set(r, c, h.at(r, c));
            aug.set(r, n, syndrome[r]);
        }
        const RowReduceResult ar = row_reduce(aug);
        FieldVector rs(h.rows(), 0);
        for (int r = 0; r < h.rows(); ++r) rs[r] = ar.rref.at(r, n);
        return rs;
    }();
    FieldVector particular(n, 0);
    for (int i = 0; i < rr.rank; ++i) particular[rr.pivot_cols[i]] = reduced_syndrome[i];

    const FieldMatrix g = generator_from_check(h);
    std::vector<FieldVector> out;
    out.reserve(static_cast<size_t>(size));
    const std::int64_t count = static_cast<std::int64_t>(size);
    for (std::int64_t idx = 0; idx < count; ++idx) {
        const FieldVector coeff = decode_digits(idx, d, free_count);
        FieldVector z = particular;
        for (int k = 0; k < free_count; ++k) {
            if (coeff[k] == 0) continue;
            for (int c = 0; c < n; ++c) z[c] = (z[c] + coeff[k] * g.at(k, c)) % d;
        }
        out.push_back(std::move(z));
    }
    return out;
}

std::int64_t encode_digits(const FieldVector& v, std::int64_t d) {
    std::int64_t idx = 0;
    for (std::int64_t digit : v) idx = idx * d + mod_reduce(digit, d);
    return idx;
}

FieldVector decode_digits(std::int64_t index, std::int64_t d, int n) {
    FieldVector v(n, 0);
    for (int i = n - 1; i >= 0; --i) {
        v[i] = index % d;
        index /= d;
    }
    return v;
}

} // namespace cqexp
