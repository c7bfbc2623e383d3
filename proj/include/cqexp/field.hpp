#pragma once

#include <cstdint>
#include <vector>

#include "cqexp/errors.hpp"
#include "cqexp/tolerances.hpp"

namespace cqexp {

// Exact linear algebra over the prime field Z_d. Integer arithmetic only.

bool is_prime(std::int64_t d);

using FieldVector = std::vector<std::int64_t>;

class FieldMatrix {
public:
    // Zero matrix; rows may be 0 (empty check matrices are legal).
    FieldMatrix(std::int64_t modulus, int rows, int cols);
    FieldMatrix(std::int64_t modulus, int rows, int cols, std::vector<std::int64_t> entries);

    std::int64_t modulus() const { return mod_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    std::int64_t at(int r, int c) const { return entries_[static_cast<size_t>(r) * cols_ + c]; }
    void set(int r, int c, std::int64_t v);

    static FieldMatrix identity(std::int64_t modulus, int n);

    FieldMatrix transpose() const;
    FieldMatrix multiply(const FieldMatrix& other) const;
    FieldVector apply(const FieldVector& v) const; // matrix * column vector
    FieldMatrix vstack(const FieldMatrix& below) const;

    bool operator==(const FieldMatrix& other) const = default;

private:
    std::int64_t mod_;
    int rows_;
    int cols_;
    std::vector<std::int64_t> entries_;
};

// Toeplitz matrix from a diagonal seed of length m+n-1: T[i][j] = seed[i-j+n-1].
// Rank deficiency is reported, not an error; the experiment layer resamples.
struct ToeplitzResult {
    FieldMatrix matrix;
    bool full_row_rank;
};
ToeplitzResult toeplitz(const FieldVector& seed, int m, int n, std::int64_t d);

struct RowReduceResult {
    FieldMatrix rref;
    int rank;
    std::vector<int> pivot_cols;
};
RowReduceResult row_reduce(const FieldMatrix& a);

// check/hat/combined with combined = [check; hat] invertible. The hat rows
// are standard basis vectors on the non-pivot columns of the check matrix,
// so the completion is deterministic.
struct LinearFunctionPair {
    FieldMatrix check;
    FieldMatrix hat;
    FieldMatrix combined;
};
LinearFunctionPair complete_invertible(const FieldMatrix& h);

FieldMatrix invert(const FieldMatrix& m);

// Rows of (M^-1)^T split into the first m (check part) and last n-m (hat part).
struct DualMap {
    FieldMatrix check;
    FieldMatrix hat;
};
DualMap dual_map(const FieldMatrix& m, int check_rows);

// G with H G^T = 0, rows spanning the null space of H, full row rank.
FieldMatrix generator_from_check(const FieldMatrix& h);

// All z in Z_d^n with H z = syndrome, exactly d^(n-m) of them.
std::vector<FieldVector> coset_enumerate(const FieldMatrix& h, const FieldVector& syndrome,
                                         const Budget& budget = default_budget());

// Big-endian digit encoding: component 0 of the vector is the most
// significant digit of the index. Shared convention with the state module.
std::int64_t encode_digits(const FieldVector& v, std::int64_t d);
FieldVector decode_digits(std::int64_t index, std::int64_t d, int n);

} // namespace cqexp
