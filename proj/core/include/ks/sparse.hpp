#pragma once

#include <span>
#include <string>
#include <vector>

namespace ks::fem {

struct Triplet {
    int row = 0, col = 0;
    double value = 0.0;
};

// compressed row storage; duplicate triplets are summed on construction
struct SparseOperator {
    int rows = 0, cols = 0;
    std::vector<int> row_ptr;
    std::vector<int> col_idx;
    std::vector<double> vals;

    static SparseOperator from_triplets(int rows, int cols, std::vector<Triplet> triplets);

    void matvec(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply(std::span<const double> x) const;
    std::vector<double> diagonal() const;
    std::vector<double> row_sums() const;

    double abs_row_sum(int row) const; // sum of |a_ij| over the row
    int nnz() const { return static_cast<int>(vals.size()); }
};

// diagonal matrix as CSR, for uniform treatment of lumped mass operators
SparseOperator diagonal_operator(std::span<const double> diag);

struct SolveReport {
    std::vector<double> x;
    int iterations = 0;
    bool converged = false;
    double residual = 0.0; // relative to |b|
    std::vector<double> residual_history;
};

// BiCGStab with Jacobi preconditioning; relative residual tolerance.
// Throws SolverError (carrying the tail of the residual history) when the
// iteration breaks down or fails to converge.
SolveReport bicgstab(const SparseOperator& a, std::span<const double> b,
                     std::vector<double> x0, double rel_tol, int max_iters);

} // namespace ks::fem
