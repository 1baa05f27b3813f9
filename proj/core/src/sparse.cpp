#include "ks/sparse.hpp"

#include "ks/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ks::fem {

SparseOperator SparseOperator::from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
    for (const auto& t : triplets)
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw ValidationError("sparse: triplet index out of range");

    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseOperator m;
    m.rows = rows;
    m.cols = cols;
    m.row_ptr.assign(rows + 1, 0);
    for (std::size_t k = 0; k < triplets.size();) {
        std::size_t j = k;
        double sum = 0.0;
        while (j < triplets.size() && triplets[j].row == triplets[k].row &&
               triplets[j].col == triplets[k].col)
            sum += triplets[j++].value;
        m.col_idx.push_back(triplets[k].col);
        m.vals.push_back(sum);
        ++m.row_ptr[triplets[k].row + 1];
        k = j;
    }
    for (int r = 0; r < rows; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
    return m;
}

void SparseOperator::matvec(std::span<const double> x, std::span<double> y) const {
    for (int r = 0; r < rows; ++r) {
        double acc = 0.0;
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += vals[k] * x[col_idx[k]];
        y[r] = acc;
    }
}

std::vector<double> SparseOperator::multiply(std::span<const double> x) const {
    std::vector<double> y(rows);
    matvec(x, y);
    return y;
}

std::vector<double> SparseOperator::diagonal() const {
    std::vector<double> d(rows, 0.0);
    for (int r = 0; r < rows; ++r)
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
            if (col_idx[k] == r) d[r] = vals[k];
    return d;
}

std::vector<double> SparseOperator::row_sums() const {
    std::vector<double> s(rows, 0.0);
    for (int r = 0; r < rows; ++r)
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s[r] += vals[k];
    return s;
}

double SparseOperator::abs_row_sum(int row) const {
    double s = 0.0;
    for (int k = row_ptr[row]; k < row_ptr[row + 1]; ++k) s += std::abs(vals[k]);
    return s;
}

SparseOperator diagonal_operator(std::span<const double> diag) {
    const int n = static_cast<int>(diag.size());
    SparseOperator m;
    m.rows = m.cols = n;
    m.row_ptr.resize(n + 1);
    m.col_idx.resize(n);
    m.vals.assign(diag.begin(), diag.end());
    for (int i = 0; i <= n; ++i) m.row_ptr[i] = i;
    for (int i = 0; i < n; ++i) m.col_idx[i] = i;
    return m;
}

namespace {

double dot_v(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double nrm2(std::span<const double> v) { return std::sqrt(dot_v(v, v)); }

[[noreturn]] void solve_failure(const char* reason, const std::vector<double>& history) {
    std::ostringstream os;
    os << "linear solve failed (" << reason << "); relative residual history:";
    const std::size_t tail = history.size() > 12 ? history.size() - 12 : 0;
    for (std::size_t i = tail; i < history.size(); ++i) os << " " << history[i];
    throw SolverError(os.str());
}

} // namespace

SolveReport bicgstab(const SparseOperator& a, std::span<const double> b, std::vector<double> x0,
                     double rel_tol, int max_iters) {
    const int n = a.rows;
    if (a.cols != n || static_cast<int>(b.size()) != n ||
        static_cast<int>(x0.size()) != n)
        throw ValidationError("bicgstab: dimension mismatch");

    std::vector<double> precond = a.diagonal();
    for (double& d : precond) d = d != 0.0 ? 1.0 / d : 1.0;

    SolveReport rep;
    rep.x = std::move(x0);
    const double bnorm = nrm2(b);
    if (bnorm == 0.0) {
        rep.x.assign(n, 0.0);
        rep.converged = true;
        return rep;
    }

    std::vector<double> r(n), r0(n), p(n, 0.0), v(n, 0.0), s(n), t(n), phat(n), shat(n);
    a.matvec(rep.x, r);
    for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
    r0 = r;

    double rho_prev = 1.0, alpha = 1.0, omega = 1.0;
    double resid = nrm2(r) / bnorm;
    rep.residual_history.push_back(resid);

    for (int it = 0; it < max_iters; ++it) {
        if (resid <= rel_tol) {
            rep.converged = true;
            rep.iterations = it;
            rep.residual = resid;
            return rep;
        }
        const double rho = dot_v(r0, r);
        if (rho == 0.0) solve_failure("rho breakdown", rep.residual_history);
        if (it == 0) {
            p = r;
        } else {
            const double beta = (rho / rho_prev) * (alpha / omega);
            for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        for (int i = 0; i < n; ++i) phat[i] = precond[i] * p[i];
        a.matvec(phat, v);
        const double r0v = dot_v(r0, v);
        if (r0v == 0.0) solve_failure("orthogonality breakdown", rep.residual_history);
        alpha = rho / r0v;
        for (int i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        if (nrm2(s) / bnorm <= rel_tol) {
            for (int i = 0; i < n; ++i) rep.x[i] += alpha * phat[i];
            rep.converged = true;
            rep.iterations = it + 1;
            rep.residual = nrm2(s) / bnorm;
            rep.residual_history.push_back(rep.residual);
            return rep;
        }
        for (int i = 0; i < n; ++i) shat[i] = precond[i] * s[i];
        a.matvec(shat, t);
        const double tt = dot_v(t, t);
        if (tt == 0.0) solve_failure("t breakdown", rep.residual_history);
        omega = dot_v(t, s) / tt;
        if (omega == 0.0) solve_failure("omega breakdown", rep.residual_history);
        for (int i = 0; i < n; ++i) {
            rep.x[i] += alpha * phat[i] + omega * shat[i];
            r[i] = s[i] - omega * t[i];
        }
        rho_prev = rho;
        resid = nrm2(r) / bnorm;
        rep.residual_history.push_back(resid);
    }
    if (resid <= rel_tol) {
        rep.converged = true;
        rep.iterations = max_iters;
        rep.residual = resid;
        return rep;
    }
    solve_failure("max iterations", rep.residual_history);
}

} // namespace ks::fem
