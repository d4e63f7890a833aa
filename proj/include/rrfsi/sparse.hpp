#pragma once

#include "rrfsi/errors.hpp"
#include "rrfsi/fem.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <fstream>
#include <memory>
#include <string>
#include <vector>

namespace rrfsi {

inline constexpr double kSolveTol = 1e-9;

namespace detail {

/// Replace constrained rows/columns by the identity and move the column
/// contributions to the right-hand side (symmetric elimination).
inline SpMat constrain_matrix(const SpMat& A, const std::vector<char>& is_dirichlet) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(size_t(A.nonZeros()) + size_t(A.rows()));
    for (int k = 0; k < A.outerSize(); ++k) {
        for (SpMat::InnerIterator it(A, k); it; ++it) {
            if (is_dirichlet[size_t(it.row())] || is_dirichlet[size_t(it.col())])
                continue;
            trip.emplace_back(it.row(), it.col(), it.value());
        }
    }
    for (int i = 0; i < A.rows(); ++i)
        if (is_dirichlet[size_t(i)])
            trip.emplace_back(i, i, 1.0);
    SpMat C(A.rows(), A.cols());
    C.setFromTriplets(trip.begin(), trip.end());
    return C;
}

} // namespace detail

/// Constrained right-hand side matching `constrain_matrix`: subtract the
/// column contributions of the prescribed values, then pin them.
inline Eigen::VectorXd constrain_rhs(const SpMat& A, const std::vector<int>& dirichlet_dofs,
                                     const Eigen::VectorXd& values, const Eigen::VectorXd& rhs) {
    Eigen::VectorXd lifted = Eigen::VectorXd::Zero(A.cols());
    for (int dof : dirichlet_dofs) {
        if (dof < 0 || dof >= int(A.cols()))
            throw ParameterError("constrain_rhs: dof " + std::to_string(dof) + " out of range");
        lifted[dof] = values[dof];
    }
    Eigen::VectorXd out = rhs - A * lifted;
    for (int dof : dirichlet_dofs)
        out[dof] = values[dof];
    return out;
}

/// Sparse operator with a Dirichlet dof set and a reusable LU factorization.
/// The matrices of this scheme are constant in time, so each system is
/// factorized once per run and solved many times.
class SparseSystem {
public:
    explicit SparseSystem(SpMat A) : A_(std::move(A)) {
        if (A_.rows() != A_.cols())
            throw ParameterError("SparseSystem: matrix must be square");
        A_.makeCompressed();
    }

    void set_dirichlet(std::vector<int> dofs) {
        for (int dof : dofs)
            if (dof < 0 || dof >= int(A_.rows()))
                throw ParameterError("SparseSystem: dirichlet dof " + std::to_string(dof) +
                                     " out of range");
        dirichlet_ = std::move(dofs);
        lu_.reset();  // factorization no longer matches
    }

    void set_matrix(SpMat A) {
        if (A.rows() != A_.rows())
            throw ParameterError("SparseSystem: matrix size change");
        A_ = std::move(A);
        A_.makeCompressed();
        lu_.reset();
    }

    void factorize() {
        std::vector<char> mask(size_t(A_.rows()), 0);
        for (int dof : dirichlet_)
            mask[size_t(dof)] = 1;
        constrained_ = detail::constrain_matrix(A_, mask);
        // A structurally empty column is a guaranteed zero pivot; report it by dof.
        for (int j = 0; j < constrained_.outerSize(); ++j)
            if (!SpMat::InnerIterator(constrained_, j))
                throw SolverError("SparseSystem: singular matrix, zero pivot at dof " +
                                  std::to_string(j));
        lu_ = std::make_unique<Eigen::SparseLU<SpMat>>();
        lu_->compute(constrained_);
        if (lu_->info() != Eigen::Success) {
            lu_.reset();
            throw SolverError("SparseSystem: factorization failed (singular matrix): " +
                              lu_message());
        }
    }

    bool factorized() const { return lu_ != nullptr; }

    /// Solve with prescribed Dirichlet values (full-length vector; only the
    /// constrained entries are read). One iterative-refinement pass keeps the
    /// scaled residual within kSolveTol.
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs, const Eigen::VectorXd& values) const {
        require_factorized();
        const Eigen::VectorXd b = constrain_rhs(A_, dirichlet_, values, rhs);
        return solve_constrained(b);
    }

    /// Homogeneous-constraint solve.
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
        require_factorized();
        Eigen::VectorXd b = rhs;
        for (int dof : dirichlet_)
            b[dof] = 0.0;
        return solve_constrained(b);
    }

    double residual(const Eigen::VectorXd& x, const Eigen::VectorXd& constrained_rhs) const {
        const double bnorm = std::max(1.0, constrained_rhs.lpNorm<Eigen::Infinity>());
        return (constrained_ * x - constrained_rhs).lpNorm<Eigen::Infinity>() / bnorm;
    }

    const SpMat& matrix() const { return A_; }
    const SpMat& constrained_matrix() const {
        require_factorized();
        return constrained_;
    }
    const std::vector<int>& dirichlet_dofs() const { return dirichlet_; }

    Eigen::VectorXd constrained_rhs(const Eigen::VectorXd& rhs,
                                    const Eigen::VectorXd& values) const {
        return constrain_rhs(A_, dirichlet_, values, rhs);
    }

private:
    void require_factorized() const {
        if (!lu_)
            throw SolverError("SparseSystem: factorize() has not been called");
    }

    Eigen::VectorXd solve_constrained(const Eigen::VectorXd& b) const {
        Eigen::VectorXd x = lu_->solve(b);
        if (lu_->info() != Eigen::Success)
            throw SolverError("SparseSystem: solve failed: " + lu_message());
        if (residual(x, b) > kSolveTol) {
            const Eigen::VectorXd correction = lu_->solve(b - constrained_ * x);
            x += correction;
            if (residual(x, b) > kSolveTol)
                throw SolverError("SparseSystem: residual above tolerance after refinement");
        }
        return x;
    }

    std::string lu_message() const { return lu_ ? lu_->lastErrorMessage() : "no factorization"; }

    SpMat A_;
    SpMat constrained_;
    std::vector<int> dirichlet_;
    std::unique_ptr<Eigen::SparseLU<SpMat>> lu_;
};

/// One-shot convenience: constrain, factorize if needed, solve.
inline Eigen::VectorXd factor_and_solve(SparseSystem& system, const Eigen::VectorXd& rhs) {
    if (!system.factorized())
        system.factorize();
    return system.solve(rhs);
}

/// Matrix Market coordinate dump (debugging aid).
inline void write_matrix_market(const std::string& path, const SpMat& A) {
    std::ofstream out(path);
    if (!out)
        throw IoError("write_matrix_market: cannot open " + path);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << A.rows() << " " << A.cols() << " " << A.nonZeros() << "\n";
    char buf[64];
    for (int k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it) {
            std::snprintf(buf, sizeof buf, "%d %d %.17g\n", int(it.row()) + 1,
                          int(it.col()) + 1, it.value());
            out << buf;
        }
}

} // namespace rrfsi
