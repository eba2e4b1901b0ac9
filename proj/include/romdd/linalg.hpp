// SPDX-License-Identifier: MIT

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <stdexcept>
#include <vector>

namespace romdd
{

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
// Row-major so the compressed storage is plain CSR (row pointers /
// column indices / values), the layout the CSR1 format serializes.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;

class SingularMatrixError : public std::runtime_error
{
public:
   using std::runtime_error::runtime_error;
};

class ContractError : public std::runtime_error
{
public:
   using std::runtime_error::runtime_error;
};

struct SolveReport
{
   int iterations = 0;
   double relative_residual = 0.0;
   double wall_time_sec = 0.0;
   bool converged = false;
};

enum class Preconditioner
{
   None,
   Jacobi,
   SymmetricGaussSeidel
};

/// x solving Ax = b via sparse LU with partial pivoting (fill-reducing
/// COLAMD ordering). Throws SingularMatrixError on a singular pivot.
Vector direct_solve(const SparseMatrix &A, const Vector &b);

/// Conjugate gradient for SPD systems. A sampled symmetry check runs up
/// front and throws ContractError on failure.
std::pair<Vector, SolveReport> cg_solve(const SparseMatrix &A, const Vector &b,
                                        double tol = 1e-10, int max_iter = -1,
                                        Preconditioner precond = Preconditioner::None);

/// Applies z = P^{-1} r for a symmetric positive definite preconditioner.
using PrecondFn = std::function<void(const Vector &r, Vector &z)>;

/// MINRES for symmetric (possibly indefinite) systems. The optional
/// preconditioner must be SPD. The reported residual is the true
/// relative 2-norm residual, re-checked after the recurrence estimate
/// reaches the tolerance.
std::pair<Vector, SolveReport> minres_solve(const SparseMatrix &A, const Vector &b,
                                            double tol = 1e-10, int max_iter = -1,
                                            const PrecondFn &precond = nullptr);

/// Symmetric Gauss-Seidel application z = M^{-1} r with
/// M = (D+L) D^{-1} (D+U); usable as a standalone preconditioner.
void sgs_apply(const SparseMatrix &A, const Vector &r, Vector &z);

struct ThinSvd
{
   DenseMatrix U;  // orthonormal columns, N x K
   Vector sigma;   // descending, non-negative, K = min(N, S)
   DenseMatrix V;  // S x K
};

/// Thin SVD by the method of snapshots: eigendecomposition of Q^T Q when
/// the matrix is tall, of Q Q^T otherwise. Columns belonging to
/// numerically zero singular values are completed to an orthonormal set
/// so U^T U = I holds at full width.
ThinSvd thin_svd(const DenseMatrix &Q);

/// Borders [A, w; w^T, 0] and appends 0 to the rhs; used to pin the
/// pressure mean in all-Dirichlet Stokes systems.
void border_with_constraint(SparseMatrix &A, Vector &rhs, const Vector &w);

} // namespace romdd
