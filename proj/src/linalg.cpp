// SPDX-License-Identifier: MIT

#include "romdd/linalg.hpp"

#include <Eigen/SparseLU>

#include <chrono>
#include <cmath>

namespace romdd
{

namespace
{

double seconds_since(std::chrono::steady_clock::time_point t0)
{
   return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Spot-checks A(i,j) == A(j,i) on a deterministic sample of stored entries.
void check_symmetry_sampled(const SparseMatrix &A)
{
   const int n = static_cast<int>(A.rows());
   if (n != A.cols())
   {
      throw ContractError("cg_solve: matrix is not square");
   }
   uint64_t h = 0x243f6a8885a308d3ull;
   int checked = 0;
   for (int attempt = 0; attempt < 64 && checked < 256; attempt++)
   {
      h = h * 6364136223846793005ull + 1442695040888963407ull;
      const int row = static_cast<int>(h % static_cast<uint64_t>(n));
      for (SparseMatrix::InnerIterator it(A, row); it && checked < 256; ++it, ++checked)
      {
         const double aij = it.value();
         const double aji = A.coeff(it.col(), row);
         const double scale = std::max({1.0, std::abs(aij), std::abs(aji)});
         if (std::abs(aij - aji) > 1e-10 * scale)
         {
            throw ContractError("cg_solve: matrix fails sampled symmetry check");
         }
      }
   }
}

void jacobi_apply(const Vector &diag_inv, const Vector &r, Vector &z)
{
   z = diag_inv.cwiseProduct(r);
}

} // namespace

Vector direct_solve(const SparseMatrix &A, const Vector &b)
{
   if (A.rows() != A.cols())
   {
      throw std::invalid_argument("direct_solve: matrix is not square");
   }
   if (A.rows() != b.size())
   {
      throw std::invalid_argument("direct_solve: rhs size mismatch");
   }
   Eigen::SparseMatrix<double> Acol = A;
   Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
   lu.analyzePattern(Acol);
   lu.factorize(Acol);
   if (lu.info() != Eigen::Success)
   {
      throw SingularMatrixError("direct_solve: singular or structurally deficient matrix");
   }
   return lu.solve(b);
}

void sgs_apply(const SparseMatrix &A, const Vector &r, Vector &z)
{
   const int n = static_cast<int>(A.rows());
   Vector y(n);
   // forward sweep: (D + L) y = r
   for (int i = 0; i < n; i++)
   {
      double s = r[i];
      double dii = 0.0;
      for (SparseMatrix::InnerIterator it(A, i); it; ++it)
      {
         if (it.col() < i)
         {
            s -= it.value() * y[it.col()];
         }
         else if (it.col() == i)
         {
            dii = it.value();
         }
      }
      y[i] = (dii != 0.0) ? s / dii : s;
   }
   // backward sweep: (D + U) z = D y
   z.resize(n);
   for (int i = n - 1; i >= 0; i--)
   {
      double dii = 0.0;
      double s = 0.0;
      for (SparseMatrix::InnerIterator it(A, i); it; ++it)
      {
         if (it.col() > i)
         {
            s += it.value() * z[it.col()];
         }
         else if (it.col() == i)
         {
            dii = it.value();
         }
      }
      z[i] = (dii != 0.0) ? y[i] - s / dii : y[i] - s;
   }
}

std::pair<Vector, SolveReport> cg_solve(const SparseMatrix &A, const Vector &b,
                                        double tol, int max_iter, Preconditioner precond)
{
   const auto t0 = std::chrono::steady_clock::now();
   check_symmetry_sampled(A);

   const int n = static_cast<int>(A.rows());
   if (max_iter < 0)
   {
      max_iter = 50 * n;
   }
   SolveReport report;
   Vector x = Vector::Zero(n);
   const double bnorm = b.norm();
   if (bnorm == 0.0)
   {
      report.converged = true;
      report.wall_time_sec = seconds_since(t0);
      return {x, report};
   }

   Vector diag_inv;
   if (precond == Preconditioner::Jacobi)
   {
      diag_inv = A.diagonal().cwiseInverse();
   }

   Vector r = b;
   Vector z(n);
   switch (precond)
   {
      case Preconditioner::None: z = r; break;
      case Preconditioner::Jacobi: jacobi_apply(diag_inv, r, z); break;
      case Preconditioner::SymmetricGaussSeidel: sgs_apply(A, r, z); break;
   }
   Vector p = z;
   double rz = r.dot(z);

   for (int k = 0; k < max_iter; k++)
   {
      const Vector Ap = A * p;
      const double pAp = p.dot(Ap);
      if (pAp <= 0.0)
      {
         break; // not positive definite along p; report non-convergence
      }
      const double alpha = rz / pAp;
      x += alpha * p;
      r -= alpha * Ap;
      report.iterations = k + 1;
      if (r.norm() <= tol * bnorm)
      {
         report.converged = true;
         break;
      }
      switch (precond)
      {
         case Preconditioner::None: z = r; break;
         case Preconditioner::Jacobi: jacobi_apply(diag_inv, r, z); break;
         case Preconditioner::SymmetricGaussSeidel: sgs_apply(A, r, z); break;
      }
      const double rz_new = r.dot(z);
      p = z + (rz_new / rz) * p;
      rz = rz_new;
   }

   report.relative_residual = (b - A * x).norm() / bnorm;
   report.converged = report.relative_residual <= tol;
   report.wall_time_sec = seconds_since(t0);
   return {x, report};
}

std::pair<Vector, SolveReport> minres_solve(const SparseMatrix &A, const Vector &b,
                                            double tol, int max_iter, const PrecondFn &precond)
{
   const auto t0 = std::chrono::steady_clock::now();
   const int n = static_cast<int>(A.rows());
   if (max_iter < 0)
   {
      max_iter = 50 * n;
   }
   SolveReport report;
   Vector x = Vector::Zero(n);
   const double bnorm = b.norm();
   if (bnorm == 0.0)
   {
      report.converged = true;
      report.wall_time_sec = seconds_since(t0);
      return {x, report};
   }

   auto apply_precond = [&](const Vector &r, Vector &z)
   {
      if (precond)
      {
         precond(r, z);
      }
      else
      {
         z = r;
      }
   };

   // Preconditioned MINRES, Paige & Saunders recurrences. The iteration
   // tracks the M^{-1}-norm residual estimate (phibar); the 2-norm
   // residual is verified before declaring convergence.
   Vector r1 = b;
   Vector z(n);
   apply_precond(r1, z);
   double beta1 = r1.dot(z);
   if (beta1 < 0.0)
   {
      throw ContractError("minres_solve: preconditioner is not positive definite");
   }
   beta1 = std::sqrt(beta1);
   if (beta1 == 0.0)
   {
      report.converged = true;
      report.wall_time_sec = seconds_since(t0);
      return {x, report};
   }

   double oldb = 0.0, beta = beta1;
   double dbar = 0.0, epsln = 0.0, phibar = beta1;
   double cs = -1.0, sn = 0.0;
   Vector r2 = r1;
   Vector w = Vector::Zero(n);
   Vector w2 = Vector::Zero(n);

   double target = tol;
   for (int itn = 1; itn <= max_iter; itn++)
   {
      const Vector v = z / beta;
      Vector y = A * v;
      if (itn >= 2)
      {
         y -= (beta / oldb) * r1;
      }
      const double alfa = v.dot(y);
      y -= (alfa / beta) * r2;
      r1 = r2;
      r2 = y;
      apply_precond(r2, z);
      oldb = beta;
      const double beta_sq = r2.dot(z);
      if (beta_sq < -1e-14 * bnorm * bnorm)
      {
         throw ContractError("minres_solve: preconditioner is not positive definite");
      }
      beta = std::sqrt(std::max(0.0, beta_sq));

      const double oldeps = epsln;
      const double delta = cs * dbar + sn * alfa;
      const double gbar = sn * dbar - cs * alfa;
      epsln = sn * beta;
      dbar = -cs * beta;

      double gamma = std::sqrt(gbar * gbar + beta * beta);
      gamma = std::max(gamma, 1e-300);
      cs = gbar / gamma;
      sn = beta / gamma;
      const double phi = cs * phibar;
      phibar = sn * phibar;

      const Vector w1 = w2;
      w2 = w;
      w = (v - oldeps * w1 - delta * w2) / gamma;
      x += phi * w;
      report.iterations = itn;

      if (phibar <= target * beta1 || beta == 0.0)
      {
         const double true_res = (b - A * x).norm() / bnorm;
         if (true_res <= tol || beta == 0.0)
         {
            report.converged = true;
            break;
         }
         target *= 0.25; // estimate and true norm differ; keep iterating
      }
   }

   report.relative_residual = (b - A * x).norm() / bnorm;
   report.converged = report.relative_residual <= tol;
   report.wall_time_sec = seconds_since(t0);
   return {x, report};
}

ThinSvd thin_svd(const DenseMatrix &Q)
{
   if (Q.cols() < 1)
   {
      throw std::invalid_argument("thin_svd: matrix must have at least one column");
   }
   const Eigen::Index N = Q.rows();
   const Eigen::Index S = Q.cols();
   const Eigen::Index K = std::min(N, S);
   ThinSvd out;
   out.sigma.resize(K);

   const bool gram_cols = (S <= N); // Q^T Q is the smaller Gram matrix
   const DenseMatrix G = gram_cols ? DenseMatrix(Q.transpose() * Q) : DenseMatrix(Q * Q.transpose());
   Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(G);
   // ascending eigenvalues -> reverse into descending sigma
   DenseMatrix W(G.rows(), K);
   for (Eigen::Index i = 0; i < K; i++)
   {
      const Eigen::Index j = G.rows() - 1 - i;
      out.sigma[i] = std::sqrt(std::max(0.0, eig.eigenvalues()[j]));
      W.col(i) = eig.eigenvectors().col(j);
   }

   const double cutoff = out.sigma[0] * 1e-13;
   if (gram_cols)
   {
      out.V = W;
      out.U.resize(N, K);
      for (Eigen::Index i = 0; i < K; i++)
      {
         if (out.sigma[i] > cutoff && out.sigma[i] > 0.0)
         {
            out.U.col(i) = Q * W.col(i) / out.sigma[i];
         }
         else
         {
            out.U.col(i).setZero();
         }
      }
   }
   else
   {
      out.U = W;
      out.V.resize(S, K);
      for (Eigen::Index i = 0; i < K; i++)
      {
         if (out.sigma[i] > cutoff && out.sigma[i] > 0.0)
         {
            out.V.col(i) = Q.transpose() * W.col(i) / out.sigma[i];
         }
         else
         {
            out.V.col(i).setZero();
         }
      }
   }

   // Complete zero-sigma columns of the orthonormal factor so U^T U = I
   // holds even for rank-deficient input. Sigma is descending, so the
   // deficient columns form a tail and every column before i is filled.
   DenseMatrix &B = gram_cols ? out.U : out.V;
   const Eigen::Index dim = B.rows();
   for (Eigen::Index i = 0; i < K; i++)
   {
      if (out.sigma[i] > cutoff && out.sigma[i] > 0.0)
      {
         continue;
      }
      for (Eigen::Index cand = 0; cand < dim; cand++)
      {
         Vector e = Vector::Zero(dim);
         e[cand] = 1.0;
         for (int pass = 0; pass < 2; pass++)
         {
            for (Eigen::Index j = 0; j < i; j++)
            {
               e -= B.col(j).dot(e) * B.col(j);
            }
         }
         const double nrm = e.norm();
         if (nrm > 0.5)
         {
            B.col(i) = e / nrm;
            break;
         }
      }
   }
   return out;
}

void border_with_constraint(SparseMatrix &A, Vector &rhs, const Vector &w)
{
   const int n = static_cast<int>(A.rows());
   if (w.size() != n)
   {
      throw std::invalid_argument("border_with_constraint: weight size mismatch");
   }
   SparseMatrix B(n + 1, n + 1);
   std::vector<Triplet> trip;
   trip.reserve(A.nonZeros() + 2 * n);
   for (int i = 0; i < n; i++)
   {
      for (SparseMatrix::InnerIterator it(A, i); it; ++it)
      {
         trip.emplace_back(i, static_cast<int>(it.col()), it.value());
      }
   }
   for (int i = 0; i < n; i++)
   {
      if (w[i] != 0.0)
      {
         trip.emplace_back(i, n, w[i]);
         trip.emplace_back(n, i, w[i]);
      }
   }
   B.setFromTriplets(trip.begin(), trip.end());
   B.makeCompressed();
   A.swap(B);
   Vector rhs2(n + 1);
   rhs2.head(n) = rhs;
   rhs2[n] = 0.0;
   rhs = rhs2;
}

} // namespace romdd
