// SPDX-License-Identifier: MIT

#include <doctest.h>

#include "romdd/linalg.hpp"
#include "romdd/rng.hpp"

#include <cmath>

using namespace romdd;

namespace
{

SparseMatrix from_dense(const DenseMatrix &d)
{
   std::vector<Triplet> trip;
   for (int i = 0; i < d.rows(); i++)
   {
      for (int j = 0; j < d.cols(); j++)
      {
         if (d(i, j) != 0.0)
         {
            trip.emplace_back(i, j, d(i, j));
         }
      }
   }
   SparseMatrix s(d.rows(), d.cols());
   s.setFromTriplets(trip.begin(), trip.end());
   s.makeCompressed();
   return s;
}

DenseMatrix random_spd(int n, uint64_t seed)
{
   Rng rng(seed);
   DenseMatrix B(n, n);
   for (int i = 0; i < n; i++)
   {
      for (int j = 0; j < n; j++)
      {
         B(i, j) = rng.uniform(-1.0, 1.0);
      }
   }
   return B * B.transpose() + static_cast<double>(n) * DenseMatrix::Identity(n, n);
}

// 1D Laplacian, the stand-in Poisson test matrix
SparseMatrix laplacian_1d(int n)
{
   std::vector<Triplet> trip;
   for (int i = 0; i < n; i++)
   {
      trip.emplace_back(i, i, 2.0);
      if (i > 0)
      {
         trip.emplace_back(i, i - 1, -1.0);
      }
      if (i + 1 < n)
      {
         trip.emplace_back(i, i + 1, -1.0);
      }
   }
   SparseMatrix s(n, n);
   s.setFromTriplets(trip.begin(), trip.end());
   s.makeCompressed();
   return s;
}

} // namespace

TEST_CASE("direct_solve identity")
{
   SparseMatrix I = from_dense(DenseMatrix::Identity(5, 5));
   Vector b(5);
   b << 1, 2, 3, 4, 5;
   CHECK((direct_solve(I, b) - b).norm() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("direct_solve 2x2 hand elimination")
{
   DenseMatrix A(2, 2);
   A << 2, 1, 1, 3;
   Vector b(2);
   b << 3, 4;
   const Vector x = direct_solve(from_dense(A), b);
   CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-12));
   CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("direct_solve random SPD 50x50 residual")
{
   const DenseMatrix A = random_spd(50, 11);
   Rng rng(12);
   Vector b(50);
   for (int i = 0; i < 50; i++)
   {
      b[i] = rng.uniform(-1.0, 1.0);
   }
   const SparseMatrix As = from_dense(A);
   const Vector x = direct_solve(As, b);
   CHECK((As * x - b).norm() / b.norm() <= 1e-10);
}

TEST_CASE("direct_solve singular matrix throws")
{
   // rank-2 3x3
   DenseMatrix A(3, 3);
   A << 1, 2, 3,
        2, 4, 6,
        1, 0, 1;
   CHECK_THROWS_AS((void)direct_solve(from_dense(A), Vector::Ones(3)), SingularMatrixError);
}

TEST_CASE("cg_solve diagonal exact termination")
{
   DenseMatrix A = DenseMatrix::Zero(3, 3);
   A(0, 0) = 1.0;
   A(1, 1) = 2.0;
   A(2, 2) = 3.0;
   Vector b(3);
   b << 1, 2, 3;
   const auto [x, report] = cg_solve(from_dense(A), b, 1e-12);
   CHECK((x - Vector::Ones(3)).norm() <= 1e-10);
   CHECK(report.iterations <= 3);
   CHECK(report.converged);
}

TEST_CASE("cg_solve zero rhs")
{
   const auto [x, report] = cg_solve(laplacian_1d(10), Vector::Zero(10));
   CHECK(x.norm() == 0.0);
   CHECK(report.iterations == 0);
   CHECK(report.converged);
}

TEST_CASE("cg_solve rejects non-symmetric input")
{
   DenseMatrix A(2, 2);
   A << 1, 2, 0, 1;
   CHECK_THROWS_AS((void)cg_solve(from_dense(A), Vector::Ones(2)), ContractError);
}

TEST_CASE("cg preconditioners never increase iteration count")
{
   for (int n : {16, 64, 256})
   {
      const SparseMatrix A = laplacian_1d(n);
      Rng rng(37 + n);
      Vector b(n);
      for (int i = 0; i < n; i++)
      {
         b[i] = rng.uniform(-1.0, 1.0);
      }
      const auto [x0, none] = cg_solve(A, b, 1e-10);
      const auto [x1, sgs] = cg_solve(A, b, 1e-10, -1, Preconditioner::SymmetricGaussSeidel);
      CHECK(none.converged);
      CHECK(sgs.converged);
      CHECK(sgs.iterations <= none.iterations);
      CHECK((x0 - x1).norm() <= 1e-7 * b.norm());
   }
}

TEST_CASE("minres indefinite diagonal")
{
   DenseMatrix A = DenseMatrix::Zero(2, 2);
   A(0, 0) = 1.0;
   A(1, 1) = -1.0;
   Vector b(2);
   b << 1, 1;
   const auto [x, report] = minres_solve(from_dense(A), b, 1e-12);
   CHECK(report.converged);
   CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-10));
   CHECK(x[1] == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("minres zero rhs")
{
   const auto [x, report] = minres_solve(laplacian_1d(8), Vector::Zero(8));
   CHECK(x.norm() == 0.0);
   CHECK(report.converged);
}

TEST_CASE("cg and minres agree on SPD systems")
{
   const SparseMatrix A = laplacian_1d(40);
   Rng rng(5);
   Vector b(40);
   for (int i = 0; i < 40; i++)
   {
      b[i] = rng.uniform(-1.0, 1.0);
   }
   const double tol = 1e-10;
   const auto [xc, rc] = cg_solve(A, b, tol);
   const auto [xm, rm] = minres_solve(A, b, tol);
   CHECK(rc.converged);
   CHECK(rm.converged);
   CHECK((xc - xm).norm() <= 10 * tol * xc.norm());
}

TEST_CASE("thin_svd diagonal")
{
   DenseMatrix Q = DenseMatrix::Zero(2, 2);
   Q(0, 0) = 3.0;
   Q(1, 1) = 2.0;
   const ThinSvd svd = thin_svd(Q);
   CHECK(svd.sigma[0] == doctest::Approx(3.0).epsilon(1e-13));
   CHECK(svd.sigma[1] == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("thin_svd rank-one repeated column")
{
   Vector c(2);
   c << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
   DenseMatrix Q(2, 5);
   for (int j = 0; j < 5; j++)
   {
      Q.col(j) = c;
   }
   const ThinSvd svd = thin_svd(Q);
   CHECK(svd.sigma[0] == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
   CHECK(svd.sigma[1] == doctest::Approx(0.0).epsilon(1e-12));
   // orthonormality holds through the completed null column
   const DenseMatrix gram = svd.U.transpose() * svd.U;
   CHECK((gram - DenseMatrix::Identity(2, 2)).norm() <= 1e-12);
}

TEST_CASE("thin_svd reconstruction and Eckart-Young")
{
   Rng rng(99);
   DenseMatrix Q(30, 10);
   for (int i = 0; i < 30; i++)
   {
      for (int j = 0; j < 10; j++)
      {
         Q(i, j) = rng.uniform(-1.0, 1.0);
      }
   }
   const ThinSvd svd = thin_svd(Q);
   const DenseMatrix R = svd.U * svd.sigma.asDiagonal() * svd.V.transpose();
   CHECK((Q - R).norm() <= 1e-10 * Q.norm());
   CHECK((svd.U.transpose() * svd.U - DenseMatrix::Identity(10, 10)).norm() <= 1e-12);
   for (int i = 1; i < svd.sigma.size(); i++)
   {
      CHECK(svd.sigma[i] <= svd.sigma[i - 1] + 1e-15);
      CHECK(svd.sigma[i] >= 0.0);
   }
   for (int rank = 1; rank <= 10; rank++)
   {
      const DenseMatrix approx = svd.U.leftCols(rank) *
                                 svd.sigma.head(rank).asDiagonal() *
                                 svd.V.leftCols(rank).transpose();
      double tail = 0.0;
      for (int i = rank; i < svd.sigma.size(); i++)
      {
         tail += svd.sigma[i] * svd.sigma[i];
      }
      CHECK((Q - approx).norm() == doctest::Approx(std::sqrt(tail)).epsilon(1e-10));
   }
}

TEST_CASE("border_with_constraint pins the weighted mean")
{
   SparseMatrix As = from_dense(2.0 * DenseMatrix::Identity(2, 2));
   Vector rhs(2);
   rhs << 2, 2;
   const Vector w = Vector::Ones(2);
   border_with_constraint(As, rhs, w);
   CHECK(As.rows() == 3);
   CHECK(rhs.size() == 3);
   const Vector x = direct_solve(As, rhs);
   CHECK(std::abs(w.dot(x.head(2))) <= 1e-12);
   CHECK(x[2] == doctest::Approx(2.0).epsilon(1e-12)); // multiplier absorbs the shift
}
