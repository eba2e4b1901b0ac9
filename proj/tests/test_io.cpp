// SPDX-License-Identifier: MIT

#include <doctest.h>

#include "romdd/config.hpp"
#include "romdd/io.hpp"

#include <filesystem>
#include <sstream>

using namespace romdd;
namespace fs = std::filesystem;

TEST_CASE("MAT1 round trip is exact")
{
   DenseMatrix m(2, 3);
   m << 1.0, -2.5, 1.0 / 3.0, 1e-17, 3.14159265358979312, -0.0;
   const std::string text = write_mat1(m);
   std::istringstream in(text);
   const DenseMatrix p = parse_mat1(in);
   CHECK(p.rows() == 2);
   CHECK(p.cols() == 3);
   CHECK((p - m).lpNorm<Eigen::Infinity>() == 0.0);

   std::istringstream bad("MAT2 1 1\n0\n");
   CHECK_THROWS((void)parse_mat1(bad));
}

TEST_CASE("CSR1 round trip is exact")
{
   std::vector<Triplet> trip = {{0, 0, 1.5}, {0, 2, -2.0 / 7.0}, {2, 1, 42.0}};
   SparseMatrix s(3, 3);
   s.setFromTriplets(trip.begin(), trip.end());
   s.makeCompressed();
   const std::string text = write_csr1(s);
   std::istringstream in(text);
   const SparseMatrix p = parse_csr1(in);
   CHECK(p.nonZeros() == 3);
   CHECK((DenseMatrix(p) - DenseMatrix(s)).lpNorm<Eigen::Infinity>() == 0.0);
   CHECK(write_csr1(p) == text);
}

TEST_CASE("POD1 basis files round trip")
{
   PodBasis basis;
   basis.ref = "empty";
   basis.Phi = DenseMatrix::Identity(4, 2);
   basis.Phi(3, 1) = 0.25;
   basis.sigma = Vector(3);
   basis.sigma << 3.5, 1.0 / 3.0, 0.0;
   basis.sample_count = 11;
   basis.seed = 42;

   const fs::path path = fs::temp_directory_path() / "romdd_test_basis.pod1";
   save_basis(path, basis);
   const PodBasis loaded = load_basis(path);
   CHECK(loaded.ref == "empty");
   CHECK(loaded.sample_count == 11);
   CHECK(loaded.seed == 42);
   CHECK((loaded.Phi - basis.Phi).lpNorm<Eigen::Infinity>() == 0.0);
   CHECK((loaded.sigma - basis.sigma).lpNorm<Eigen::Infinity>() == 0.0);
   fs::remove(path);
}

TEST_CASE("library save/load round trip")
{
   const PoissonComponent comp = make_poisson_component("empty", gen_quad_grid(3));
   const std::vector<const PoissonComponent *> refs = {&comp};
   const SnapshotSet snap = collect_snapshots_poisson(comp, 8, 1);
   std::vector<PodBasis> bases = {pod_train(snap, 4)};
   const ReducedBlockLibrary lib = project_poisson_operators(refs, std::move(bases), 4.0);

   const fs::path dir = fs::temp_directory_path() / "romdd_test_library";
   fs::remove_all(dir);
   save_library(dir, lib, {comp.mesh.get()});
   const LoadedLibrary loaded = load_library(dir);
   CHECK(loaded.library.physics == Physics::Poisson);
   CHECK(loaded.library.ref_names == lib.ref_names);
   CHECK(loaded.library.gamma == lib.gamma);
   CHECK((loaded.library.domain_blocks[0] - lib.domain_blocks[0]).lpNorm<Eigen::Infinity>() == 0.0);
   CHECK((loaded.library.bases[0].Phi - lib.bases[0].Phi).lpNorm<Eigen::Infinity>() == 0.0);
   for (const auto &kv : lib.interface_blocks)
   {
      const auto &other = loaded.library.interface_blocks.at(kv.first);
      for (int b = 0; b < 4; b++)
      {
         CHECK((other[b] - kv.second[b]).lpNorm<Eigen::Infinity>() == 0.0);
      }
   }
   CHECK(write_mesh(loaded.meshes[0]) == write_mesh(*comp.mesh));

   // saving twice is byte-identical
   const std::string first = read_text_file(dir / "dom_empty.mat");
   save_library(dir, lib, {comp.mesh.get()});
   CHECK(read_text_file(dir / "dom_empty.mat") == first);
   fs::remove_all(dir);
}

TEST_CASE("experiment config parsing")
{
   const std::string text =
      "# comment\n"
      "[experiment]\n"
      "physics = stokes\n"
      "seed = 99\n"
      "nu = 1.25\n"
      "[components]\n"
      "empty = quad 8\n"
      "circle = circle 0.25 8 3\n"
      "[train]\n"
      "samples = 50\n"
      "rank = 12\n"
      "[test]\n"
      "sizes = 2 4\n"
      "trials = 5\n";
   const ExperimentConfig cfg = parse_experiment_config(text);
   CHECK(cfg.physics == Physics::Stokes);
   CHECK(cfg.seed == 99);
   CHECK(cfg.nu == 1.25);
   REQUIRE(cfg.components.size() == 2);
   CHECK(cfg.components[0].first == "empty");
   CHECK(cfg.components[1].second == "circle 0.25 8 3");
   CHECK(cfg.samples == 50);
   CHECK(cfg.rank == 12);
   CHECK(cfg.sizes == std::vector<int>{2, 4});
   CHECK(cfg.trials == 5);
   CHECK(cfg.effective_gamma() == doctest::Approx(1.25 * 9.0));

   CHECK_THROWS_AS((void)parse_experiment_config("[experiment]\nphysics = maxwell\n"), ConfigError);
   CHECK_THROWS_AS((void)parse_experiment_config("key value\n"), ConfigError);
}

TEST_CASE("component mesh specs")
{
   CHECK(build_component_mesh("quad 4").elements.size() == 16);
   CHECK(build_component_mesh("tri 4").elements.size() == 32);
   CHECK(build_component_mesh("circle 0.25 8 3").elements.size() == 192);
   CHECK_THROWS_AS((void)build_component_mesh("hexagon 3"), ConfigError);
}
