// SPDX-License-Identifier: MIT

#pragma once

#include "romdd/rom.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace romdd
{

/// MAT1 dense format: `MAT1 <rows> <cols>` then row-major entries, 17
/// significant digits. Vectors are n x 1 matrices.
std::string write_mat1(const DenseMatrix &m);
std::string write_mat1(const Vector &v);
DenseMatrix parse_mat1(std::istream &in);

/// CSR1 sparse format: header `CSR1 <rows> <cols> <nnz>` then the row
/// pointer, column index and value arrays on one line each.
std::string write_csr1(const SparseMatrix &m);
SparseMatrix parse_csr1(std::istream &in);

/// POD1 basis file: header `POD1 <ref> <N> <R> <S> <seed>`, the singular
/// value CSV (`index,sigma` lines), then the MAT1 payload of Phi.
void save_basis(const std::filesystem::path &path, const PodBasis &basis);
PodBasis load_basis(const std::filesystem::path &path);

/// Block library directory: `library.txt` manifest, `mesh_<r>.mesh1`
/// component meshes, `pod_<r>.pod1` bases, `dom_<r>.mat`,
/// `ifc_<r>_<r'>_<H|V>.mat` (four blocks back to back),
/// `bnd_<r>_<side>.mat`, and for Stokes `w_<r>.mat`.
void save_library(const std::filesystem::path &dir, const ReducedBlockLibrary &lib,
                  const std::vector<const Mesh2D *> &meshes);

struct LoadedLibrary
{
   ReducedBlockLibrary library;
   std::vector<Mesh2D> meshes;
};

LoadedLibrary load_library(const std::filesystem::path &dir);

std::string read_text_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, const std::string &content);

/// %.17g, the round-trip-exact float format used in all text outputs.
std::string format_g17(double x);

} // namespace romdd
