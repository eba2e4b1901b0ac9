// SPDX-License-Identifier: MIT

#include "romdd/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace romdd
{

namespace fs = std::filesystem;

std::string format_g17(double x)
{
   char buf[40];
   std::snprintf(buf, sizeof(buf), "%.17g", x);
   return buf;
}

std::string write_mat1(const DenseMatrix &m)
{
   std::string out = "MAT1 " + std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
   for (Eigen::Index i = 0; i < m.rows(); i++)
   {
      for (Eigen::Index j = 0; j < m.cols(); j++)
      {
         out += format_g17(m(i, j));
         out += (j + 1 == m.cols()) ? '\n' : ' ';
      }
   }
   return out;
}

std::string write_mat1(const Vector &v)
{
   DenseMatrix m(v.size(), 1);
   m.col(0) = v;
   return write_mat1(m);
}

DenseMatrix parse_mat1(std::istream &in)
{
   std::string magic;
   Eigen::Index rows = -1, cols = -1;
   in >> magic >> rows >> cols;
   if (magic != "MAT1" || rows < 0 || cols < 0 || in.fail())
   {
      throw std::runtime_error("parse_mat1: malformed header");
   }
   DenseMatrix m(rows, cols);
   for (Eigen::Index i = 0; i < rows; i++)
   {
      for (Eigen::Index j = 0; j < cols; j++)
      {
         in >> m(i, j);
      }
   }
   if (in.fail())
   {
      throw std::runtime_error("parse_mat1: truncated entries");
   }
   return m;
}

std::string write_csr1(const SparseMatrix &mat)
{
   SparseMatrix m = mat;
   m.makeCompressed();
   std::string out = "CSR1 " + std::to_string(m.rows()) + " " + std::to_string(m.cols()) +
                     " " + std::to_string(m.nonZeros()) + "\n";
   for (Eigen::Index i = 0; i <= m.rows(); i++)
   {
      out += std::to_string(m.outerIndexPtr()[i]);
      out += (i == m.rows()) ? '\n' : ' ';
   }
   for (Eigen::Index k = 0; k < m.nonZeros(); k++)
   {
      out += std::to_string(m.innerIndexPtr()[k]);
      out += (k + 1 == m.nonZeros()) ? '\n' : ' ';
   }
   for (Eigen::Index k = 0; k < m.nonZeros(); k++)
   {
      out += format_g17(m.valuePtr()[k]);
      out += (k + 1 == m.nonZeros()) ? '\n' : ' ';
   }
   return out;
}

SparseMatrix parse_csr1(std::istream &in)
{
   std::string magic;
   Eigen::Index rows = -1, cols = -1, nnz = -1;
   in >> magic >> rows >> cols >> nnz;
   if (magic != "CSR1" || rows < 0 || cols < 0 || nnz < 0 || in.fail())
   {
      throw std::runtime_error("parse_csr1: malformed header");
   }
   std::vector<Eigen::Index> rowptr(rows + 1);
   std::vector<Eigen::Index> colidx(nnz);
   std::vector<double> values(nnz);
   for (auto &v : rowptr) { in >> v; }
   for (auto &v : colidx) { in >> v; }
   for (auto &v : values) { in >> v; }
   if (in.fail())
   {
      throw std::runtime_error("parse_csr1: truncated arrays");
   }
   std::vector<Triplet> trip;
   trip.reserve(nnz);
   for (Eigen::Index i = 0; i < rows; i++)
   {
      for (Eigen::Index k = rowptr[i]; k < rowptr[i + 1]; k++)
      {
         trip.emplace_back(static_cast<int>(i), static_cast<int>(colidx[k]), values[k]);
      }
   }
   SparseMatrix m(rows, cols);
   m.setFromTriplets(trip.begin(), trip.end());
   m.makeCompressed();
   return m;
}

void save_basis(const fs::path &path, const PodBasis &basis)
{
   std::string out = "POD1 " + basis.ref + " " + std::to_string(basis.Phi.rows()) + " " +
                     std::to_string(basis.Phi.cols()) + " " +
                     std::to_string(basis.sample_count) + " " +
                     std::to_string(basis.seed) + "\n";
   out += "sigmas " + std::to_string(basis.sigma.size()) + "\n";
   for (Eigen::Index i = 0; i < basis.sigma.size(); i++)
   {
      out += std::to_string(i) + "," + format_g17(basis.sigma[i]) + "\n";
   }
   out += write_mat1(basis.Phi);
   write_text_file(path, out);
}

PodBasis load_basis(const fs::path &path)
{
   std::ifstream in(path);
   if (!in)
   {
      throw std::runtime_error("load_basis: cannot open " + path.string());
   }
   std::string magic;
   Eigen::Index n = 0, r = 0;
   PodBasis basis;
   in >> magic >> basis.ref >> n >> r >> basis.sample_count >> basis.seed;
   if (magic != "POD1" || in.fail())
   {
      throw std::runtime_error("load_basis: malformed POD1 header in " + path.string());
   }
   std::string tag;
   Eigen::Index nsig = 0;
   in >> tag >> nsig;
   if (tag != "sigmas" || in.fail())
   {
      throw std::runtime_error("load_basis: malformed sigma block in " + path.string());
   }
   basis.sigma.resize(nsig);
   for (Eigen::Index i = 0; i < nsig; i++)
   {
      std::string line;
      in >> line; // "<index>,<value>"
      const auto comma = line.find(',');
      if (comma == std::string::npos)
      {
         throw std::runtime_error("load_basis: malformed sigma row in " + path.string());
      }
      basis.sigma[i] = std::stod(line.substr(comma + 1));
   }
   basis.Phi = parse_mat1(in);
   if (basis.Phi.rows() != n || basis.Phi.cols() != r)
   {
      throw std::runtime_error("load_basis: payload dimensions disagree with header");
   }
   return basis;
}

std::string read_text_file(const fs::path &path)
{
   std::ifstream in(path, std::ios::binary);
   if (!in)
   {
      throw std::runtime_error("cannot open " + path.string());
   }
   std::ostringstream ss;
   ss << in.rdbuf();
   return ss.str();
}

void write_text_file(const fs::path &path, const std::string &content)
{
   if (path.has_parent_path())
   {
      fs::create_directories(path.parent_path());
   }
   std::ofstream out(path, std::ios::binary);
   if (!out)
   {
      throw std::runtime_error("cannot write " + path.string());
   }
   out << content;
}

namespace
{

const char *side_letter_str(int s)
{
   static const char *letters[4] = {"L", "R", "B", "T"};
   return letters[s];
}

std::string axis_letter(IfaceAxis a)
{
   return a == IfaceAxis::Horizontal ? "H" : "V";
}

} // namespace

void save_library(const fs::path &dir, const ReducedBlockLibrary &lib,
                  const std::vector<const Mesh2D *> &meshes)
{
   fs::create_directories(dir);
   const int nref = static_cast<int>(lib.ref_names.size());
   std::string manifest;
   manifest += "physics = " + std::string(lib.physics == Physics::Poisson ? "poisson" : "stokes") + "\n";
   manifest += "gamma = " + format_g17(lib.gamma) + "\n";
   manifest += "nu = " + format_g17(lib.nu) + "\n";
   manifest += "refs =";
   for (const auto &name : lib.ref_names)
   {
      manifest += " " + name;
   }
   manifest += "\n";
   write_text_file(dir / "library.txt", manifest);

   for (int r = 0; r < nref; r++)
   {
      write_text_file(dir / ("mesh_" + lib.ref_names[r] + ".mesh1"), write_mesh(*meshes[r]));
      save_basis(dir / ("pod_" + lib.ref_names[r] + ".pod1"), lib.bases[r]);
      write_text_file(dir / ("dom_" + lib.ref_names[r] + ".mat"),
                      write_mat1(lib.domain_blocks[r]));
      for (int s = 0; s < 4; s++)
      {
         write_text_file(dir / ("bnd_" + lib.ref_names[r] + "_" + side_letter_str(s) + ".mat"),
                         write_mat1(lib.boundary_blocks[r][s]));
      }
      if (!lib.mean_weights.empty())
      {
         write_text_file(dir / ("w_" + lib.ref_names[r] + ".mat"),
                         write_mat1(lib.mean_weights[r]));
      }
   }
   for (const auto &kv : lib.interface_blocks)
   {
      const auto [r, rp, axis] = kv.first;
      std::string payload;
      for (int b = 0; b < 4; b++)
      {
         payload += write_mat1(kv.second[b]);
      }
      write_text_file(dir / ("ifc_" + lib.ref_names[r] + "_" + lib.ref_names[rp] + "_" +
                             axis_letter(axis) + ".mat"),
                      payload);
   }
}

LoadedLibrary load_library(const fs::path &dir)
{
   LoadedLibrary out;
   ReducedBlockLibrary &lib = out.library;

   std::istringstream manifest(read_text_file(dir / "library.txt"));
   std::string line;
   while (std::getline(manifest, line))
   {
      std::istringstream ls(line);
      std::string key, eq;
      ls >> key >> eq;
      if (key == "physics")
      {
         std::string v;
         ls >> v;
         lib.physics = (v == "stokes") ? Physics::Stokes : Physics::Poisson;
      }
      else if (key == "gamma")
      {
         ls >> lib.gamma;
      }
      else if (key == "nu")
      {
         ls >> lib.nu;
      }
      else if (key == "refs")
      {
         std::string name;
         while (ls >> name)
         {
            lib.ref_names.push_back(name);
         }
      }
   }
   if (lib.ref_names.empty())
   {
      throw std::runtime_error("load_library: no references in manifest");
   }

   const int nref = static_cast<int>(lib.ref_names.size());
   for (int r = 0; r < nref; r++)
   {
      out.meshes.push_back(parse_mesh(read_text_file(dir / ("mesh_" + lib.ref_names[r] + ".mesh1"))));
      lib.bases.push_back(load_basis(dir / ("pod_" + lib.ref_names[r] + ".pod1")));
      {
         std::istringstream in(read_text_file(dir / ("dom_" + lib.ref_names[r] + ".mat")));
         lib.domain_blocks.push_back(parse_mat1(in));
      }
      std::array<DenseMatrix, 4> bnd;
      for (int s = 0; s < 4; s++)
      {
         std::istringstream in(read_text_file(dir / ("bnd_" + lib.ref_names[r] + "_" +
                                                     side_letter_str(s) + ".mat")));
         bnd[s] = parse_mat1(in);
      }
      lib.boundary_blocks.push_back(std::move(bnd));
      const fs::path wpath = dir / ("w_" + lib.ref_names[r] + ".mat");
      if (fs::exists(wpath))
      {
         std::istringstream in(read_text_file(wpath));
         lib.mean_weights.push_back(parse_mat1(in).col(0));
      }
   }
   for (int r = 0; r < nref; r++)
   {
      for (int rp = 0; rp < nref; rp++)
      {
         for (IfaceAxis axis : {IfaceAxis::Horizontal, IfaceAxis::Vertical})
         {
            const fs::path p = dir / ("ifc_" + lib.ref_names[r] + "_" + lib.ref_names[rp] +
                                      "_" + axis_letter(axis) + ".mat");
            std::istringstream in(read_text_file(p));
            std::array<DenseMatrix, 4> blocks;
            for (int b = 0; b < 4; b++)
            {
               blocks[b] = parse_mat1(in);
            }
            lib.interface_blocks[{r, rp, axis}] = std::move(blocks);
         }
      }
   }
   return out;
}

} // namespace romdd
