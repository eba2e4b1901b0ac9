// SPDX-License-Identifier: MIT

#pragma once

#include "romdd/dgdd.hpp"

#include <map>
#include <string>
#include <vector>

namespace romdd
{

class ConfigError : public std::runtime_error
{
public:
   using std::runtime_error::runtime_error;
};

/// key=value text with [section] headers; keys are stored as
/// "section.key". Lines starting with '#' are comments.
class ConfigMap
{
public:
   static ConfigMap parse(const std::string &text);

   bool has(const std::string &key) const { return values_.count(key) > 0; }
   std::string get(const std::string &key) const;
   std::string get_or(const std::string &key, const std::string &fallback) const;
   double get_double(const std::string &key, double fallback) const;
   int get_int(const std::string &key, int fallback) const;
   uint64_t get_u64(const std::string &key, uint64_t fallback) const;
   std::vector<int> get_int_list(const std::string &key, std::vector<int> fallback) const;

   /// keys of one section in file order, with the section prefix removed
   std::vector<std::pair<std::string, std::string>> section(const std::string &name) const;

private:
   std::map<std::string, std::string> values_;
   std::vector<std::pair<std::string, std::string>> ordered_;
};

/// Everything a study needs; see README for the key reference.
struct ExperimentConfig
{
   Physics physics = Physics::Poisson;
   uint64_t seed = 42;
   std::string out_dir = "out";
   // (name, generator spec): "quad N" | "tri N" | "circle r nb nring" | "file <path>"
   std::vector<std::pair<std::string, std::string>> components;
   int samples = 300;
   int rank = 15;
   double energy = -1.0; // if in (0,1], overrides rank
   std::vector<int> sizes = {4, 8};
   int trials = 20;
   std::string test_problem = "sinusoidal"; // sinusoidal | array | spiral | channel
   int fom_cutoff = 64;
   std::vector<int> ranks = {8, 12, 16, 24, 30};
   double nu = 1.1;
   double gamma = -1.0; // physics default when <= 0
   double spiral_width_ratio = 1.0 / 16.0; // w = ratio * L
   int mms_levels = 3;
   double tol = 1e-10;

   double effective_gamma() const
   {
      if (gamma > 0.0)
      {
         return gamma;
      }
      return physics == Physics::Poisson ? 4.0 : nu * 9.0;
   }
};

ExperimentConfig parse_experiment_config(const std::string &text);
ExperimentConfig load_experiment_config(const std::string &path);

/// Builds the mesh a component spec describes.
Mesh2D build_component_mesh(const std::string &spec);

} // namespace romdd
