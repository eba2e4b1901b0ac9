// SPDX-License-Identifier: MIT

#include "romdd/config.hpp"

#include "romdd/io.hpp"

#include <sstream>

namespace romdd
{

namespace
{

std::string trim(const std::string &s)
{
   const auto b = s.find_first_not_of(" \t\r\n");
   if (b == std::string::npos)
   {
      return "";
   }
   const auto e = s.find_last_not_of(" \t\r\n");
   return s.substr(b, e - b + 1);
}

} // namespace

ConfigMap ConfigMap::parse(const std::string &text)
{
   ConfigMap cfg;
   std::istringstream in(text);
   std::string line, section;
   int lineno = 0;
   while (std::getline(in, line))
   {
      lineno++;
      line = trim(line);
      if (line.empty() || line[0] == '#')
      {
         continue;
      }
      if (line.front() == '[')
      {
         if (line.back() != ']')
         {
            throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
         }
         section = trim(line.substr(1, line.size() - 2));
         continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
      {
         throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      const std::string full = section.empty() ? key : section + "." + key;
      cfg.values_[full] = value;
      cfg.ordered_.emplace_back(full, value);
   }
   return cfg;
}

std::string ConfigMap::get(const std::string &key) const
{
   const auto it = values_.find(key);
   if (it == values_.end())
   {
      throw ConfigError("missing config key '" + key + "'");
   }
   return it->second;
}

std::string ConfigMap::get_or(const std::string &key, const std::string &fallback) const
{
   const auto it = values_.find(key);
   return it == values_.end() ? fallback : it->second;
}

double ConfigMap::get_double(const std::string &key, double fallback) const
{
   const auto it = values_.find(key);
   return it == values_.end() || it->second.empty() ? fallback : std::stod(it->second);
}

int ConfigMap::get_int(const std::string &key, int fallback) const
{
   const auto it = values_.find(key);
   return it == values_.end() || it->second.empty() ? fallback : std::stoi(it->second);
}

uint64_t ConfigMap::get_u64(const std::string &key, uint64_t fallback) const
{
   const auto it = values_.find(key);
   return it == values_.end() || it->second.empty() ? fallback : std::stoull(it->second);
}

std::vector<int> ConfigMap::get_int_list(const std::string &key, std::vector<int> fallback) const
{
   const auto it = values_.find(key);
   if (it == values_.end() || it->second.empty())
   {
      return fallback;
   }
   std::vector<int> out;
   std::istringstream ss(it->second);
   int v;
   while (ss >> v)
   {
      out.push_back(v);
   }
   return out;
}

std::vector<std::pair<std::string, std::string>> ConfigMap::section(const std::string &name) const
{
   std::vector<std::pair<std::string, std::string>> out;
   const std::string prefix = name + ".";
   for (const auto &[key, value] : ordered_)
   {
      if (key.rfind(prefix, 0) == 0)
      {
         out.emplace_back(key.substr(prefix.size()), value);
      }
   }
   return out;
}

ExperimentConfig parse_experiment_config(const std::string &text)
{
   const ConfigMap cfg = ConfigMap::parse(text);
   ExperimentConfig e;
   const std::string phys = cfg.get_or("experiment.physics", "poisson");
   if (phys == "poisson") { e.physics = Physics::Poisson; }
   else if (phys == "stokes") { e.physics = Physics::Stokes; }
   else { throw ConfigError("unknown physics '" + phys + "'"); }

   e.seed = cfg.get_u64("experiment.seed", e.seed);
   e.out_dir = cfg.get_or("experiment.out", e.out_dir);
   e.components = cfg.section("components");
   if (e.components.empty())
   {
      e.components = (e.physics == Physics::Poisson)
                        ? decltype(e.components){{"empty", "quad 16"}}
                        : decltype(e.components){{"empty", "quad 8"},
                                                 {"circle", "circle 0.25 8 3"}};
   }
   e.samples = cfg.get_int("train.samples", e.physics == Physics::Poisson ? 300 : 100);
   e.rank = cfg.get_int("train.rank", e.physics == Physics::Poisson ? 15 : 36);
   e.energy = cfg.get_double("train.energy", -1.0);
   e.sizes = cfg.get_int_list("test.sizes", e.sizes);
   e.trials = cfg.get_int("test.trials", e.physics == Physics::Poisson ? 20 : 10);
   e.test_problem = cfg.get_or("test.problem",
                               e.physics == Physics::Poisson ? "sinusoidal" : "array");
   e.fom_cutoff = cfg.get_int("test.fom_cutoff", e.fom_cutoff);
   e.ranks = cfg.get_int_list("test.ranks", e.ranks);
   e.nu = cfg.get_double("experiment.nu", e.nu);
   e.gamma = cfg.get_double("experiment.gamma", -1.0);
   e.spiral_width_ratio = cfg.get_double("test.spiral_width_ratio", e.spiral_width_ratio);
   e.mms_levels = cfg.get_int("test.mms_levels", e.mms_levels);
   e.tol = cfg.get_double("experiment.tol", e.tol);
   return e;
}

ExperimentConfig load_experiment_config(const std::string &path)
{
   return parse_experiment_config(read_text_file(path));
}

Mesh2D build_component_mesh(const std::string &spec)
{
   std::istringstream ss(spec);
   std::string kind;
   ss >> kind;
   if (kind == "quad")
   {
      int n = 0;
      ss >> n;
      return gen_quad_grid(n);
   }
   if (kind == "tri")
   {
      int n = 0;
      ss >> n;
      return gen_tri_grid(n);
   }
   if (kind == "circle")
   {
      double r = 0;
      int nb = 0, nr = 0;
      ss >> r >> nb >> nr;
      return gen_circle_obstacle(r, nb, nr);
   }
   if (kind == "file")
   {
      std::string path;
      ss >> path;
      Mesh2D m = parse_mesh(read_text_file(path));
      validate_mesh(m);
      return m;
   }
   throw ConfigError("unknown component spec '" + spec + "'");
}

} // namespace romdd
