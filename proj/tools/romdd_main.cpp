// SPDX-License-Identifier: MIT

#include "romdd/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace romdd;

namespace
{

ExperimentConfig make_config(const std::string &config_path, uint64_t seed_override,
                             bool seed_set, const std::string &out_override)
{
   ExperimentConfig cfg;
   if (!config_path.empty())
   {
      cfg = load_experiment_config(config_path);
   }
   if (seed_set)
   {
      cfg.seed = seed_override;
   }
   if (!out_override.empty())
   {
      cfg.out_dir = out_override;
   }
   return cfg;
}

void print_mesh_summary(const Mesh2D &mesh)
{
   std::cout << "vertices:       " << mesh.vertices.size() << "\n";
   std::cout << "elements:       " << mesh.elements.size() << "\n";
   std::cout << "boundary edges: " << mesh.boundary_edges.size() << "\n";
   std::cout << "area:           " << format_g17(mesh_area(mesh)) << "\n";
   for (Side s : {Side::Left, Side::Right, Side::Bottom, Side::Top, Side::Obstacle})
   {
      int count = 0;
      for (const auto &be : mesh.boundary_edges)
      {
         if (be.attr == s)
         {
            count++;
         }
      }
      std::cout << "  " << side_name(s) << ": " << count << " edges\n";
   }
}

} // namespace

int main(int argc, char **argv)
{
   CLI::App app{"Component reduced-order models with DG domain decomposition"};
   app.require_subcommand(1);

   std::string config_path, out_dir;
   uint64_t seed = 0;
   bool seed_set = false;
   app.add_option("--config", config_path, "experiment config file");
   app.add_option("--seed", seed, "rng seed override")->each([&](const std::string &)
                                                             { seed_set = true; });
   app.add_option("--out", out_dir, "output directory override");

   // mesh gen | mesh show
   auto *mesh_cmd = app.add_subcommand("mesh", "generate or inspect component meshes");
   auto *mesh_gen = mesh_cmd->add_subcommand("gen", "write a MESH1 file");
   std::string mesh_spec = "quad 8", mesh_out;
   mesh_gen->add_option("spec", mesh_spec,
                        "\"quad N\" | \"tri N\" | \"circle r nb nring\"");
   mesh_gen->add_option("--file", mesh_out, "output path (stdout when omitted)");
   auto *mesh_show = mesh_cmd->add_subcommand("show", "summarize a MESH1 file");
   std::string mesh_in;
   mesh_show->add_option("file", mesh_in, "MESH1 path")->required();

   auto *sample_cmd = app.add_subcommand("sample", "dump a deterministic parameter stream");
   std::string sample_physics = "poisson";
   int sample_count = 10;
   bool sample_test_range = false;
   sample_cmd->add_option("physics", sample_physics, "poisson | stokes")->required();
   sample_cmd->add_option("--count", sample_count, "number of samples");
   sample_cmd->add_flag("--test-range", sample_test_range, "use the widened test ranges");

   auto *train_cmd = app.add_subcommand("train", "collect snapshots, train POD, project blocks");
   auto *scaleup_cmd = app.add_subcommand("scaleup", "error/timing across layout sizes");
   auto *ranksweep_cmd = app.add_subcommand("ranksweep", "error/time against basis rank");
   auto *mms_cmd = app.add_subcommand("mms", "manufactured-solution convergence study");
   auto *extrapolate_cmd = app.add_subcommand("extrapolate", "spiral / channel out-of-training runs");

   CLI11_PARSE(app, argc, argv);

   try
   {
      if (mesh_gen->parsed())
      {
         const Mesh2D mesh = build_component_mesh(mesh_spec);
         if (mesh_out.empty())
         {
            std::cout << write_mesh(mesh);
         }
         else
         {
            write_text_file(mesh_out, write_mesh(mesh));
         }
         return 0;
      }
      if (mesh_show->parsed())
      {
         print_mesh_summary(parse_mesh(read_text_file(mesh_in)));
         return 0;
      }

      ExperimentConfig cfg = make_config(config_path, seed, seed_set, out_dir);

      if (sample_cmd->parsed())
      {
         const Physics physics = (sample_physics == "stokes") ? Physics::Stokes : Physics::Poisson;
         const SampleRange range = sample_test_range ? SampleRange::Test : SampleRange::Training;
         std::cout << sample_params_csv(physics, sample_count, cfg.seed, range);
         return 0;
      }
      if (train_cmd->parsed())
      {
         cmd_train(cfg);
         std::cout << "library written to " << cfg.out_dir << "/library\n";
         return 0;
      }
      if (scaleup_cmd->parsed())
      {
         const TrainedModel model = load_model(cfg);
         cmd_scaleup(model);
         std::cout << "metrics written to " << cfg.out_dir << "/metrics.csv\n";
         return 0;
      }
      if (ranksweep_cmd->parsed())
      {
         const TrainedModel model = load_model(cfg);
         cmd_rank_sweep(model);
         std::cout << "rows written to " << cfg.out_dir << "/rank_sweep.csv\n";
         return 0;
      }
      if (mms_cmd->parsed())
      {
         cfg.physics = Physics::Stokes;
         cmd_mms(cfg);
         std::cout << "rows written to " << cfg.out_dir << "/mms.csv\n";
         return 0;
      }
      if (extrapolate_cmd->parsed())
      {
         const TrainedModel model = load_model(cfg);
         cmd_extrapolate(model);
         std::cout << "rows written to " << cfg.out_dir << "/extrapolate.csv\n";
         return 0;
      }
   }
   catch (const std::exception &e)
   {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
   }
   return 0;
}
