#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "coulomb/errors.hpp"
#include "coulomb/runspec.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw coulomb::ParseError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coulomb gas sampling and reflected dynamics toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t threads = 0;
  bool threads_set = false;
  std::string out_dir;

  const std::vector<std::string> names = {
      "sample",  "evolve",   "drift-table", "hyperuniformity",
      "l2-bound", "converge", "a4-check"};
  for (const std::string& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config file")->required();
    sub->add_option("--seed", seed)->each([&](const std::string&) { seed_set = true; });
    sub->add_option("--threads", threads)
        ->each([&](const std::string&) { threads_set = true; });
    sub->add_option("--out", out_dir, "output directory");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    coulomb::RunSpec spec = coulomb::parse_config(read_file(config_path));
    if (seed_set) spec.seed = seed;
    if (threads_set) spec.threads = threads;
    if (!out_dir.empty()) spec.out_dir = out_dir;
    return coulomb::run_subcommand(spec, app.get_subcommands().front()->get_name());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
