#include <filesystem>
#include <iostream>
#include <string>
#include <system_error>

#include "CLI11.hpp"
#include "eventua/eventua.hpp"

int main(int argc, char** argv) {
  CLI::App app{"event-indexed query engine"};
  app.require_subcommand(1);

  std::string world_path;
  std::string script_path;
  eventua::SessionOptions options;

  auto* run = app.add_subcommand("run", "run a script against a world");
  run->add_option("world", world_path, "world file")->required();
  run->add_option("script", script_path, "script file")->required();
  run->add_option("--limit", options.vardomain_limit, "default vardomain row limit");
  run->add_option("--out", options.out_dir, "directory for exported views");

  auto* repl = app.add_subcommand("repl", "interactive session against a world");
  repl->add_option("world", world_path, "world file")->required();
  repl->add_option("--limit", options.vardomain_limit, "default vardomain row limit");
  repl->add_option("--out", options.out_dir, "directory for exported views");

  auto* check = app.add_subcommand("check", "validate a world file");
  check->add_option("world", world_path, "world file")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed() || repl->parsed()) {
    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    if (ec) {
      std::cerr << "error: cannot create output directory " << options.out_dir << "\n";
      return 2;
    }
  }

  if (run->parsed())
    return eventua::run_script(world_path, script_path, std::cout, std::cerr, options);
  if (repl->parsed())
    return eventua::run_repl(world_path, std::cin, std::cout, std::cerr, options);
  return eventua::check_world(world_path, std::cout, std::cerr);
}
