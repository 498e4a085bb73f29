// ssgspec: command-line front end for the stretched gasket spectral workbench.
#include <CLI11.hpp>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "ssg/config.hpp"
#include "ssg/error.hpp"
#include "ssg/pipeline.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
};

void add_io(CLI::App* cmd, Options& o) {
  cmd->add_option("-c,--config", o.config, "JSON run description")->required()->check(CLI::ExistingFile);
  cmd->add_option("-o,--out", o.out, "output directory (default: the config's output field)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral workbench for stretched Sierpinski gaskets"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    std::optional<ssg::Analysis> analysis;
  };
  const Sub subs[] = {
      {"build", "export the graph approximation", std::nullopt},
      {"spectrum", "eigenvalues and multiplicities", ssg::Analysis::spectrum},
      {"weyl", "counting function, exponent fit and Weyl oscillation", ssg::Analysis::weyl},
      {"renewal", "renewal-equation diagnostics", ssg::Analysis::renewal},
      {"localize", "localized eigenfunctions and eigenvalue bounds", ssg::Analysis::localization},
      {"resistance", "effective resistance between outer corners", ssg::Analysis::resistance},
      {"sg-compare", "Weyl exponent check on the classical gasket", ssg::Analysis::sg_compare},
      {"run", "every analysis listed in the config", std::nullopt},
  };
  Options opts;
  for (const auto& s : subs) add_io(app.add_subcommand(s.name, s.help), opts);

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    ssg::RunConfig config = ssg::load_config(opts.config);
    const std::filesystem::path out = opts.out.empty() ? std::filesystem::path(config.output) : std::filesystem::path(opts.out);
    std::vector<std::string> files;
    if (name == "build") {
      files = ssg::run_build(config, out);
    } else if (name == "run") {
      files = ssg::run(config, out);
    } else {
      for (const auto& s : subs) {
        if (name == s.name) config = ssg::only(config, *s.analysis);
      }
      files = ssg::run(config, out);
    }
    for (const auto& f : files) std::cout << (out / f).string() << '\n';
  } catch (const ssg::Error& e) {
    std::cerr << "ssgspec: " << e.what() << " (config " << opts.config << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ssgspec: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
