#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "threebody_app/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::string filter;
  std::uint64_t seed = 20240601;
  app.add_option("--filter", filter, "criterion number or name substring");
  app.add_option("--seed", seed, "base seed for randomized criteria");
  CLI11_PARSE(app, argc, argv);

  const auto results = threebody::app::run_acceptance(filter, seed);
  if (results.empty()) {
    std::cerr << "no criterion matches '" << filter << "'\n";
    return 2;
  }
  threebody::app::print_table(std::cout, results);
  for (const auto& r : results) {
    if (!r.pass()) return 1;
  }
  return 0;
}
