#include <iostream>

#include "dto/cli/cli.hpp"

int main(int argc, char** argv) {
  using namespace dto::cli;
  try {
    const RunSpec spec = parse_args(argc, argv);
    return run_command(spec, std::cout, std::cerr);
  } catch (const HelpRequested& help) {
    std::cout << help.what();
    return kExitSuccess;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << usage();
    return kExitUsage;
  }
}
