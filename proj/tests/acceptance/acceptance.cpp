// Runs acceptance criteria 1-11 and prints one PASS/FAIL line each.
// Criterion 11 also requires `catenary check --suite all` to exit 0 when the
// CLI was built alongside.

#include <cstdlib>
#include <iostream>
#include <string>

#include <sys/wait.h>

#include "catenary/acceptance.hpp"

namespace ac = catenary::acceptance;

int main(int argc, char** argv) {
  const std::string suite = argc > 1 ? argv[1] : "all";
  int failed = 0;
  for (int id : ac::suite(suite)) {
    ac::CriterionResult r = ac::run(id);
#ifdef CATENARY_CLI_PATH
    if (id == 11) {
      const std::string cmd = std::string("\"") + CATENARY_CLI_PATH + "\" check --suite all > /dev/null";
      const int status = std::system(cmd.c_str());
      const bool ok = status != -1 && WIFEXITED(status) && WEXITSTATUS(status) == 0;
      r.detail += ok ? "; cli check --suite all exited 0" : "; cli check --suite all failed";
      r.passed = r.passed && ok;
    }
#endif
    std::cout << ac::format(r) << std::endl;
    failed += r.passed ? 0 : 1;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << "\n";
  return failed ? 1 : 0;
}
