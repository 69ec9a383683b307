#ifndef LPFIELD_ACCEPTANCE_HPP
#define LPFIELD_ACCEPTANCE_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace lpfield::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

std::vector<int> all_ids();

/// Run one criterion; `workdir` receives scratch CSV output (criterion 10).
CriterionResult run_criterion(int id, const std::filesystem::path& workdir);

/// Run the given criteria (all when empty), printing one pass/fail line per
/// criterion. Returns the number of failures.
int run(std::ostream& out, const std::filesystem::path& workdir,
        std::vector<int> ids = {});

}  // namespace lpfield::acceptance

#endif
