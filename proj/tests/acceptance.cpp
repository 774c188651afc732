// Acceptance suite: one line per criterion, exit status 0 only if all pass.
// Usage: acceptance [id ...]
#include <cstdio>
#include <cstdlib>
#include <future>
#include <vector>

#include "bgk/validation.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty())
    for (int i = 1; i <= bgk::kNumCriteria; ++i) ids.push_back(i);

  const bgk::ValidationOptions opt;
  std::vector<std::future<bgk::CheckResult>> jobs;
  for (int id : ids) jobs.push_back(std::async(std::launch::async, [id, &opt] { return bgk::run_check(id, opt); }));

  int failed = 0;
  for (auto& j : jobs) {
    const auto r = j.get();
    const char* verdict = r.pass ? "PASS" : (r.error ? "ERROR" : "FAIL");
    std::printf("criterion %2d %-5s %s: value %.6g %s %.6g | %s\n", r.id, verdict, r.name.c_str(), r.value,
                r.upper_bound ? "<=" : ">", r.threshold, r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  std::printf("%zu criteria, %zu passed, %d failed\n", ids.size(), ids.size() - failed, failed);
  return failed == 0 ? 0 : 1;
}
