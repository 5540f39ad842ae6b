// Runs every acceptance criterion and prints one line per criterion.

#include <cstdio>
#include <filesystem>

#include "adbeam/acceptance.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path scratch =
      argc > 1 ? std::filesystem::path(argv[1])
               : std::filesystem::temp_directory_path() / "adbeam_acceptance";
  std::filesystem::create_directories(scratch);
  int failed = 0;
  for (const auto& criterion : adbeam::acceptance::suite("all", scratch)) {
    const auto r = criterion();
    if (!r.passed) ++failed;
    std::printf("%s\n", adbeam::acceptance::format_line(r).c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
