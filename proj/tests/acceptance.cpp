// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit code 0 iff all criteria pass.
#include <cstdlib>
#include <iostream>

#include "truncmom/validation.hpp"

int main(int argc, char** argv) {
  int threads = 0;
  if (const char* env = std::getenv("TRUNCMOM_THREADS")) threads = std::atoi(env);
  std::optional<int> only;
  if (argc > 1) only = std::atoi(argv[1]);

  const auto results = truncmom::run_acceptance(threads, only);
  bool all_pass = true;
  for (const auto& r : results) {
    std::cout << truncmom::format_criterion_line(r) << std::endl;
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 1;
}
