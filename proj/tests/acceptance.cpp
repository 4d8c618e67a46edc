// Prints one PASS/FAIL line per acceptance criterion with its wall time.
// Exit status is the number of failures, or 0 with --report.

#include <chrono>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>

#include "criteria.hpp"

int main(int argc, char** argv) {
  const bool report = argc > 1 && std::strcmp(argv[1], "--report") == 0;
  const std::vector<std::pair<const char*, std::function<rt::Verdict()>>> criteria{
      {"Example 1 reproduction", rt::criterion1},
      {"Examples 2 and 3 nonexistence", rt::criterion2},
      {"Examples 4 and 5 reproduction", rt::criterion3},
      {"Characteristic tables", rt::criterion4},
      {"Generalized identity", rt::criterion5},
      {"Oracle equivalence", [] { return rt::criterion6(); }},
      {"Operator-algebra laws", [] { return rt::criterion7(); }},
      {"Construction consistency", rt::criterion8},
  };
  constexpr double budget_seconds = 30.0;
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    rt::Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > budget_seconds) v.fail("took " + std::to_string(seconds) + " s, budget 30 s");
    if (!v.pass) ++failures;
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << index << " " << name << " (" << std::fixed
              << std::setprecision(2) << seconds << " s): " << v.detail << std::endl;
  }
  return report ? 0 : failures;
}
