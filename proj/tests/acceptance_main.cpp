// Acceptance suite: one line per criterion, nonzero exit when any criterion fails.
#include <cstdlib>
#include <iostream>
#include <string>

#include "specdiff/acceptance.hpp"

int main(int argc, char** argv) {
    specdiff::AcceptanceOptions options;
    if (argc > 1) options.seed = std::stoull(argv[1]);
    const auto report = specdiff::verify_all(options);
    for (const auto& clause : report.clauses) std::cout << specdiff::format_clause(clause) << '\n';
    std::cout << (report.pass ? "acceptance: all criteria pass" : "acceptance: some criteria fail")
              << " (" << report.seconds << " s)\n";
    return report.pass ? EXIT_SUCCESS : EXIT_FAILURE;
}
