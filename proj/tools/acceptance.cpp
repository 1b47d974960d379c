// Runs every acceptance criterion and prints one PASS/FAIL line each.
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "oddsym/verify.hpp"

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    oddsym::SuiteOptions opts;
    std::vector<int> only;
    bool verbose = false;
    app.add_option("--seed", opts.seed, "random seed")->capture_default_str();
    app.add_option("--only", only, "run only these criteria");
    app.add_flag("-v,--verbose", verbose, "print details of passing criteria too");
    CLI11_PARSE(app, argc, argv);

    int failed = 0;
    for (const auto& c : oddsym::acceptance_criteria()) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        auto t = oddsym::run_timed(c, opts);
        bool ok = t.result.ok && t.seconds < 60.0;
        std::cout << (ok ? "PASS" : "FAIL") << " " << std::setw(2) << c.id << "  " << c.title << "  [" << t.result.checked
                  << " checks, " << std::fixed << std::setprecision(2) << t.seconds << " s]\n";
        if (!t.result.ok || verbose) {
            if (!t.result.detail.empty()) std::cout << "        " << t.result.detail << "\n";
        }
        if (t.result.ok && t.seconds >= 60.0) std::cout << "        exceeded the 60 s budget\n";
        failed += !ok;
    }
    std::cout << (failed ? "FAILED " + std::to_string(failed) + " criteria" : "all criteria passed") << "\n";
    return failed ? 1 : 0;
}
