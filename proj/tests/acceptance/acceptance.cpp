// Acceptance runner: one pass/fail line per criterion 1..10.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "springerlab/battery.hpp"
#include "springerlab/rootdata.hpp"

using namespace springerlab;

int main(int argc, char** argv) {
    BatteryOptions opt;
    opt.seed = seed_from_env();
    opt.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    for (int i = 1; i < argc; ++i) opt.criteria.insert(std::atoi(argv[i]));
    auto rep = run_battery(opt);

    // The static tables must also byte-match the transcribed golden file.
    bool golden_ok = true;
    if (opt.criteria.empty() || opt.criteria.count(10)) {
        std::ifstream in(std::string(SPRINGERLAB_GOLDEN_DIR) + "/root_tables.tsv", std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        golden_ok = in.good() || in.eof();
        golden_ok = golden_ok && ss.str() == root_tables_tsv(8);
    }

    for (const auto& r : rep.cases)
        if (!r.pass) std::cout << "  failed case " << r.id << ": " << r.detail << "\n";
    bool all = true;
    for (const auto& s : rep.criteria) {
        bool ok = s.pass() && (s.criterion != 10 || golden_ok);
        all = all && ok;
        char buf[512];
        std::snprintf(buf, sizeof buf, "criterion %2d %s  %-42s cases=%d failed=%d required>=%d time=%.2fs budget=%.0fs%s",
                      s.criterion, ok ? "PASS" : "FAIL", s.title.c_str(), s.cases, s.failed, s.required_cases, s.seconds,
                      s.budget, s.criterion == 10 ? (golden_ok ? " golden=match" : " golden=MISMATCH") : "");
        std::cout << buf << "\n";
    }
    std::cout << (all ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << " (seed " << opt.seed << ")\n";
    return all ? 0 : 1;
}
