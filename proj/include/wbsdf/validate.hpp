#pragma once

#include <string>
#include <vector>

namespace wbsdf::validate {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    std::string scene_dir = "scenes";
    std::string only;            // run a single named check
    int threads = 1;
    // table-axes overrides, used by the coarsened-grid fixture
    std::size_t grid_n = 0;
    double grid_dx = 0.0;
};

// The acceptance checks, one entry per criterion (some criteria group
// naturally and share a cached render). Never throws for a failing check;
// infrastructure problems (missing scene files) surface as exceptions.
std::vector<CheckResult> run_checks(const Options& opts);

std::vector<std::string> check_names();

std::string report_json(const std::vector<CheckResult>& results);

// one "PASS name ..." / "FAIL name ..." line per check
std::string report_text(const std::vector<CheckResult>& results);

}  // namespace wbsdf::validate
