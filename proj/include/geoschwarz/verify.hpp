#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace geoschwarz {

struct CriterionResult {
  std::string id;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double time_limit_seconds = 0.0;
};

/// Ids of every acceptance criterion, in order ("A1" ... "A8").
std::vector<std::string> acceptance_ids();

/// Runs the requested criteria (all when `ids` is empty). Scratch CSVs go
/// under `workdir`. A criterion also fails when it exceeds its time limit.
std::vector<CriterionResult> run_acceptance(
    const std::vector<std::string>& ids = {},
    const std::filesystem::path& workdir =
        std::filesystem::temp_directory_path() / "geo-schwarz-verify");

/// Estimated local convergence order: least-squares slope of
/// log r_{k+1} against log r_k over the consecutive pairs whose successor
/// r_{k+1} lies in [floor, window]. The floor keeps round-off limited
/// residuals out of the fit. Returns NaN with fewer than two such pairs.
double fitted_convergence_order(const std::vector<double>& residuals,
                                double window = 1e-3, double floor = 1e-14);

}  // namespace geoschwarz
