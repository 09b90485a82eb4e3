#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace zo {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 20240607;
  // Negative control: the "gaussian" sampler in the variance checks is
  // swapped for a minimum-variance one.
  bool mislabel_gaussian = false;
};

/// Monte-Carlo checks of the perturbation laws and the variance theory:
/// delta-unbiasedness, constant magnitude, DAP alignment, fourth-moment lower
/// bound, the independent-coordinate trace identity, Gaussian kurtosis, the
/// minimum-variance values and the variance sandwich.
std::vector<CheckResult> run_verification(const VerifyOptions& options = {});

/// One "PASS name detail" / "FAIL name detail" line per check and a summary.
std::string format_verification(const std::vector<CheckResult>& results);

}  // namespace zo
