#pragma once

#include <string>
#include <vector>

#include "salo/objective.hpp"

namespace salo {

enum class FdMode { forward, central };

struct FdConfig {
  double r = 1e-7;  // perturbation step
  FdMode mode = FdMode::central;
};

// Diagonal Hessian estimate by perturbing one coordinate at a time and
// differencing gradients. Forward mode reuses one base gradient (n+1
// gradient evaluations); central mode uses symmetric offsets (2n).
Vec fd_diag_forward(const Objective& obj, const Vec& w, double r);
Vec fd_diag_central(const Objective& obj, const Vec& w, double r);

struct FdErrorRow {
  double r;
  FdMode mode;
  double max_abs_error;  // against the objective's analytic diagonal
};

// r-sweep against the analytic oracle; both modes per r, sorted r descending.
std::vector<FdErrorRow> fd_error_report(const Objective& obj, const Vec& w,
                                        std::vector<double> r_list);

std::string to_string(FdMode m);

}  // namespace salo
