#pragma once

// JSON (canonical) and CSV (flat projection) forms of verification reports.
// Wall time is not part of either so that equal inputs give equal bytes.

#include <string>
#include <vector>

#include "core/kernel_verifier.hpp"

namespace nlk::report {

/// {"reports": [...], "verdict": ...}; one entry per dimension, in order.
std::string to_json(const std::vector<verify::VerificationReport>& reports);

/// `dimension,k,lambda,check,value,threshold,pass`; dimension-level checks
/// leave k and lambda empty.
std::string to_csv(const std::vector<verify::VerificationReport>& reports);

/// Worst verdict over all reports: inconclusive > fail > pass.
verify::Verdict overall(const std::vector<verify::VerificationReport>& reports);

}  // namespace nlk::report
