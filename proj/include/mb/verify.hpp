#pragma once

#include <string>
#include <vector>

#include "mb/minimize.hpp"

namespace mb {

struct CheckEntry {
  std::string name;     // what is measured
  double measured = 0.0;
  double bound = 0.0;   // reference value or cap the measurement is held to
  bool pass = false;
  double tolerance = 0.0;
  std::string note;
};

struct VerificationReport {
  std::vector<CheckEntry> entries;

  void add(CheckEntry e) { entries.push_back(std::move(e)); }
  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
};

std::string report_text(const VerificationReport& rep);
std::string report_csv(const VerificationReport& rep);

// Leakage fractions of the minimiser: total mass outside the R0-balls,
// emerging mass outside the (rho - sigma0/2)-balls, and mass on the outer
// margin band A(x,d) \ A(x,d/2); all relative to the total mass.
void check_support(VerificationReport& rep, const MinimizeResult& result,
                   const Configuration& config, const Problem& prob, double tol);

// Pointwise comparison against the scaled bump sum at level kappa, plus the
// kappa-inflated support confinement. Requires u <= kappa outside the
// R_star-balls.
void support_comparison_bound(VerificationReport& rep, const Field& u,
                              const Configuration& config, const Problem& prob, double kappa);

// ||u - sum w_j||_{x,d} over the projected dual norm of the limit-gradient
// difference. NaN signals the degenerate identical-argument case.
double stability_ratio(const Field& u, const Configuration& config, const Problem& prob);

void annulus_linf_check(VerificationReport& rep, const MinimizeResult& result,
                        const Configuration& config, const Problem& prob, double R);

struct HierarchyResult {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double m0_reference = 0.0;  // far-centre single-bump value on the same grid
  Configuration best1, best2;
};

HierarchyResult check_mu_hierarchy(VerificationReport& rep, const Problem& prob,
                                   const SolverOptions& opts, double rel_tol);

void residual_pde(VerificationReport& rep, MinimizeResult& result, const Configuration& config,
                  const Problem& prob, double tol);

}  // namespace mb
