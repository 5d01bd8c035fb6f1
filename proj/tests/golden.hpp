#pragma once

// Shared fixture: the parameter set every cross-module test drives.

#include "dpnls/params.hpp"

namespace dpnls::testfx {

inline ProblemParams golden_params() {
  ProblemParams p;
  p.m = 1.0;
  p.k = 1.0;
  p.chi1 = 1.0;
  p.chi2 = 2.0;
  p.omega1 = -1.0;
  p.omega2 = 1.0;
  p.tau0 = 1.0;
  p.xi1 = 0.0;
  p.xi3 = 1.0;
  p.xi4 = 1.0;
  return p;
}

}  // namespace dpnls::testfx
