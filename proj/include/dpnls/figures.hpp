#pragma once

#include <complex>
#include <string>

#include "dpnls/grid.hpp"

namespace dpnls {

// The published surface plots pin every constant directly (amplitudes,
// roots, wave numbers), independent of the coefficient derivation, and three
// of the plotted formulas differ from the engine's corrected closed forms.
// Figure mode therefore evaluates the plotted formulas literally from this
// table instead of going through construct_solution.
struct FigureSpec {
  int id = 1;              // 1..6
  std::string family;      // display label: "coth", "cosh-soliton", "sn-elliptic"
  std::string component;   // plotted part: "imag" (1,3,5) or "real" (2,4,6)
  GridSpec default_grid;   // x,y in [-4,4] x 33, t in {0,1,2}
};

FigureSpec figure_spec(int id);

// Complex surface value at one point; throws SingularPoint on the plotted
// formula's singular locus.
std::complex<double> figure_field(int id, double x, double y, double t);

}  // namespace dpnls
