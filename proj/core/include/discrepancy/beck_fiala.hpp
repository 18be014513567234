#pragma once

#include "discrepancy/set_system.hpp"

namespace discrepancy {

struct BeckFialaOptions {
  /// Values within tol of +-1 count as fixed.
  double tol = 1e-8;
};

/**
 * Beck-Fiala iterative rounding.
 *
 * A row stays active while it holds more than t floating (non +-1)
 * variables. Every float lies in at most t rows, so fewer rows are active
 * than there are floats touching them and the active rows restricted to
 * those floats have a null direction. Each move keeps every active row sum
 * fixed and pins at least one more variable. Once no row is active, the
 * remaining floats are signed greedily, one at a time, minimizing the
 * running max |row deviation|.
 *
 * From x0 = 0 the result satisfies ||A chi||_inf <= 2t - 1.
 */
Coloring beck_fiala_color(const SetSystem& sys, const Coloring& x0,
                          const BeckFialaOptions& opts = {});

inline Coloring beck_fiala_color(const SetSystem& sys) {
  return beck_fiala_color(sys, Coloring::zeros(sys.num_elements()));
}

/// Signs the still-fractional entries of `x` (|x_i| < 1) one by one in
/// index order, each time picking the sign that minimizes the largest
/// |(A (x - x0))_j| over the sets containing i. Ties keep the sign of x_i.
Coloring greedy_sign(const SetSystem& sys, std::vector<double> x, const Coloring& x0);

}  // namespace discrepancy
