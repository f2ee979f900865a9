#pragma once

#include "hemo/vessel.hpp"

#include <vector>

namespace hemo {

struct junction_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct JunctionSolution {
    std::vector<CellState> ports;  ///< same order as the call's port arguments
    double residual_norm = 0.0;    ///< final max scaled residual
    int iterations = 0;
    double mass_residual = 0.0;      ///< |sum Q_in - sum Q_out|, cm^3/s
    double pressure_residual = 0.0;  ///< max total-pressure mismatch, dyn/cm^2
};

/// One parent end feeding two child starts. Ports: parent, child1, child2.
JunctionSolution solve_bifurcation(const CellState& parent, const TubeLaw& parent_law,
                                   const CellState& child1, const TubeLaw& child1_law,
                                   const CellState& child2, const TubeLaw& child2_law,
                                   double rho);

/// Two parent ends merging into one child start. Ports: parent1, parent2, child.
JunctionSolution solve_confluence(const CellState& parent1, const TubeLaw& parent1_law,
                                  const CellState& parent2, const TubeLaw& parent2_law,
                                  const CellState& child, const TubeLaw& child_law, double rho);

/// End of one segment feeding the start of another. Ports: left, right.
JunctionSolution solve_one_to_one(const CellState& left, const TubeLaw& left_law,
                                  const CellState& right, const TubeLaw& right_law, double rho);

}  // namespace hemo
