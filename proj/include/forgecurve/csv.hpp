#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "forgecurve/metrics.hpp"
#include "forgecurve/trainer.hpp"

namespace forgecurve {

// 17 significant digits, '.' decimal separator: doubles round-trip losslessly.
std::string format_double(double v);

// Header: task_index,global_step,step_in_task,delta,tau,mu,r,beta,event,
// loss_task,loss_reg_scaled. One row per StepLogRow, '\n' line endings.
void write_step_log(std::ostream& out, const std::vector<StepLogRow>& rows);

// Header: i,j,accuracy. One row per defined entry, i outer, j inner (i <= j).
void write_matrix_csv(std::ostream& out, const EvalMatrix& m);

// Accepts entries in any order; K is the largest index seen. Malformed rows
// raise ParseError naming the 1-based line.
EvalMatrix read_matrix_csv(std::istream& in, const std::string& source_name = "matrix csv");

// Header: step,delta. Returns the delta column in row order; deltas must be
// finite and >= 0.
std::vector<double> read_delta_trace(std::istream& in, const std::string& source_name = "trace csv");

}  // namespace forgecurve
