#pragma once

#include <ostream>
#include <vector>

#include "collapse/born.hpp"
#include "collapse/lindblad.hpp"
#include "collapse/purification.hpp"

namespace collapse {

// columns: t, then re/im of each matrix entry in row-major order
// (re_0_0, im_0_0, re_0_1, ...)
void write_lindblad_csv(std::ostream& os, const Trajectory& traj);

// columns: t, r_1 ... r_m, lambda, domain_index
void write_purification_csv(std::ostream& os,
                            const std::vector<PurificationTracePoint>& trace);

// columns: trial_id, outcome, t_converged
void write_ledger_csv(std::ostream& os, const std::vector<TrialRecord>& ledger);

}  // namespace collapse
