#include "collapse/io.hpp"

#include <iomanip>

namespace collapse {
namespace {

// full round-trip precision, locale-independent
void prepare(std::ostream& os) {
  os.imbue(std::locale::classic());
  os << std::setprecision(17);
}

}  // namespace

void write_lindblad_csv(std::ostream& os, const Trajectory& traj) {
  prepare(os);
  const Eigen::Index n = traj.empty() ? 0 : traj.front().state.dim();
  os << "t";
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      os << ",re_" << i << "_" << j << ",im_" << i << "_" << j;
    }
  }
  os << "\n";
  for (const TrajectoryPoint& p : traj) {
    os << p.t;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const Complex z = p.state.matrix()(i, j);
        os << "," << z.real() << "," << z.imag();
      }
    }
    os << "\n";
  }
}

void write_purification_csv(std::ostream& os,
                            const std::vector<PurificationTracePoint>& trace) {
  prepare(os);
  const std::size_t m = trace.empty() ? 0 : trace.front().state.m();
  os << "t";
  for (std::size_t k = 1; k <= m; ++k) os << ",r_" << k;
  os << ",lambda,domain_index\n";
  for (const PurificationTracePoint& p : trace) {
    os << p.t;
    for (std::size_t k = 0; k < m; ++k) os << "," << p.state[k];
    os << "," << p.lambda << "," << p.domain_index << "\n";
  }
}

void write_ledger_csv(std::ostream& os, const std::vector<TrialRecord>& ledger) {
  prepare(os);
  os << "trial_id,outcome,t_converged\n";
  for (const TrialRecord& r : ledger) {
    os << r.trial << "," << r.outcome << "," << r.t_converged << "\n";
  }
}

}  // namespace collapse
