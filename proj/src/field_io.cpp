#include "epaut/field_io.hpp"

#include <cmath>
#include <iomanip>

namespace epaut {

namespace {

void columns(std::ostream& out, const char* prefix, int count) {
  for (int k = 1; k <= count; ++k) out << ',' << prefix << k;
}

template <class V>
void values(std::ostream& out, const V& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) out << ',' << v(k);
}

int group_columns(const StructureGroup& grp) { return grp.dim() == 1 ? 1 : 9; }

void node_columns(std::ostream& out, const CotangentState& z) {
  columns(out, "Q", z.ambient.dim());
  columns(out, "P", z.ambient.dim());
  columns(out, "sigma", z.group.dim());
  columns(out, "g", group_columns(z.group));
}

void node_values(std::ostream& out, const CotangentState& z, int i) {
  values(out, z.Q.row(i));
  values(out, z.P.row(i));
  values(out, z.sigma.row(i));
  values(out, z.gamma[i].coordinates());
}

}  // namespace

void write_state_csv(std::ostream& out, const CotangentState& z, const std::string& header_json) {
  out << "# " << header_json << '\n' << std::setprecision(17);
  out << "i,x,w";
  node_columns(out, z);
  out << '\n';
  for (int i = 0; i < z.nodes(); ++i) {
    out << i << ',' << z.source.nodes()(i) << ',' << z.source.weights()(i);
    node_values(out, z, i);
    out << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const EnsembleTrajectory& traj) {
  out << std::setprecision(17);
  if (traj.states.empty()) return;
  const CotangentState& z0 = traj.states.front();
  out << "t,i";
  node_columns(out, z0);
  columns(out, "charge", z0.group.dim());
  out << '\n';
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    const CotangentState& z = traj.states[s];
    for (int i = 0; i < z.nodes(); ++i) {
      out << traj.times[s] << ',' << i;
      node_values(out, z, i);
      values(out, traj.charges[s].row(i));
      out << '\n';
    }
  }
}

void write_diagnostics_csv(std::ostream& out, const EnsembleTrajectory& traj) {
  out << std::setprecision(17) << "t,energy,energy_drift,charge_drift,casimir_drift\n";
  if (traj.states.empty()) return;
  const double h0 = traj.energy.front();
  const Field& c0 = traj.charges.front();
  const Eigen::VectorXd n0 = traj.states.front().sigma.rowwise().norm();
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    const double energy = std::abs(traj.energy[s] - h0) / std::max(std::abs(h0), 1e-300);
    const double charge = (traj.charges[s] - c0).cwiseAbs().maxCoeff();
    const double casimir = (traj.states[s].sigma.rowwise().norm() - n0).cwiseAbs().maxCoeff();
    out << traj.times[s] << ',' << traj.energy[s] << ',' << energy << ',' << charge << ','
        << casimir << '\n';
  }
}

}  // namespace epaut
