#pragma once

#include <ostream>
#include <string>

#include "epaut/peakons.hpp"
#include "epaut/phase_space.hpp"

namespace epaut {

// First line "# " followed by the compact JSON `header`, then
// i, x, w, Q_1..Q_d, P_1..P_d, sigma_1..sigma_m, g_1..g_k with g the
// GroupElement coordinates (reduced angle or 9 rotation entries).
void write_state_csv(std::ostream& out, const CotangentState& z, const std::string& header_json);

// One row per snapshot and node: t, i, Q, P, sigma, g, charge_1..charge_m.
void write_trajectory_csv(std::ostream& out, const EnsembleTrajectory& traj);

// One row per snapshot: t, energy, energy_drift (relative), charge_drift, casimir_drift,
// each drift measured against the first snapshot.
void write_diagnostics_csv(std::ostream& out, const EnsembleTrajectory& traj);

}  // namespace epaut
