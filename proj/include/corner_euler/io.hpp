#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "corner_euler/flow.hpp"
#include "corner_euler/vorticity.hpp"

namespace corner_euler {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

/// RFC 4180 field: quoted when it holds a comma, quote, CR or LF, with
/// inner quotes doubled.
std::string csv_field(std::string_view text);

/// Rows t,id,kind,y1,y2,x1,x2; header first when `header` is set.
void write_trajectory_csv(std::ostream& os, std::span<const Trajectory> trajectories,
                          bool header = true);

/// Rows z1,z2,w with a header.
void write_vorticity_csv(std::ostream& os, const DiskVorticity& vort);

/// {"t": ..., "particles": [[z1, z2, w], ...]}
std::string snapshot_json(double t, std::span<const Vec2> positions, std::span<const double> weights);

}  // namespace corner_euler
