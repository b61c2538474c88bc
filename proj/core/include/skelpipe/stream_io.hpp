// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "skelpipe/metrics.hpp"
#include "skelpipe/skeleton.hpp"

namespace skelpipe {

// Line-delimited JSON, one frame per line:
//   {"t": <seconds>, "skeletons": [{"id": <int>?, "cost": <real>?,
//    "kps": {"<joint>": [x, y, z, c], ...}}, ...]}
// Timestamps must strictly increase within a file.

std::vector<Frame> read_stream(const std::string& path);
std::vector<Frame> read_stream(std::istream& in);

void write_stream(const std::string& path, const std::vector<Frame>& frames);
void write_stream(std::ostream& out, const std::vector<Frame>& frames);

// Trajectories serialize as {"t": <seconds>, "p": [x, y, z]} per line.
Trajectory read_trajectory(const std::string& path);
void write_trajectory(const std::string& path, const Trajectory& trajectory);

enum class StreamFileKind { frame_stream, trajectory };

/// Peeks at the first record to tell frame streams from trajectories.
StreamFileKind detect_file_kind(const std::string& path);

/// Extracts one joint's trajectory for a given track id from a stream.
Trajectory extract_joint_trajectory(const std::vector<Frame>& frames,
                                    std::int64_t track_id, Joint joint,
                                    std::string label);

}  // namespace skelpipe
