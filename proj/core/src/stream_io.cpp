// SPDX-License-Identifier: Apache-2.0
#include "skelpipe/stream_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "skelpipe/errors.hpp"

namespace skelpipe {

namespace {

using nlohmann::json;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing", 0);
  return out;
}

double finite_number(const json& v, std::size_t line) {
  if (!v.is_number()) throw ParseError("expected a number", line);
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ParseError("non-finite number", line);
  return x;
}

Skeleton skeleton_from_json(const json& js, std::size_t line) {
  Skeleton s;
  if (js.contains("id")) s.track_id = js.at("id").get<std::int64_t>();
  if (js.contains("cost")) s.assignment_cost = finite_number(js.at("cost"), line);
  const auto kps = js.find("kps");
  if (kps == js.end() || !kps->is_object()) {
    throw ParseError("skeleton without kps object", line);
  }
  for (const auto& [name, arr] : kps->items()) {
    const auto joint = joint_from_name(name);
    if (!joint) throw ParseError("unknown joint '" + name + "'", line);
    if (!arr.is_array() || arr.size() != 4) {
      throw ParseError("keypoint must be [x, y, z, c]", line);
    }
    Keypoint kp;
    for (int i = 0; i < 3; ++i) kp.position[i] = finite_number(arr[i], line);
    kp.confidence = finite_number(arr[3], line);
    s.set(*joint, kp);
  }
  return s;
}

json skeleton_to_json(const Skeleton& s) {
  json js = json::object();
  if (s.track_id) js["id"] = *s.track_id;
  if (s.assignment_cost) js["cost"] = *s.assignment_cost;
  json kps = json::object();
  s.for_each([&](Joint j, const Keypoint& kp) {
    kps[std::string(joint_name(j))] = {kp.position.x(), kp.position.y(),
                                       kp.position.z(), kp.confidence};
  });
  js["kps"] = std::move(kps);
  return js;
}

json parse_line(const std::string& text, std::size_t line) {
  json js = json::parse(text, nullptr, false);
  if (js.is_discarded()) throw ParseError("malformed JSON", line);
  return js;
}

}  // namespace

std::vector<Frame> read_stream(std::istream& in) {
  std::vector<Frame> frames;
  std::string text;
  std::size_t line = 0;
  double last_t = -std::numeric_limits<double>::infinity();
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    const json js = parse_line(text, line);
    if (!js.is_object() || !js.contains("t") || !js.contains("skeletons")) {
      throw ParseError("frame must have t and skeletons", line);
    }
    Frame frame;
    frame.timestamp = finite_number(js.at("t"), line);
    if (frame.timestamp <= last_t) {
      throw NonMonotoneTimestamp("timestamps must strictly increase", line);
    }
    last_t = frame.timestamp;
    for (const auto& sk : js.at("skeletons")) {
      frame.skeletons.push_back(skeleton_from_json(sk, line));
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

std::vector<Frame> read_stream(const std::string& path) {
  auto in = open_input(path);
  return read_stream(in);
}

void write_stream(std::ostream& out, const std::vector<Frame>& frames) {
  for (const Frame& frame : frames) {
    json js;
    js["t"] = frame.timestamp;
    json sks = json::array();
    for (const Skeleton& s : frame.skeletons) sks.push_back(skeleton_to_json(s));
    js["skeletons"] = std::move(sks);
    out << js.dump() << '\n';
  }
}

void write_stream(const std::string& path, const std::vector<Frame>& frames) {
  auto out = open_output(path);
  write_stream(out, frames);
}

Trajectory read_trajectory(const std::string& path) {
  auto in = open_input(path);
  Trajectory traj(path);
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    const json js = parse_line(text, line);
    if (!js.is_object() || !js.contains("t") || !js.contains("p")) {
      throw ParseError("trajectory record must have t and p", line);
    }
    const auto& p = js.at("p");
    if (!p.is_array() || p.size() != 3) {
      throw ParseError("p must be [x, y, z]", line);
    }
    traj.append(finite_number(js.at("t"), line),
                Vec3(finite_number(p[0], line), finite_number(p[1], line),
                     finite_number(p[2], line)));
  }
  return traj;
}

void write_trajectory(const std::string& path, const Trajectory& trajectory) {
  auto out = open_output(path);
  for (const auto& s : trajectory.samples()) {
    json js;
    js["t"] = s.time;
    js["p"] = {s.position.x(), s.position.y(), s.position.z()};
    out << js.dump() << '\n';
  }
}

StreamFileKind detect_file_kind(const std::string& path) {
  auto in = open_input(path);
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    const json js = parse_line(text, line);
    if (js.is_object() && js.contains("skeletons")) {
      return StreamFileKind::frame_stream;
    }
    if (js.is_object() && js.contains("p")) return StreamFileKind::trajectory;
    throw ParseError("unrecognized record shape", line);
  }
  throw ParseError("empty file " + path, 0);
}

Trajectory extract_joint_trajectory(const std::vector<Frame>& frames,
                                    std::int64_t track_id, Joint joint,
                                    std::string label) {
  Trajectory traj(std::move(label));
  for (const Frame& frame : frames) {
    for (const Skeleton& s : frame.skeletons) {
      if (s.track_id != track_id || !s.has(joint)) continue;
      traj.append(frame.timestamp, s.at(joint).position);
      break;
    }
  }
  return traj;
}

}  // namespace skelpipe
