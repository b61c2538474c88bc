// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

namespace skelpipe::anthropometry {

// Landmark heights/breadths as fractions of stature, after the classic
// Drillis-Contini body-segment tables. These feed both the default graph
// proportions and the synthetic body generator, so the two stay consistent.
inline constexpr double kAnkleHeight = 0.039;        // sphyrion
inline constexpr double kKneeHeight = 0.285;         // tibiale
inline constexpr double kHipHeight = 0.530;          // trochanter
inline constexpr double kShoulderHeight = 0.818;     // acromion
inline constexpr double kNoseHeight = 0.903;         // midpoint of chin (0.870) and eye (0.936)
inline constexpr double kHalfShoulderWidth = 0.259 / 2.0;  // biacromial breadth / 2
inline constexpr double kHalfHipWidth = 0.191 / 2.0;       // bitrochanteric breadth / 2

// Segment lengths as fractions of stature.
inline constexpr double kUpperArm = 0.186;
inline constexpr double kForearm = 0.146;
inline constexpr double kThigh = kHipHeight - kKneeHeight;    // 0.245
inline constexpr double kShank = kKneeHeight - kAnkleHeight;  // 0.246

// The root is the mean of both shoulders and both hips, so it sits on the
// torso midline halfway between the shoulder and hip levels.
inline constexpr double kRootHeight = (kShoulderHeight + kHipHeight) / 2.0;
inline constexpr double kRootToNeck = kShoulderHeight - kRootHeight;  // 0.144
inline constexpr double kNeckToNose = kNoseHeight - kShoulderHeight;  // 0.085

// Diagonal from the torso midpoint to a hip joint.
inline const double kRootToHip =
    std::sqrt(kHalfHipWidth * kHalfHipWidth + kRootToNeck * kRootToNeck);

}  // namespace skelpipe::anthropometry
