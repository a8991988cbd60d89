#pragma once

#include <random>

#include "vispose/mesh.hpp"

namespace vispose {

/// One rotation per subdivided-icosahedron direction (10 * 4^level + 2).
/// Each rotation views the object from that direction: the camera position
/// in the object frame, -R^T t for t on the optical axis, is antiparallel to
/// the direction. In-plane roll is fixed to zero via an up-vector convention
/// (up = +y, falling back to +x when nearly parallel).
RotationSet icosphere_rotation_sample(int subdivision_level);

/// Rotation whose third row is the given unit direction, roll fixed by the
/// same up-vector convention as icosphere_rotation_sample.
Mat3 view_rotation(const Vec3& direction);

/// Uniform random rotation (quaternion method).
Mat3 uniform_random_rotation(std::mt19937_64& rng);

}  // namespace vispose
