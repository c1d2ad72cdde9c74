#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace adpbound {

using Real = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Mat24 = Eigen::Matrix<Real, 2, 4>;
using Mat42 = Eigen::Matrix<Real, 4, 2>;
using BoolArray = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Optimization sense of a horizon problem. A single dispatcher everywhere;
/// the minimize variant mirrors every max with a min.
enum class Direction { Maximize, Minimize };

inline const char* to_string(Direction d) {
  return d == Direction::Maximize ? "max" : "min";
}

/// Identity element for opt-accumulation in the given direction.
inline Real worst_value(Direction d) {
  return d == Direction::Maximize ? -std::numeric_limits<Real>::infinity()
                                  : std::numeric_limits<Real>::infinity();
}

inline bool improves(Direction d, Real candidate, Real incumbent) {
  return d == Direction::Maximize ? candidate > incumbent : candidate < incumbent;
}

inline Real opt2(Direction d, Real a, Real b) {
  return d == Direction::Maximize ? std::max(a, b) : std::min(a, b);
}

/// Thrown when a feasibility contract is violated (empty feasible set at a
/// reachable state, infeasible policy action, ...). Carries stage and state
/// in the message.
class FeasibilityError : public std::runtime_error {
 public:
  explicit FeasibilityError(const std::string& what) : std::runtime_error(what) {}
};

// --- seeding ----------------------------------------------------------------
//
// One master seed per experiment; every stochastic operation derives its own
// stream deterministically so batches can be reordered or parallelized
// without changing results.

/// SplitMix64 step, used to mix a master seed with a stream index.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derive the seed of substream `stream` from a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
  return std::mt19937_64(splitmix64(seed));
}

}  // namespace adpbound
