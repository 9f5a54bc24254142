#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace adpqe {

// Particle-hole excitation tau = a+_{p1} a+_{p2} ... a_{h2} a_{h1}, with
// holes and particles in ascending spin-orbital order.  kappa = tau - tau+.
struct Excitation {
  std::vector<int> holes;
  std::vector<int> particles;

  Excitation() = default;
  Excitation(std::vector<int> h, std::vector<int> p);

  int rank() const { return static_cast<int>(holes.size()); }
  std::uint64_t hole_mask() const;
  std::uint64_t particle_mask() const;

  // Orders by rank, then holes, then particles.
  std::strong_ordering operator<=>(const Excitation& other) const;
  bool operator==(const Excitation& other) const = default;

  std::string to_string() const;  // e.g. "0,1->4,5"
};

struct ExcitationHash {
  std::size_t operator()(const Excitation& e) const noexcept;
};

}  // namespace adpqe
