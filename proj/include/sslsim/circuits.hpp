#pragma once

#include <array>
#include <optional>
#include <string>

#include "sslsim/model.hpp"

namespace ssl {

// The five full-adder fixture topologies.
enum class AdderKind {
  complementary,
  mirror,
  transmission_gate,
  static_manchester,
  dynamic_manchester,
};

inline constexpr std::array<AdderKind, 5> all_adder_kinds = {
    AdderKind::complementary,     AdderKind::mirror,
    AdderKind::transmission_gate, AdderKind::static_manchester,
    AdderKind::dynamic_manchester,
};

// Fixture identifier, e.g. "static_manchester"; also the layout-file stem.
std::string adder_name(AdderKind kind);
std::optional<AdderKind> adder_by_name(const std::string& name);

// Two inputs A, B coupled antiferromagnetically into output Y; the bias
// resolves the mixed rows upward, so Y computes NAND(A, B).
Layout build_nand();

// Inverter chain of `segments` edges from input IN to output OUT, zones
// cycling 0,1,2. Couplings taper toward the output so that a freshly
// settled upstream cell always overrides a stale downstream one; OUT equals
// IN for an even number of segments and its inverse for an odd number.
Layout build_wire(int segments);

// Full adder on inputs A, B, Ci with outputs S and Co (the dynamic
// Manchester fixture also declares the clock input PHI).
Layout build_adder(AdderKind kind);

}  // namespace ssl
