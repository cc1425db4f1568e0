#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "dspanner/graph.hpp"

namespace dspanner {

enum class Family { kErdosRenyi, kCycle, kLayered, kGrid };

/// Instance generator parameters. Lengths are uniform integers in
/// [1, max_length]; max_length = 1 gives unit lengths.
struct InstanceSpec {
  Family family = Family::kErdosRenyi;
  std::size_t n = 10;
  double p = 0.2;            // er, layered: edge probability
  int max_length = 1;
  std::size_t layers = 3;    // layered
  std::size_t rows = 0;      // grid; 0 picks the most square factorization of n
  bool bidirectional = false;  // grid: add the reverse of every edge
  std::uint64_t seed = 0;
};

/// "family:key=value,..." with keys n, p, maxlen, layers, rows, bidir, seed.
/// Example: "er:n=30,p=0.15,maxlen=4,seed=7". Throws BadSpec.
InstanceSpec parse_instance_spec(std::string_view text);

std::string to_string(const InstanceSpec& spec);

/// Deterministic per spec.seed.
///   er       every ordered pair independently with probability p
///   cycle    0 -> 1 -> ... -> n-1 -> 0
///   layered  vertices split into `layers` consecutive bands, each edge from a
///            band to the next with probability p
///   grid     rows x cols, edges rightward and downward
DiGraph generate_instance(const InstanceSpec& spec);

}  // namespace dspanner
