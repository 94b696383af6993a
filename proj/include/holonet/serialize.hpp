#ifndef HOLONET_SERIALIZE_HPP
#define HOLONET_SERIALIZE_HPP

#include <string>

#include "holonet/holo_net.hpp"
#include "holonet/statevector.hpp"

namespace holonet {

// .hitns: one JSON header line (format version, layout, center, per-tensor leg
// tables and byte offsets) followed by raw little-endian float64 (re, im)
// pairs, row-major in declared leg order. Round trips are bit exact.
void save_network(const HoloNet& n, const std::string& path);
HoloNet load_network(const std::string& path);

// Statevector: raw float64 pairs next to a JSON sidecar (L, d, norm).
void save_statevector(const StateVector& psi, const std::string& path);
StateVector load_statevector(const std::string& path);

}  // namespace holonet

#endif  // HOLONET_SERIALIZE_HPP
