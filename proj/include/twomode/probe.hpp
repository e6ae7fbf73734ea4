#pragma once

// End-to-end probe evaluation from a JSON config:
// couplings (or overlaps) -> Hamiltonian -> probe state -> QFI report.
//
// Config keys:
//   N            particle number (required)
//   couplings    {vartheta, V00, V01, V11, A1, A2, T0, T1}      (optional)
//   overlaps     {z, V0, o_0000, o_1111, o_0011, o_pair, o_t0, o_t1,
//                 vartheta_in, A1_in}                             (optional)
//   generator    term name, "Jx"/"Jy"/"Jz", "hamiltonian", or
//                {"axis": [nx, ny, nz]}                           (required)
//   state        {"family": ..., family parameters}               (required)
//   nu           number of runs, default 1
//   bounds, sld, fragmentation   booleans, default false
// Complex numbers are a JSON number or [re, im].

#include "json.hpp"
#include "twomode/dicke.hpp"
#include "twomode/error.hpp"

namespace twomode {

// Schema violation; the message starts with the offending field path.
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

CouplingSet couplings_from_json(const nlohmann::json& j);
ModeOverlaps overlaps_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CouplingSet& c);

// Builds the probe state described by `spec` for particle number n. `hamiltonian`
// is used by families that refer to it (eigenstate/optimal of "hamiltonian").
DickeVector state_from_json(ParticleNumber n, const nlohmann::json& spec, const BandedHermitian* hamiltonian = nullptr);

nlohmann::json run_probe(const nlohmann::json& config);

}  // namespace twomode
