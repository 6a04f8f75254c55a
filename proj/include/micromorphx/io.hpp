#pragma once

#include <string>
#include <vector>

#include "micromorphx/config.hpp"
#include "micromorphx/dispersion.hpp"
#include "micromorphx/inequalities.hpp"

namespace mmx {

/// Full-precision (17 significant digits) text form of a double; round-trips
/// exactly through strtod.
std::string format_full(double v);

/// Header: t,kinetic,elastic,microstrain,dislocation,total,power,work,drift
void write_ledger_csv(const std::string& path, const EnergyLedger& ledger);

/// Header: spec,grid,constant,lambda_min,iterations,classification
void write_constants_csv(const std::string& path, const std::vector<ConstantEstimate>& rows);

/// Header: k_index,|k|,kx,ky,kz,omega_1,...,omega_12
void write_dispersion_csv(const std::string& path, const std::vector<DispersionPoint>& points);

/// Legacy-ASCII VTK structured-points snapshot: displacement as a point
/// vector array, the nine micro-distortion components as scalar arrays
/// P11..P33, and the nodal energy density obtained by shape-weighted
/// averaging of the Gauss-point values.
void write_snapshot(const std::string& path, const SystemMatrices& sm, const State& state);

/// JSON run manifest: the config echoed verbatim plus seed, thread count, and
/// toolchain/library versions.
void write_manifest(const std::string& path, const ScenarioConfig& config, unsigned long seed,
                    int threads);

}  // namespace mmx
