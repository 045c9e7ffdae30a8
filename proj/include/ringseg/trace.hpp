#pragma once

#include <filesystem>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "ringseg/types.hpp"

namespace ringseg {

// Checks every trace invariant (monotone equispaced timestamps, unit
// quaternions, jaw range, scene color uniqueness, per-arm annotation
// non-overlap). Throws TraceError naming the offending index.
void validate_trace(const ExecutionTrace& trace);

nlohmann::json trace_to_json(const ExecutionTrace& trace);
// Strict: unknown keys, wrong arities and invariant violations are rejected.
ExecutionTrace trace_from_json(const nlohmann::json& j);

ExecutionTrace load_trace(const std::filesystem::path& path);
// Atomic (temp file + rename) and byte-stable; numbers round-trip exactly.
void save_trace(const ExecutionTrace& trace, const std::filesystem::path& path);

// Row i = frame i. Columns: PSM1 pos xyz, quat xyzw, jaw, then PSM2 likewise.
Eigen::MatrixXd kinematic_matrix(const ExecutionTrace& trace);

// Shared helper for the other on-disk writers: dump + temp file + rename.
void write_json_atomic(const nlohmann::json& j, const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace ringseg
