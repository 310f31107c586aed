#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cweno/euler.hpp"
#include "cweno/field.hpp"

namespace cweno {

// Snapshot files are plain CSV with header x,rho,u,p,e and full-precision
// (%.17g) values, one row per cell.
void write_snapshot_csv(const std::filesystem::path& path, const Field& f,
                        const GasConstants& gas);

struct Snapshot {
  std::vector<double> x, rho, u, p, e;
  size_t size() const { return x.size(); }
};

Snapshot read_snapshot_csv(const std::filesystem::path& path);

// Per-step minima trace over cell averages: step,t,min_rho,min_e.
struct MinimaRow {
  long step = 0;
  double t = 0.0;
  double min_rho = 0.0, min_e = 0.0;
};

void write_minima_csv(const std::filesystem::path& path, std::span<const MinimaRow> rows);

// --- Reference cache ----------------------------------------------------------
//
// Fine-grid reference solutions are expensive; they are stored as text files
// keyed by a description string that encodes everything that influenced the
// run.  Files are written atomically (temp + rename) and validated on load, so
// a stale or truncated cache entry is recomputed rather than trusted.

std::filesystem::path cache_directory();

std::optional<std::vector<ConservedState>> load_cached_reference(const std::string& key,
                                                                 size_t expected_cells);
void store_cached_reference(const std::string& key, std::span<const ConservedState> data);

}  // namespace cweno
