#include "cweno/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <string>

namespace cweno {

namespace fs = std::filesystem;

void write_snapshot_csv(const fs::path& path, const Field& f, const GasConstants& gas) {
  std::ofstream out(path);
  if (!out) throw SolverError("cannot open " + path.string() + " for writing");
  out << "x,rho,u,p,e\n";
  char buf[200];
  for (int j = 0; j < f.grid.n; ++j) {
    const PrimitiveState w = primitive_from_conserved(f.u[j], gas);
    const double e = internal_energy(f.u[j]);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", f.grid.center(j), w.rho, w.u,
                  w.p, e);
    out << buf;
  }
  if (!out) throw SolverError("failed while writing " + path.string());
}

Snapshot read_snapshot_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw SolverError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,rho", 0) != 0)
    throw SolverError(path.string() + ": missing snapshot header");
  Snapshot s;
  size_t ln = 1;
  while (std::getline(in, line)) {
    ++ln;
    if (line.empty()) continue;
    double x, rho, u, p, e;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &x, &rho, &u, &p, &e) != 5)
      throw SolverError(path.string() + ": malformed row at line " + std::to_string(ln));
    s.x.push_back(x);
    s.rho.push_back(rho);
    s.u.push_back(u);
    s.p.push_back(p);
    s.e.push_back(e);
  }
  return s;
}

void write_minima_csv(const fs::path& path, std::span<const MinimaRow> rows) {
  std::ofstream out(path);
  if (!out) throw SolverError("cannot open " + path.string() + " for writing");
  out << "step,t,min_rho,min_e\n";
  char buf[200];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g\n", r.step, r.t, r.min_rho, r.min_e);
    out << buf;
  }
  if (!out) throw SolverError("failed while writing " + path.string());
}

// ---------------------------------------------------------------------------
// Reference cache.

fs::path cache_directory() {
  const char* env = std::getenv("CWENO_CACHE_DIR");
  fs::path dir = env && *env ? fs::path(env) : fs::path(".cweno-cache");
  std::error_code ec;
  fs::create_directories(dir, ec);
  return dir;
}

namespace {

fs::path cache_path(const std::string& key) {
  std::string stem;
  for (char c : key) {
    if (stem.size() >= 48) break;
    stem += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') ? c : '-';
  }
  char hash[24];
  std::snprintf(hash, sizeof hash, "-%016zx", std::hash<std::string>{}(key));
  return cache_directory() / (stem + hash + ".ref");
}

}  // namespace

std::optional<std::vector<ConservedState>> load_cached_reference(const std::string& key,
                                                                 size_t expected_cells) {
  std::ifstream in(cache_path(key));
  if (!in) return std::nullopt;
  std::string line;
  if (!std::getline(in, line) || line != "# " + key) return std::nullopt;
  size_t count = 0;
  if (!(in >> count) || count != expected_cells) return std::nullopt;
  std::vector<ConservedState> data(count);
  for (auto& q : data)
    if (!(in >> q.rho >> q.mom >> q.ene)) return std::nullopt;
  return data;
}

void store_cached_reference(const std::string& key, std::span<const ConservedState> data) {
  const fs::path final_path = cache_path(key);
  const fs::path tmp = final_path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw SolverError("cannot open " + tmp.string() + " for writing");
    out << "# " << key << "\n" << data.size() << "\n";
    char buf[120];
    for (const auto& q : data) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", q.rho, q.mom, q.ene);
      out << buf;
    }
    if (!out) throw SolverError("failed while writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, final_path, ec);
  if (ec) throw SolverError("cannot move " + tmp.string() + " into place: " + ec.message());
}

}  // namespace cweno
