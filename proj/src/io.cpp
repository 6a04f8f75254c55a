#include "micromorphx/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "micromorphx/dynamics.hpp"

namespace mmx {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

}  // namespace

void write_ledger_csv(const std::string& path, const EnergyLedger& ledger) {
  std::ofstream out = open_or_throw(path);
  out << "t,kinetic,elastic,microstrain,dislocation,total,power,work,drift\n";
  for (const EnergyRow& r : ledger.rows) {
    out << format_full(r.t) << ',' << format_full(r.kinetic) << ',' << format_full(r.elastic)
        << ',' << format_full(r.microstrain) << ',' << format_full(r.dislocation) << ','
        << format_full(r.total) << ',' << format_full(r.power) << ',' << format_full(r.work)
        << ',' << format_full(r.drift) << '\n';
  }
}

void write_constants_csv(const std::string& path, const std::vector<ConstantEstimate>& rows) {
  std::ofstream out = open_or_throw(path);
  out << "spec,grid,constant,lambda_min,iterations,classification\n";
  for (const ConstantEstimate& r : rows) {
    out << tag_name(r.tag) << ',' << r.n[0] << 'x' << r.n[1] << 'x' << r.n[2] << ','
        << format_full(r.constant) << ',' << format_full(r.lambda_min) << ',' << r.iterations
        << ',' << r.classification << '\n';
  }
}

void write_dispersion_csv(const std::string& path, const std::vector<DispersionPoint>& points) {
  std::ofstream out = open_or_throw(path);
  out << "k_index,|k|,kx,ky,kz";
  for (int b = 1; b <= 12; ++b) out << ",omega_" << b;
  out << '\n';
  for (const DispersionPoint& p : points) {
    out << p.index << ',' << format_full(p.k_mag) << ',' << format_full(p.k[0]) << ','
        << format_full(p.k[1]) << ',' << format_full(p.k[2]);
    for (double w : p.omega) out << ',' << format_full(w);
    out << '\n';
  }
}

void write_snapshot(const std::string& path, const SystemMatrices& sm, const State& state) {
  const Grid& g = sm.grid;
  const int nn = g.n_nodes();

  // Energy density at the Gauss points, then shape-weighted nodal averages.
  const ChannelWeights W = sm.material.weights();
  const QpField Gu = discrete_Grad(g, state.u);
  const QpField Pv = qp_values(g, state.P, 9);
  const QpField CP = discrete_Curl(g, state.P);
  const QpField vv = qp_values(g, state.v, 3);
  const QpField Pd = qp_values(g, state.Pdot, 9);

  const ElementTables tables = element_tables(g);
  VectorXd num = VectorXd::Zero(nn), den = VectorXd::Zero(nn);
  for (int cell = 0; cell < g.n_cells(); ++cell) {
    for (int q = 0; q < 8; ++q) {
      const int at = (cell * 8 + q);
      Vec9 eps, p9, c9;
      Vec3 v3;
      Vec9 pd9;
      for (int c = 0; c < 9; ++c) {
        eps[c] = Gu.data[at * 9 + c] - Pv.data[at * 9 + c];
        p9[c] = Pv.data[at * 9 + c];
        c9[c] = CP.data[at * 9 + c];
        pd9[c] = Pd.data[at * 9 + c];
      }
      for (int c = 0; c < 3; ++c) v3[c] = vv.data[at * 3 + c];
      const double e = 0.5 * (v3.squaredNorm() + pd9.squaredNorm()) +
                       0.5 * (eps.dot(W.C * eps) + p9.dot(W.H * p9) + c9.dot(W.L * c9));
      for (int a = 0; a < 8; ++a) {
        const int node = g.cell_node(cell, a);
        num[node] += tables.N[q][a] * e;
        den[node] += tables.N[q][a];
      }
    }
  }

  std::ofstream out = open_or_throw(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "relaxed micromorphic state t=" << format_full(state.t) << "\n";
  out << "ASCII\n";
  out << "DATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << g.npx() << ' ' << g.npy() << ' ' << g.npz() << '\n';
  out << "ORIGIN 0 0 0\n";
  out << "SPACING " << format_full(g.hx()) << ' ' << format_full(g.hy()) << ' '
      << format_full(g.hz()) << '\n';
  out << "POINT_DATA " << nn << '\n';

  out << "VECTORS u double\n";
  for (int node = 0; node < nn; ++node)
    out << format_full(state.u[3 * node]) << ' ' << format_full(state.u[3 * node + 1]) << ' '
        << format_full(state.u[3 * node + 2]) << '\n';

  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      out << "SCALARS P" << r + 1 << c + 1 << " double 1\n";
      out << "LOOKUP_TABLE default\n";
      for (int node = 0; node < nn; ++node)
        out << format_full(state.P[9 * node + 3 * r + c]) << '\n';
    }

  out << "SCALARS energy_density double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (int node = 0; node < nn; ++node) out << format_full(num[node] / den[node]) << '\n';
}

void write_manifest(const std::string& path, const ScenarioConfig& config, unsigned long seed,
                    int threads) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json echo = nlohmann::ordered_json::object();
  for (const auto& [key, value] : config.raw) echo[key] = value;
  j["config"] = echo;
  j["seed"] = seed;
  j["threads"] = threads;
  j["versions"] = {
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                    "." + std::to_string(EIGEN_MINOR_VERSION)},
      {"compiler", __VERSION__},
  };
  std::ofstream out = open_or_throw(path);
  out << j.dump(2) << '\n';
}

}  // namespace mmx
