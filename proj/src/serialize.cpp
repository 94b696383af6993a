#include "holonet/serialize.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "json.hpp"

namespace holonet {

using nlohmann::json;

namespace {

void write_blob(std::ofstream& out, const std::vector<cplx>& data) {
  static_assert(sizeof(double) == 8);
  for (const auto& v : data) {
    const double re = v.real(), im = v.imag();
    out.write(reinterpret_cast<const char*>(&re), 8);
    out.write(reinterpret_cast<const char*>(&im), 8);
  }
}

std::vector<cplx> read_blob(std::ifstream& in, std::int64_t count) {
  std::vector<cplx> data(count);
  for (auto& v : data) {
    double re = 0, im = 0;
    in.read(reinterpret_cast<char*>(&re), 8);
    in.read(reinterpret_cast<char*>(&im), 8);
    v = {re, im};
  }
  return data;
}

}  // namespace

void save_network(const HoloNet& n, const std::string& path) {
  json header;
  header["format"] = "hitns-1";
  header["L"] = n.layout.L;
  header["surface_col"] = n.layout.surface_col;
  header["d"] = n.layout.d;
  header["chi"] = n.layout.chi;
  header["column_heights"] = n.layout.column_heights;
  header["canonical"] = n.layout.canonical;
  header["center_row"] = n.center_row;

  json tensors = json::array();
  std::int64_t offset = 0;
  for (int c = 1; c <= n.L(); ++c)
    for (int h = 1; h <= n.height(c); ++h) {
      const DenseTensor& t = n.at(c, h);
      json legs = json::array();
      for (const auto& lg : t.legs()) legs.push_back({{"name", lg.name}, {"dim", lg.dim}});
      tensors.push_back({{"col", c}, {"row", h}, {"legs", legs}, {"offset", offset}});
      offset += t.size() * 16;
    }
  header["tensors"] = tensors;

  std::ofstream out(path, std::ios::binary);
  require(out.good(), "io-error", "cannot open " + path + " for writing");
  const std::string head = header.dump();
  out << head << '\n';
  for (int c = 1; c <= n.L(); ++c)
    for (int h = 1; h <= n.height(c); ++h) write_blob(out, n.at(c, h).data());
  require(out.good(), "io-error", "write failed for " + path);
}

HoloNet load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "io-error", "cannot open " + path);
  std::string head;
  std::getline(in, head);
  json header = json::parse(head);
  require(header.at("format") == "hitns-1", "io-error", "unknown format tag");

  HoloNet n;
  n.layout.L = header.at("L");
  n.layout.surface_col = header.at("surface_col");
  n.layout.d = header.at("d");
  n.layout.chi = header.at("chi");
  n.layout.column_heights = header.at("column_heights").get<std::vector<int>>();
  n.layout.canonical = header.at("canonical");
  n.center_row = header.at("center_row");
  n.cols.resize(n.layout.L);
  for (int c = 1; c <= n.layout.L; ++c) n.cols[c - 1].resize(n.layout.height(c));

  for (const auto& entry : header.at("tensors")) {
    std::vector<Leg> legs;
    std::int64_t count = 1;
    for (const auto& lg : entry.at("legs")) {
      legs.push_back({lg.at("name"), lg.at("dim")});
      count *= static_cast<std::int64_t>(lg.at("dim"));
    }
    std::vector<cplx> data = read_blob(in, count);
    require(in.good(), "io-error", "truncated tensor blob in " + path);
    n.at(entry.at("col"), entry.at("row")) = DenseTensor(legs, std::move(data));
  }
  return n;
}

void save_statevector(const StateVector& psi, const std::string& path) {
  json sidecar;
  sidecar["L"] = psi.L;
  sidecar["d"] = psi.d;
  sidecar["norm"] = psi.norm();
  std::ofstream meta(path + ".json");
  require(meta.good(), "io-error", "cannot open " + path + ".json");
  meta << sidecar.dump(2) << '\n';

  std::ofstream out(path, std::ios::binary);
  require(out.good(), "io-error", "cannot open " + path);
  write_blob(out, psi.amplitudes);
}

StateVector load_statevector(const std::string& path) {
  std::ifstream meta(path + ".json");
  require(meta.good(), "io-error", "missing sidecar for " + path);
  json sidecar = json::parse(meta);
  const int L = sidecar.at("L");
  const std::int64_t d = sidecar.at("d");
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "io-error", "cannot open " + path);
  std::int64_t count = 1;
  for (int i = 0; i < L; ++i) count *= d;
  std::vector<cplx> data = read_blob(in, count);
  require(in.good(), "io-error", "truncated statevector blob");
  return StateVector::from_amplitudes(std::move(data), L, d);
}

}  // namespace holonet
