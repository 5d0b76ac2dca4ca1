#include "ionshuttle/qm/wavefunction.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "ionshuttle/qm/fft.hpp"

namespace ionshuttle::qm {

namespace {

double norm_impl(const std::vector<cplx>& amp, double cell) {
  double s = 0.0;
  for (const auto& a : amp) s += std::norm(a);
  return std::sqrt(s * cell);
}

double edge_impl_1d(const std::vector<cplx>& amp, std::size_t n,
                    std::size_t cells) {
  double peak = 0.0, edge = 0.0;
  for (const auto& a : amp) peak = std::max(peak, std::abs(a));
  if (peak == 0.0) return 0.0;
  for (std::size_t c = 0; c < cells && c < n; ++c) {
    edge = std::max(edge, std::abs(amp[c]));
    edge = std::max(edge, std::abs(amp[n - 1 - c]));
  }
  return edge / peak;
}

constexpr char kMagic[8] = {'I', 'S', 'H', 'W', 'F', 'N', '1', '\0'};

void write_header(std::ofstream& os, std::uint32_t ndim) {
  os.write(kMagic, sizeof(kMagic));
  std::uint32_t version = 1;
  os.write(reinterpret_cast<const char*>(&version), sizeof(version));
  os.write(reinterpret_cast<const char*>(&ndim), sizeof(ndim));
}

void write_axis(std::ofstream& os, const Grid1D& g) {
  std::uint64_t n = g.n;
  os.write(reinterpret_cast<const char*>(&n), sizeof(n));
  os.write(reinterpret_cast<const char*>(&g.min), sizeof(g.min));
  os.write(reinterpret_cast<const char*>(&g.dx), sizeof(g.dx));
}

std::uint32_t read_header(std::ifstream& is) {
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("checkpoint: bad magic");
  std::uint32_t version = 0, ndim = 0;
  is.read(reinterpret_cast<char*>(&version), sizeof(version));
  is.read(reinterpret_cast<char*>(&ndim), sizeof(ndim));
  if (!is || version != 1)
    throw std::runtime_error("checkpoint: unsupported version");
  return ndim;
}

Grid1D read_axis(std::ifstream& is) {
  std::uint64_t n = 0;
  Grid1D g;
  is.read(reinterpret_cast<char*>(&n), sizeof(n));
  is.read(reinterpret_cast<char*>(&g.min), sizeof(g.min));
  is.read(reinterpret_cast<char*>(&g.dx), sizeof(g.dx));
  if (!is) throw std::runtime_error("checkpoint: truncated axis");
  g.n = static_cast<std::size_t>(n);
  return g;
}

void write_payload(std::ofstream& os, double t, const std::vector<cplx>& amp) {
  os.write(reinterpret_cast<const char*>(&t), sizeof(t));
  std::uint64_t count = amp.size();
  os.write(reinterpret_cast<const char*>(&count), sizeof(count));
  os.write(reinterpret_cast<const char*>(amp.data()),
           static_cast<std::streamsize>(amp.size() * sizeof(cplx)));
}

void read_payload(std::ifstream& is, double& t, std::vector<cplx>& amp,
                  std::size_t expected) {
  is.read(reinterpret_cast<char*>(&t), sizeof(t));
  std::uint64_t count = 0;
  is.read(reinterpret_cast<char*>(&count), sizeof(count));
  if (!is || count != expected)
    throw std::runtime_error("checkpoint: amplitude count mismatch");
  amp.resize(expected);
  is.read(reinterpret_cast<char*>(amp.data()),
          static_cast<std::streamsize>(expected * sizeof(cplx)));
  if (!is) throw std::runtime_error("checkpoint: truncated payload");
}

}  // namespace

double WaveFunction1D::norm() const { return norm_impl(amp, grid.dx); }

void WaveFunction1D::normalize() {
  const double nrm = norm();
  if (nrm == 0.0) throw std::runtime_error("normalize: zero state");
  for (auto& a : amp) a /= nrm;
}

double WaveFunction1D::edge_fraction(std::size_t cells) const {
  return edge_impl_1d(amp, grid.n, cells);
}

double WaveFunction2D::norm() const {
  return norm_impl(amp, grid.q.dx * grid.r.dx);
}

void WaveFunction2D::normalize() {
  const double nrm = norm();
  if (nrm == 0.0) throw std::runtime_error("normalize: zero state");
  for (auto& a : amp) a /= nrm;
}

double WaveFunction2D::edge_fraction(std::size_t cells) const {
  double peak = 0.0, edge = 0.0;
  for (const auto& a : amp) peak = std::max(peak, std::abs(a));
  if (peak == 0.0) return 0.0;
  const std::size_t nq = grid.q.n, nr = grid.r.n;
  for (std::size_t iq = 0; iq < nq; ++iq)
    for (std::size_t ir = 0; ir < nr; ++ir) {
      const bool on_edge = iq < cells || iq >= nq - cells || ir < cells ||
                           ir >= nr - cells;
      if (on_edge) edge = std::max(edge, std::abs(at(iq, ir)));
    }
  return edge / peak;
}

cplx overlap(const WaveFunction1D& a, const WaveFunction1D& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("overlap: grid mismatch");
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.amp.size(); ++i)
    s += std::conj(a.amp[i]) * b.amp[i];
  return s * a.grid.dx;
}

double fidelity(const WaveFunction1D& a, const WaveFunction1D& b) {
  return std::abs(overlap(a, b));
}

double fidelity(const WaveFunction2D& a, const WaveFunction2D& b) {
  if (!(a.grid == b.grid))
    throw std::invalid_argument("fidelity: grid mismatch");
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.amp.size(); ++i)
    s += std::conj(a.amp[i]) * b.amp[i];
  return std::abs(s) * a.grid.q.dx * a.grid.r.dx;
}

double position_mean(const WaveFunction1D& psi) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < psi.amp.size(); ++i) {
    const double w = std::norm(psi.amp[i]);
    num += w * psi.grid.x(i);
    den += w;
  }
  return num / den;
}

void translate_spectral(WaveFunction1D& psi, double shift) {
  Fft fft(psi.grid.n);
  fft.forward(psi.amp.data());
  for (std::size_t i = 0; i < psi.grid.n; ++i) {
    const double phi = -psi.grid.k(i) * shift;
    psi.amp[i] *= cplx(std::cos(phi), std::sin(phi));
  }
  fft.inverse(psi.amp.data());
}

void save_checkpoint(const WaveFunction1D& psi, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("checkpoint: cannot open " + path);
  write_header(os, 1);
  write_axis(os, psi.grid);
  write_payload(os, psi.t, psi.amp);
  if (!os) throw std::runtime_error("checkpoint: write failed");
}

void save_checkpoint(const WaveFunction2D& psi, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("checkpoint: cannot open " + path);
  write_header(os, 2);
  write_axis(os, psi.grid.q);
  write_axis(os, psi.grid.r);
  write_payload(os, psi.t, psi.amp);
  if (!os) throw std::runtime_error("checkpoint: write failed");
}

WaveFunction1D load_checkpoint_1d(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  if (read_header(is) != 1)
    throw std::runtime_error("checkpoint: not a 1D state");
  WaveFunction1D psi(read_axis(is));
  read_payload(is, psi.t, psi.amp, psi.grid.n);
  return psi;
}

WaveFunction2D load_checkpoint_2d(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  if (read_header(is) != 2)
    throw std::runtime_error("checkpoint: not a 2D state");
  Grid2D g;
  g.q = read_axis(is);
  g.r = read_axis(is);
  WaveFunction2D psi(g);
  read_payload(is, psi.t, psi.amp, g.size());
  return psi;
}

}  // namespace ionshuttle::qm
