#include "aerodet/shearlet_bank.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace aerodet {
namespace {

// Centre of the finest radial band, in cycles per sample (Nyquist = 0.5).
constexpr double kFinestBandCenter = 0.4;

// Meyer auxiliary polynomial: 0 below 0, 1 above 1, smooth in between,
// with v(x) + v(1 - x) = 1.
double meyer_aux(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * x * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x);
}

// Low-pass profile: 1 up to b, smooth fall to 0 at 2b.
double meyer_lowpass(double r, double b) {
  if (r <= b) return 1.0;
  if (r >= 2.0 * b) return 0.0;
  return std::cos(0.5 * std::numbers::pi * meyer_aux(r / b - 1.0));
}

// Angular bump on [-1, 1]; unit-spaced copies form a squared partition of unity.
double meyer_bump(double u) {
  u = std::abs(u);
  if (u >= 1.0) return 0.0;
  return std::cos(0.5 * std::numbers::pi * meyer_aux(u));
}

struct ConeSlot {
  bool horizontal = true;
  double center = 0.0;  // shear slope at the wedge centre
  double width = 2.0;   // slope spacing between neighbouring shears
};

ConeSlot cone_slot(const ShearletSpec& spec, int d) {
  const int horizontal_count = (spec.dirs_per_scale + 1) / 2;
  const int vertical_count = spec.dirs_per_scale / 2;
  ConeSlot slot;
  int index = d - 1;
  int count = horizontal_count;
  if (index >= horizontal_count) {
    slot.horizontal = false;
    index -= horizontal_count;
    count = vertical_count;
  }
  slot.width = 2.0 / count;
  slot.center = -1.0 + slot.width * (index + 0.5);
  return slot;
}

void check_indices(const ShearletSpec& spec, int s, int d) {
  if (s < 1 || s > spec.num_scales)
    throw std::invalid_argument("scale index " + std::to_string(s) + " out of range [1, " +
                                std::to_string(spec.num_scales) + "]");
  if (d < 1 || d > spec.dirs_per_scale)
    throw std::invalid_argument("direction index " + std::to_string(d) + " out of range [1, " +
                                std::to_string(spec.dirs_per_scale) + "]");
}

int wrap(int i, int n) { return ((i % n) + n) % n; }

}  // namespace

void ShearletSpec::validate() const {
  if (num_scales < 1) throw std::invalid_argument("num_scales must be >= 1");
  if (dirs_per_scale < 1) throw std::invalid_argument("dirs_per_scale must be >= 1");
  if (kernel_size < 3 || kernel_size % 2 == 0)
    throw std::invalid_argument("kernel_size must be odd and >= 3");
  if (freq_grid < 4 * kernel_size)
    throw std::invalid_argument("freq_grid must be at least 4 * kernel_size");
}

const SpatialFilter& FilterBank::at(int scale, int direction) const {
  check_indices(spec, scale, direction);
  return filters[static_cast<std::size_t>(scale - 1) * spec.dirs_per_scale + (direction - 1)];
}

double band_center(const ShearletSpec& spec, int s) {
  check_indices(spec, s, 1);
  // Coronae shrink by sqrt(2) per coarser scale.
  return kFinestBandCenter * std::pow(2.0, 0.5 * (s - spec.num_scales));
}

double designed_orientation_deg(const ShearletSpec& spec, int d) {
  check_indices(spec, 1, d);
  const ConeSlot slot = cone_slot(spec, d);
  const double rad = slot.horizontal ? std::atan2(slot.center, 1.0)
                                     : std::atan2(1.0, slot.center);
  double deg = rad * 180.0 / std::numbers::pi;
  if (deg < 0.0) deg += 180.0;
  if (deg >= 180.0) deg -= 180.0;
  return deg;
}

FrequencySpectrum build_cone_shearlet_spectrum(const ShearletSpec& spec, int s, int d) {
  spec.validate();
  check_indices(spec, s, d);

  const int n = spec.freq_grid;
  const int half = n / 2;
  const double b = band_center(spec, s);
  const ConeSlot slot = cone_slot(spec, d);

  FrequencySpectrum out;
  out.size = n;
  out.scale = s;
  out.direction = d;
  out.grid.assign(static_cast<std::size_t>(n) * n, {0.0, 0.0});

  for (int row = 0; row < n; ++row) {
    const double ky = static_cast<double>(row - half) / n;
    for (int col = 0; col < n; ++col) {
      const double kx = static_cast<double>(col - half) / n;
      const double r = std::max(std::abs(kx), std::abs(ky));
      const double outer = meyer_lowpass(r, b);
      const double inner = meyer_lowpass(r, 0.5 * b);
      const double radial = std::sqrt(std::max(outer * outer - inner * inner, 0.0));
      if (radial == 0.0) continue;

      const double along = slot.horizontal ? kx : ky;
      const double across = slot.horizontal ? ky : kx;
      if (along == 0.0) continue;
      const double angular = meyer_bump((across / along - slot.center) / slot.width);
      out.at(row, col) = radial * angular;
    }
  }

  // Hermitian symmetrisation so the spatial kernel is exactly real.
  const auto mirror = [&](int i) { return wrap(2 * half - i, n); };
  std::vector<std::complex<double>> sym(out.grid.size());
  for (int row = 0; row < n; ++row)
    for (int col = 0; col < n; ++col)
      sym[static_cast<std::size_t>(row) * n + col] =
          0.5 * (out.at(row, col) + std::conj(out.at(mirror(row), mirror(col))));
  out.grid = std::move(sym);
  return out;
}

SpatialFilter spectrum_to_kernel(const FrequencySpectrum& spectrum, int kernel_size,
                                 bool normalize) {
  const int n = spectrum.size;
  if (n <= 0 || spectrum.grid.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("spectrum_to_kernel: malformed spectrum");
  if (kernel_size < 1 || kernel_size % 2 == 0)
    throw std::invalid_argument("spectrum_to_kernel: kernel_size must be odd");
  if (kernel_size > n)
    throw std::invalid_argument("spectrum_to_kernel: kernel_size exceeds the frequency grid");

  const int half = n / 2;
  std::vector<std::complex<double>> unshifted(spectrum.grid.size());
  for (int row = 0; row < n; ++row)
    for (int col = 0; col < n; ++col)
      unshifted[static_cast<std::size_t>(wrap(row - half, n)) * n + wrap(col - half, n)] =
          spectrum.at(row, col);

  const auto spatial = detail::dft2d(unshifted, n, detail::FftDirection::Inverse);
  const double scale = 1.0 / (static_cast<double>(n) * n);

  SpatialFilter out;
  out.scale = spectrum.scale;
  out.direction = spectrum.direction;
  out.kernel.size = kernel_size;
  out.kernel.weights.resize(static_cast<std::size_t>(kernel_size) * kernel_size);
  const int r = kernel_size / 2;
  for (int a = 0; a < kernel_size; ++a)
    for (int b = 0; b < kernel_size; ++b)
      out.kernel.weights[static_cast<std::size_t>(a) * kernel_size + b] =
          spatial[static_cast<std::size_t>(wrap(a - r, n)) * n + wrap(b - r, n)].real() * scale;

  if (normalize) {
    auto& w = out.kernel.weights;
    const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
    for (double& v : w) v -= mean;
    const double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
    if (norm == 0.0)
      throw std::invalid_argument("spectrum_to_kernel: cannot normalise a constant kernel");
    for (double& v : w) v /= norm;
  }
  return out;
}

FilterBank build_bank(const ShearletSpec& spec) {
  spec.validate();
  FilterBank bank;
  bank.spec = spec;
  bank.filters.reserve(static_cast<std::size_t>(spec.filter_count()));
  for (int s = 1; s <= spec.num_scales; ++s)
    for (int d = 1; d <= spec.dirs_per_scale; ++d)
      bank.filters.push_back(spectrum_to_kernel(build_cone_shearlet_spectrum(spec, s, d),
                                                spec.kernel_size, spec.normalize));
  return bank;
}

MagnitudeGrid frequency_response(const Kernel& kernel, int grid) {
  if (kernel.size < 1 || kernel.weights.size() != static_cast<std::size_t>(kernel.size) * kernel.size)
    throw std::invalid_argument("frequency_response: malformed kernel");
  if (grid < kernel.size)
    throw std::invalid_argument("frequency_response: grid smaller than the kernel");

  std::vector<std::complex<double>> padded(static_cast<std::size_t>(grid) * grid);
  for (int a = 0; a < kernel.size; ++a)
    for (int b = 0; b < kernel.size; ++b)
      padded[static_cast<std::size_t>(a) * grid + b] = kernel.at(a, b);

  const auto spectrum = detail::dft2d(padded, grid, detail::FftDirection::Forward);
  const int half = grid / 2;
  MagnitudeGrid out;
  out.size = grid;
  out.values.resize(padded.size());
  for (int row = 0; row < grid; ++row)
    for (int col = 0; col < grid; ++col)
      out.values[static_cast<std::size_t>(row) * grid + col] = std::abs(
          spectrum[static_cast<std::size_t>(wrap(row - half, grid)) * grid + wrap(col - half, grid)]);
  return out;
}

MagnitudeGrid frequency_response(const SpatialFilter& filter, int grid) {
  return frequency_response(filter.kernel, grid);
}

SpectralPeak spectral_peak(const MagnitudeGrid& response) {
  const int n = response.size;
  const int half = n / 2;
  double best = -1.0;
  int best_kx = 0, best_ky = 0;
  for (int row = 0; row < n; ++row) {
    const int ky = row - half;
    if (ky < 0) continue;
    for (int col = 0; col < n; ++col) {
      const int kx = col - half;
      if (ky == 0 && kx < 0) continue;
      if (response.at(row, col) > best) {
        best = response.at(row, col);
        best_kx = kx;
        best_ky = ky;
      }
    }
  }
  SpectralPeak peak;
  peak.radius = std::hypot(best_kx, best_ky) / n;
  double deg = std::atan2(best_ky, best_kx) * 180.0 / std::numbers::pi;
  if (deg >= 180.0) deg -= 180.0;
  peak.orientation_deg = deg;
  return peak;
}

nlohmann::json to_json(const ShearletSpec& spec) {
  return {{"num_scales", spec.num_scales},
          {"dirs_per_scale", spec.dirs_per_scale},
          {"kernel_size", spec.kernel_size},
          {"freq_grid", spec.freq_grid},
          {"normalize", spec.normalize}};
}

nlohmann::json to_json(const FilterBank& bank) {
  nlohmann::json filters = nlohmann::json::array();
  for (const auto& f : bank.filters)
    filters.push_back(
        {{"scale", f.scale}, {"direction", f.direction}, {"weights", f.kernel.weights}});
  return {{"spec", to_json(bank.spec)}, {"filters", std::move(filters)}};
}

}  // namespace aerodet
