#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <json.hpp>

namespace aerodet {

struct ShearletSpec {
  int num_scales = 3;
  int dirs_per_scale = 6;
  int kernel_size = 5;
  int freq_grid = 64;
  bool normalize = true;

  // Throws std::invalid_argument when the settings are unusable.
  void validate() const;
  int filter_count() const { return num_scales * dirs_per_scale; }

  bool operator==(const ShearletSpec&) const = default;
};

// Square DC-centred frequency window. Sample (row, col) sits at frequency
// (col - size/2, row - size/2) / size cycles per sample, row = vertical.
struct FrequencySpectrum {
  int size = 0;
  int scale = 0;
  int direction = 0;
  std::vector<std::complex<double>> grid;

  const std::complex<double>& at(int row, int col) const {
    return grid[static_cast<std::size_t>(row) * size + col];
  }
  std::complex<double>& at(int row, int col) {
    return grid[static_cast<std::size_t>(row) * size + col];
  }
};

// Odd-sized square kernel, row-major.
struct Kernel {
  int size = 0;
  std::vector<double> weights;

  double at(int row, int col) const {
    return weights[static_cast<std::size_t>(row) * size + col];
  }
};

struct SpatialFilter {
  int scale = 0;
  int direction = 0;
  Kernel kernel;
};

struct FilterBank {
  ShearletSpec spec;
  // Ordered (s=1, d=1..D), (s=2, d=1..D), ...
  std::vector<SpatialFilter> filters;

  const SpatialFilter& at(int scale, int direction) const;
};

// DC-centred magnitude array of a kernel's discrete Fourier transform.
struct MagnitudeGrid {
  int size = 0;
  std::vector<double> values;

  double at(int row, int col) const {
    return values[static_cast<std::size_t>(row) * size + col];
  }
};

// Location of the strongest response in the upper half plane
// (ky > 0, or ky == 0 and kx >= 0); the lower half mirrors it for real
// kernels.
struct SpectralPeak {
  double radius = 0.0;           // cycles per sample
  double orientation_deg = 0.0;  // in [0, 180)
};

// Frequency window of scale s and direction d (both 1-based) on the
// cone-adapted tiling: radial Meyer band times a Meyer bump in the shear
// (slope) variable of the owning cone. The first ceil(D/2) directions
// live on the horizontal cone, the rest on the vertical cone, each in
// order of increasing shear.
FrequencySpectrum build_cone_shearlet_spectrum(const ShearletSpec& spec, int s, int d);

// Inverse DFT, real part, centre crop, then optional zero-mean/unit-L2.
SpatialFilter spectrum_to_kernel(const FrequencySpectrum& spectrum, int kernel_size,
                                 bool normalize);

FilterBank build_bank(const ShearletSpec& spec);

MagnitudeGrid frequency_response(const SpatialFilter& filter, int grid);
MagnitudeGrid frequency_response(const Kernel& kernel, int grid);

SpectralPeak spectral_peak(const MagnitudeGrid& response);

// Orientation in [0, 180) degrees of the centre of the wedge for direction
// d, i.e. where the spectral peak is designed to fall.
double designed_orientation_deg(const ShearletSpec& spec, int d);

// Centre radius (cycles per sample, max-norm) of the radial band for scale s.
double band_center(const ShearletSpec& spec, int s);

nlohmann::json to_json(const ShearletSpec& spec);
nlohmann::json to_json(const FilterBank& bank);

}  // namespace aerodet
