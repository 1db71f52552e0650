#ifndef GCM_IO_HPP
#define GCM_IO_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include "gcm/grid.hpp"
#include "gcm/time_series.hpp"

namespace gcm {

inline constexpr std::uint16_t kCubeFormatVersion = 1;
inline constexpr std::uint16_t kFieldFormatVersion = 1;

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// "GCMC", u16 version, u32 nxd nyd nt, f64 dt dx dy plane_z t0 x0 y0,
/// then nt*nyd*nxd samples, t-major. All little-endian.
void write_cube(const std::string& path, const TimeSeriesCube& cube);
TimeSeriesCube read_cube(const std::string& path);

/// "GCMF", u16 version, u32 nx ny nz, f64 dx dy dz x0 y0 z0, then the
/// values in storage order (z fastest).
void write_field(const std::string& path, const ScalarField& field);
ScalarField read_field(const std::string& path);

std::string encode_cube(const TimeSeriesCube& cube);
TimeSeriesCube decode_cube(const std::string& bytes);
std::string encode_field(const ScalarField& field);
ScalarField decode_field(const std::string& bytes);

}  // namespace gcm

#endif
