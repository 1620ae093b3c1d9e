#pragma once

#include <string>

#include "flowcomp/field.hpp"
#include "flowcomp/image.hpp"

namespace flowcomp {

/// Decodes a PNG or JPEG file; 8-bit channels map to [0,1] by dividing by
/// 255 (16-bit PNGs are reduced to 8 bits first). Throws FileNotFoundError,
/// UnsupportedFormatError or CorruptDataError.
RgbImage load_image(const std::string& path);

/// Writes an 8-bit grayscale PNG: values clamped to [0,1], scaled by 255,
/// rounded to nearest. The encoder configuration is pinned (filter NONE,
/// zlib level 6) so identical fields produce identical bytes.
void write_gray_png(const ScalarField& f, const std::string& path);

/// Writes an 8-bit RGB PNG with the same pinned encoder configuration.
void write_rgb_png(const RgbImage& img, const std::string& path);

// Raw float container, little-endian float32 planes, row-major.
// Scalar file:  magic "FCF1" | u32 width | u32 height | u32 reserved=0 | plane
// Flow file:    magic "FCF2" | u32 width | u32 height | u32 channels   | planes
inline constexpr char kFcfScalarMagic[4] = {'F', 'C', 'F', '1'};
inline constexpr char kFcfFlowMagic[4] = {'F', 'C', 'F', '2'};

void write_fcf_scalar(const ScalarField& f, const std::string& path);
ScalarField read_fcf_scalar(const std::string& path);

/// Writes the planes of a multi-channel field file ("FCF2"); all planes
/// must share one shape. A flow field has channels = 2 (u then v); the
/// assembled input tensor uses channels = 3 (S, u, v).
void write_fcf_planes(const std::vector<ScalarField>& planes,
                      const std::string& path);
std::vector<ScalarField> read_fcf_planes(const std::string& path);

/// True if the file starts with the PNG signature.
bool is_png_file(const std::string& path);

}  // namespace flowcomp
