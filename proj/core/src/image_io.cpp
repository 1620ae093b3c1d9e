#include "flowcomp/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <vector>

#include <jpeglib.h>

#include "flowcomp/errors.hpp"

namespace flowcomp {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
  FilePtr fp(std::fopen(path.c_str(), mode));
  if (!fp) throw FileNotFoundError(path);
  return fp;
}

void png_error_fn(png_structp png, png_const_charp msg) {
  (void)msg;
  std::longjmp(png_jmpbuf(png), 1);
}
void png_warning_fn(png_structp, png_const_charp) {}

RgbImage decode_png(std::FILE* fp, const std::string& path) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                           png_error_fn, png_warning_fn);
  if (!png) throw CorruptDataError("png init failed: " + path);
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw CorruptDataError("png init failed: " + path);
  }
  std::vector<png_bytep> row_ptrs;
  std::vector<uint8_t> pixels;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw CorruptDataError("corrupt PNG data: " + path);
  }
  png_init_io(png, fp);
  png_read_info(png, info);

  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const size_t stride = png_get_rowbytes(png, info);
  pixels.resize(stride * h);
  row_ptrs.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) row_ptrs[y] = pixels.data() + y * stride;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  if (w < 2 || h < 2)
    throw InvalidArgumentError("image too small (< 2x2): " + path);
  RgbImage img(static_cast<int>(w), static_cast<int>(h));
  for (png_uint_32 y = 0; y < h; ++y)
    for (png_uint_32 x = 0; x < w; ++x) {
      const uint8_t* px = pixels.data() + y * stride + x * 3;
      const size_t i = img.index(static_cast<int>(x), static_cast<int>(y));
      img.r[i] = px[0] / 255.0;
      img.g[i] = px[1] / 255.0;
      img.b[i] = px[2] / 255.0;
    }
  return img;
}

struct JpegErrorMgr {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
  std::longjmp(err->jump, 1);
}

RgbImage decode_jpeg(std::FILE* fp, const std::string& path) {
  jpeg_decompress_struct cinfo;
  JpegErrorMgr jerr;
  cinfo.err = jpeg_std_error(&jerr.pub);
  jerr.pub.error_exit = jpeg_error_exit;
  jerr.pub.output_message = [](j_common_ptr) {};

  std::vector<uint8_t> row;
  if (setjmp(jerr.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw CorruptDataError("corrupt JPEG data: " + path);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, fp);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);

  const int w = static_cast<int>(cinfo.output_width);
  const int h = static_cast<int>(cinfo.output_height);
  if (w < 2 || h < 2) {
    jpeg_destroy_decompress(&cinfo);
    throw InvalidArgumentError("image too small (< 2x2): " + path);
  }
  RgbImage img(w, h);
  row.resize(static_cast<size_t>(w) * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    const int y = static_cast<int>(cinfo.output_scanline);
    uint8_t* rp = row.data();
    jpeg_read_scanlines(&cinfo, &rp, 1);
    for (int x = 0; x < w; ++x) {
      const size_t i = img.index(x, y);
      img.r[i] = row[x * 3 + 0] / 255.0;
      img.g[i] = row[x * 3 + 1] / 255.0;
      img.b[i] = row[x * 3 + 2] / 255.0;
    }
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return img;
}

void write_png_rows(const std::string& path, int w, int h, int color_type,
                    const std::vector<uint8_t>& pixels, size_t stride) {
  FilePtr fp = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            png_error_fn, png_warning_fn);
  if (!png) throw Error("png write init failed: " + path);
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("png write init failed: " + path);
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("png write failed: " + path);
  }
  png_init_io(png, fp.get());
  // Pinned encoder settings keep output byte-identical across runs.
  png_set_compression_level(png, 6);
  png_set_filter(png, 0, PNG_FILTER_NONE);
  png_set_IHDR(png, info, static_cast<png_uint_32>(w),
               static_cast<png_uint_32>(h), 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < h; ++y)
    png_write_row(png, const_cast<png_bytep>(pixels.data() + y * stride));
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
}

inline uint8_t quantize(double v) {
  const double c = std::clamp(v, 0.0, 1.0);
  return static_cast<uint8_t>(std::lround(c * 255.0));
}

void put_u32le(std::string& out, uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

uint32_t get_u32le(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

void put_f32le(std::string& out, float f) {
  if (f == 0.0f) f = 0.0f;  // canonicalize -0
  uint32_t bits;
  std::memcpy(&bits, &f, 4);
  put_u32le(out, bits);
}

float get_f32le(const uint8_t* p) {
  const uint32_t bits = get_u32le(p);
  float f;
  std::memcpy(&f, &bits, 4);
  return f;
}

std::vector<uint8_t> read_all_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFoundError(path);
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in),
                              std::istreambuf_iterator<char>());
}

void write_all_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open for writing: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("short write: " + path);
}

std::string encode_fcf(const char magic[4],
                       const std::vector<const ScalarField*>& planes,
                       uint32_t third_word) {
  const ScalarField& first = *planes.front();
  std::string bytes;
  bytes.reserve(16 + planes.size() * first.size() * 4);
  bytes.append(magic, 4);
  put_u32le(bytes, static_cast<uint32_t>(first.width));
  put_u32le(bytes, static_cast<uint32_t>(first.height));
  put_u32le(bytes, third_word);
  for (const ScalarField* p : planes)
    for (double v : p->data) put_f32le(bytes, static_cast<float>(v));
  return bytes;
}

}  // namespace

RgbImage load_image(const std::string& path) {
  FilePtr fp = open_file(path, "rb");
  uint8_t sig[8] = {0};
  const size_t n = std::fread(sig, 1, 8, fp.get());
  std::rewind(fp.get());
  static const uint8_t png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (n >= 8 && std::memcmp(sig, png_sig, 8) == 0) return decode_png(fp.get(), path);
  if (n >= 3 && sig[0] == 0xff && sig[1] == 0xd8 && sig[2] == 0xff)
    return decode_jpeg(fp.get(), path);
  throw UnsupportedFormatError("not a PNG or JPEG file: " + path);
}

void write_gray_png(const ScalarField& f, const std::string& path) {
  std::vector<uint8_t> pixels(f.size());
  for (size_t i = 0; i < f.size(); ++i) pixels[i] = quantize(f.data[i]);
  write_png_rows(path, f.width, f.height, PNG_COLOR_TYPE_GRAY, pixels,
                 static_cast<size_t>(f.width));
}

void write_rgb_png(const RgbImage& img, const std::string& path) {
  const size_t stride = static_cast<size_t>(img.width) * 3;
  std::vector<uint8_t> pixels(stride * img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      const size_t i = img.index(x, y);
      uint8_t* px = pixels.data() + y * stride + x * 3;
      px[0] = quantize(img.r[i]);
      px[1] = quantize(img.g[i]);
      px[2] = quantize(img.b[i]);
    }
  write_png_rows(path, img.width, img.height, PNG_COLOR_TYPE_RGB, pixels, stride);
}

void write_fcf_scalar(const ScalarField& f, const std::string& path) {
  write_all_bytes(path, encode_fcf(kFcfScalarMagic, {&f}, 0));
}

ScalarField read_fcf_scalar(const std::string& path) {
  const std::vector<uint8_t> bytes = read_all_bytes(path);
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kFcfScalarMagic, 4) != 0)
    throw CorruptDataError("malformed FCF1 header: " + path);
  const uint32_t w = get_u32le(bytes.data() + 4);
  const uint32_t h = get_u32le(bytes.data() + 8);
  if (w < 1 || h < 1 || w > (1u << 20) || h > (1u << 20))
    throw CorruptDataError("malformed FCF1 header: " + path);
  const size_t expect = 16 + static_cast<size_t>(w) * h * 4;
  if (bytes.size() != expect)
    throw CorruptDataError("FCF1 size mismatch: " + path);
  ScalarField out(static_cast<int>(w), static_cast<int>(h));
  for (size_t i = 0; i < out.size(); ++i)
    out.data[i] = get_f32le(bytes.data() + 16 + i * 4);
  if (!all_finite(out)) throw CorruptDataError("non-finite FCF1 data: " + path);
  return out;
}

void write_fcf_planes(const std::vector<ScalarField>& planes,
                      const std::string& path) {
  if (planes.empty())
    throw InvalidArgumentError("write_fcf_planes: no planes");
  std::vector<const ScalarField*> ptrs;
  for (const ScalarField& p : planes) {
    require_same_shape(planes.front(), p, "write_fcf_planes");
    ptrs.push_back(&p);
  }
  write_all_bytes(path, encode_fcf(kFcfFlowMagic, ptrs,
                                   static_cast<uint32_t>(planes.size())));
}

std::vector<ScalarField> read_fcf_planes(const std::string& path) {
  const std::vector<uint8_t> bytes = read_all_bytes(path);
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kFcfFlowMagic, 4) != 0)
    throw CorruptDataError("malformed FCF2 header: " + path);
  const uint32_t w = get_u32le(bytes.data() + 4);
  const uint32_t h = get_u32le(bytes.data() + 8);
  const uint32_t c = get_u32le(bytes.data() + 12);
  if (w < 1 || h < 1 || c < 1 || c > 16 || w > (1u << 20) || h > (1u << 20))
    throw CorruptDataError("malformed FCF2 header: " + path);
  const size_t plane = static_cast<size_t>(w) * h;
  if (bytes.size() != 16 + plane * c * 4)
    throw CorruptDataError("FCF2 size mismatch: " + path);
  std::vector<ScalarField> out;
  for (uint32_t k = 0; k < c; ++k) {
    ScalarField f(static_cast<int>(w), static_cast<int>(h));
    for (size_t i = 0; i < plane; ++i)
      f.data[i] = get_f32le(bytes.data() + 16 + (k * plane + i) * 4);
    if (!all_finite(f)) throw CorruptDataError("non-finite FCF2 data: " + path);
    out.push_back(std::move(f));
  }
  return out;
}

bool is_png_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFoundError(path);
  uint8_t sig[8] = {0};
  in.read(reinterpret_cast<char*>(sig), 8);
  static const uint8_t png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  return in.gcount() == 8 && std::memcmp(sig, png_sig, 8) == 0;
}

}  // namespace flowcomp
