// Copyright 2026 The cutvos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cutvos/image_io.hpp"

#include <jpeglib.h>
#include <png.h>

#include <algorithm>
#include <atomic>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <thread>

#include "cutvos/error.hpp"

namespace cutvos::io {
namespace fs = std::filesystem;

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr OpenOrThrow(const fs::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return f;
}

std::string LowerExtension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

// Unique sibling path for atomic replacement.
fs::path TempSibling(const fs::path& path) {
  static std::atomic<unsigned> counter{0};
  std::ostringstream name;
  name << "." << path.filename().string() << ".tmp"
       << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "."
       << counter.fetch_add(1);
  return path.parent_path() / name.str();
}

void CommitTemp(const fs::path& tmp, const fs::path& path) {
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kIoError, "cannot rename into " + path.string());
  }
}

void EnsureParent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

// ---- PNG ------------------------------------------------------------------

[[noreturn]] void PngError(png_structp, png_const_charp msg) {
  throw Error(ErrorCode::kParseError, std::string("libpng: ") + msg);
}
void PngWarning(png_structp, png_const_charp) {}

class PngReader {
 public:
  explicit PngReader(const fs::path& path) : file_(OpenOrThrow(path, "rb")) {
    png_byte sig[8];
    if (std::fread(sig, 1, 8, file_.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
      throw Error(ErrorCode::kParseError, "not a PNG: " + path.string());
    }
    png_ = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, PngError,
                                  PngWarning);
    info_ = png_create_info_struct(png_);
    png_init_io(png_, file_.get());
    png_set_sig_bytes(png_, 8);
    png_read_info(png_, info_);
  }
  ~PngReader() { png_destroy_read_struct(&png_, &info_, nullptr); }
  PngReader(const PngReader&) = delete;
  PngReader& operator=(const PngReader&) = delete;

  png_structp png() const { return png_; }
  png_infop info() const { return info_; }

  std::vector<png_byte> ReadRows(int height, std::size_t rowbytes) {
    std::vector<png_byte> buf(rowbytes * height);
    std::vector<png_bytep> rows(height);
    for (int r = 0; r < height; ++r) rows[r] = buf.data() + rowbytes * r;
    png_read_image(png_, rows.data());
    png_read_end(png_, nullptr);
    return buf;
  }

 private:
  FilePtr file_;
  png_structp png_ = nullptr;
  png_infop info_ = nullptr;
};

Frame ReadFramePng(const fs::path& path) {
  PngReader reader(path);
  png_structp png = reader.png();
  png_infop info = reader.info();
  const int color = png_get_color_type(png, info);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_expand_gray_1_2_4_to_8(png);
    png_set_gray_to_rgb(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);
  const int h = static_cast<int>(png_get_image_height(png, info));
  const int w = static_cast<int>(png_get_image_width(png, info));
  if (png_get_rowbytes(png, info) != static_cast<std::size_t>(w) * 3) {
    throw Error(ErrorCode::kParseError, "unsupported PNG layout: " + path.string());
  }
  auto buf = reader.ReadRows(h, static_cast<std::size_t>(w) * 3);
  Frame frame(h, w);
  std::copy(buf.begin(), buf.end(), frame.data().begin());
  return frame;
}

template <int C>
void WritePngImpl(const fs::path& path, const Image<C>& img,
                  const Palette* palette) {
  EnsureParent(path);
  const fs::path tmp = TempSibling(path);
  {
    FilePtr f = OpenOrThrow(tmp, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                              PngError, PngWarning);
    png_infop info = png_create_info_struct(png);
    try {
      png_init_io(png, f.get());
      const int color = palette != nullptr ? PNG_COLOR_TYPE_PALETTE
                        : C == 3          ? PNG_COLOR_TYPE_RGB
                                          : PNG_COLOR_TYPE_GRAY;
      png_set_IHDR(png, info, img.width(), img.height(), 8, color,
                   PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                   PNG_FILTER_TYPE_DEFAULT);
      std::vector<png_color> entries;
      if (palette != nullptr) {
        for (const auto& c : *palette) entries.push_back({c[0], c[1], c[2]});
        png_set_PLTE(png, info, entries.data(), static_cast<int>(entries.size()));
      }
      png_write_info(png, info);
      const std::size_t stride = static_cast<std::size_t>(img.width()) * C;
      for (int r = 0; r < img.height(); ++r) {
        auto row = const_cast<png_bytep>(img.data().data() + stride * r);
        png_write_row(png, row);
      }
      png_write_end(png, nullptr);
    } catch (...) {
      png_destroy_write_struct(&png, &info);
      f.reset();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw;
    }
    png_destroy_write_struct(&png, &info);
  }
  CommitTemp(tmp, path);
}

// ---- JPEG -----------------------------------------------------------------

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void JpegErrorExit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

Frame ReadFrameJpeg(const fs::path& path) {
  FilePtr f = OpenOrThrow(path, "rb");
  jpeg_decompress_struct cinfo{};
  JpegErrorManager err{};
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = JpegErrorExit;
  // Only POD locals between setjmp and longjmp.
  Frame* result = new Frame();
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    delete result;
    throw Error(ErrorCode::kParseError,
                "libjpeg: " + std::string(err.message) + " in " + path.string());
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, f.get());
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  *result = Frame(static_cast<int>(cinfo.output_height),
                  static_cast<int>(cinfo.output_width));
  const std::size_t stride = static_cast<std::size_t>(cinfo.output_width) * 3;
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = result->data().data() + stride * cinfo.output_scanline;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  Frame out = std::move(*result);
  delete result;
  return out;
}

}  // namespace

const Palette& DavisPalette() {
  static const Palette palette = [] {
    Palette p(256);
    for (int i = 0; i < 256; ++i) {
      int c = i;
      std::uint8_t r = 0, g = 0, b = 0;
      for (int j = 0; j < 8; ++j) {
        r |= static_cast<std::uint8_t>(((c >> 0) & 1) << (7 - j));
        g |= static_cast<std::uint8_t>(((c >> 1) & 1) << (7 - j));
        b |= static_cast<std::uint8_t>(((c >> 2) & 1) << (7 - j));
        c >>= 3;
      }
      p[i] = {r, g, b};
    }
    return p;
  }();
  return palette;
}

Frame ReadFrame(const fs::path& path) {
  const std::string ext = LowerExtension(path);
  if (ext == ".jpg" || ext == ".jpeg") return ReadFrameJpeg(path);
  if (ext == ".png") return ReadFramePng(path);
  throw Error(ErrorCode::kParseError, "unsupported image type: " + path.string());
}

Mask ReadLabelPng(const fs::path& path) {
  PngReader reader(path);
  png_structp png = reader.png();
  png_infop info = reader.info();
  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color != PNG_COLOR_TYPE_PALETTE && color != PNG_COLOR_TYPE_GRAY) {
    throw Error(ErrorCode::kParseError,
                "label PNG must be palette or gray: " + path.string());
  }
  if (depth == 16) {
    throw Error(ErrorCode::kParseError, "16-bit label PNG: " + path.string());
  }
  // Keep raw indices; only unpack sub-byte depths.
  if (depth < 8) png_set_packing(png);
  png_read_update_info(png, info);
  const int h = static_cast<int>(png_get_image_height(png, info));
  const int w = static_cast<int>(png_get_image_width(png, info));
  auto buf = reader.ReadRows(h, png_get_rowbytes(png, info));
  Mask mask(h, w);
  std::copy(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(mask.pixel_count()),
            mask.data().begin());
  return mask;
}

void WriteFramePng(const fs::path& path, const Frame& frame) {
  WritePngImpl(path, frame, nullptr);
}

void WriteFrameJpeg(const fs::path& path, const Frame& frame, int quality) {
  EnsureParent(path);
  const fs::path tmp = TempSibling(path);
  {
    FilePtr f = OpenOrThrow(tmp, "wb");
    jpeg_compress_struct cinfo{};
    JpegErrorManager err{};
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = JpegErrorExit;
    if (setjmp(err.jump)) {
      jpeg_destroy_compress(&cinfo);
      throw Error(ErrorCode::kIoError, "libjpeg: " + std::string(err.message));
    }
    jpeg_create_compress(&cinfo);
    jpeg_stdio_dest(&cinfo, f.get());
    cinfo.image_width = static_cast<JDIMENSION>(frame.width());
    cinfo.image_height = static_cast<JDIMENSION>(frame.height());
    cinfo.input_components = 3;
    cinfo.in_color_space = JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    const std::size_t stride = static_cast<std::size_t>(frame.width()) * 3;
    while (cinfo.next_scanline < cinfo.image_height) {
      auto row = const_cast<JSAMPROW>(frame.data().data() + stride * cinfo.next_scanline);
      jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
  }
  CommitTemp(tmp, path);
}

void WriteFrame(const fs::path& path, const Frame& frame) {
  const std::string ext = LowerExtension(path);
  if (ext == ".jpg" || ext == ".jpeg") return WriteFrameJpeg(path, frame);
  if (ext == ".png") return WriteFramePng(path, frame);
  throw Error(ErrorCode::kInvalidArgument, "unsupported image type: " + path.string());
}

void WriteLabelPng(const fs::path& path, const Mask& mask, const Palette& palette) {
  WritePngImpl(path, mask, &palette);
}

void WriteFileAtomic(const fs::path& path, const std::string& contents) {
  EnsureParent(path);
  const fs::path tmp = TempSibling(path);
  {
    std::ofstream out(tmp, std::ios::binary);
    out << contents;
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
  }
  CommitTemp(tmp, path);
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> ListImages(const fs::path& dir,
                                 const std::vector<std::string>& extensions) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kIoError, "not a directory: " + dir.string());
  }
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = LowerExtension(entry.path());
    if (std::find(extensions.begin(), extensions.end(), ext) != extensions.end()) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return out;
}

std::string FrameName(int index, const std::string& extension) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%05d", index);
  return std::string(buf) + extension;
}

}  // namespace cutvos::io
