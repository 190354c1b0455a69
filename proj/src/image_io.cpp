#include "worldgen/image_io.hpp"

#include <zlib.h>

#include <cstdlib>
#include <cstring>
#include <fstream>

#include "worldgen/errors.hpp"

namespace worldgen {

namespace {

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back((uint8_t)(v >> 24));
  out.push_back((uint8_t)(v >> 16));
  out.push_back((uint8_t)(v >> 8));
  out.push_back((uint8_t)v);
}

uint32_t get_u32(const uint8_t* p) {
  return ((uint32_t)p[0] << 24) | ((uint32_t)p[1] << 16) | ((uint32_t)p[2] << 8) | p[3];
}

void write_chunk(std::vector<uint8_t>& out, const char* type,
                 const std::vector<uint8_t>& data) {
  put_u32(out, (uint32_t)data.size());
  size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  uint32_t crc = crc32(0, out.data() + start, (uInt)(out.size() - start));
  put_u32(out, crc);
}

uint8_t paeth(int a, int b, int c) {
  int p = a + b - c;
  int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return (uint8_t)a;
  if (pb <= pc) return (uint8_t)b;
  return (uint8_t)c;
}

}  // namespace

void write_png16(const std::string& path, int width, int height,
                 const std::vector<uint16_t>& pixels) {
  if ((size_t)width * height != pixels.size())
    throw IoError("write_png16: pixel count does not match dimensions");

  std::vector<uint8_t> raw;
  raw.reserve((size_t)height * (1 + 2 * width));
  for (int y = 0; y < height; ++y) {
    raw.push_back(0);  // filter type none
    for (int x = 0; x < width; ++x) {
      uint16_t v = pixels[(size_t)y * width + x];
      raw.push_back((uint8_t)(v >> 8));  // big-endian per PNG
      raw.push_back((uint8_t)v);
    }
  }

  uLongf comp_size = compressBound((uLong)raw.size());
  std::vector<uint8_t> comp(comp_size);
  if (compress2(comp.data(), &comp_size, raw.data(), (uLong)raw.size(), 6) != Z_OK)
    throw IoError("write_png16: deflate failed");
  comp.resize(comp_size);

  std::vector<uint8_t> out;
  const uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
  out.insert(out.end(), sig, sig + 8);

  std::vector<uint8_t> ihdr;
  put_u32(ihdr, (uint32_t)width);
  put_u32(ihdr, (uint32_t)height);
  ihdr.push_back(16);  // bit depth
  ihdr.push_back(0);   // grayscale
  ihdr.push_back(0);   // deflate
  ihdr.push_back(0);   // filter method
  ihdr.push_back(0);   // no interlace
  write_chunk(out, "IHDR", ihdr);
  write_chunk(out, "IDAT", comp);
  write_chunk(out, "IEND", {});

  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("write_png16: cannot open " + path);
  f.write((const char*)out.data(), (std::streamsize)out.size());
  if (!f) throw IoError("write_png16: write failed for " + path);
}

std::vector<uint16_t> read_png16(const std::string& path, int& width, int& height) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("read_png16: cannot open " + path);
  std::vector<uint8_t> buf((std::istreambuf_iterator<char>(f)),
                           std::istreambuf_iterator<char>());
  if (buf.size() < 8 || std::memcmp(buf.data(), "\x89PNG\r\n\x1a\n", 8) != 0)
    throw IoError("read_png16: not a PNG file");

  width = height = 0;
  std::vector<uint8_t> idat;
  size_t pos = 8;
  int bit_depth = 0, color_type = -1;
  while (pos + 12 <= buf.size()) {
    uint32_t len = get_u32(&buf[pos]);
    std::string type((const char*)&buf[pos + 4], 4);
    if (pos + 12 + len > buf.size()) throw IoError("read_png16: truncated chunk");
    const uint8_t* data = &buf[pos + 8];
    if (type == "IHDR") {
      width = (int)get_u32(data);
      height = (int)get_u32(data + 4);
      bit_depth = data[8];
      color_type = data[9];
    } else if (type == "IDAT") {
      idat.insert(idat.end(), data, data + len);
    } else if (type == "IEND") {
      break;
    }
    pos += 12 + len;
  }
  if (bit_depth != 16 || color_type != 0)
    throw IoError("read_png16: only 16-bit grayscale is supported");

  size_t stride = 1 + 2 * (size_t)width;
  std::vector<uint8_t> raw(stride * height);
  uLongf raw_size = (uLongf)raw.size();
  if (uncompress(raw.data(), &raw_size, idat.data(), (uLong)idat.size()) != Z_OK ||
      raw_size != raw.size())
    throw IoError("read_png16: inflate failed");

  const int bpp = 2;
  std::vector<uint16_t> px((size_t)width * height);
  std::vector<uint8_t> prev(2 * (size_t)width, 0);
  for (int y = 0; y < height; ++y) {
    uint8_t* row = &raw[(size_t)y * stride];
    uint8_t filter = row[0];
    uint8_t* cur = row + 1;
    int rb = 2 * width;
    for (int i = 0; i < rb; ++i) {
      int a = i >= bpp ? cur[i - bpp] : 0;
      int b = prev[i];
      int c = i >= bpp ? prev[i - bpp] : 0;
      switch (filter) {
        case 0: break;
        case 1: cur[i] = (uint8_t)(cur[i] + a); break;
        case 2: cur[i] = (uint8_t)(cur[i] + b); break;
        case 3: cur[i] = (uint8_t)(cur[i] + (a + b) / 2); break;
        case 4: cur[i] = (uint8_t)(cur[i] + paeth(a, b, c)); break;
        default: throw IoError("read_png16: unsupported filter type");
      }
    }
    for (int x = 0; x < width; ++x)
      px[(size_t)y * width + x] = (uint16_t)((cur[2 * x] << 8) | cur[2 * x + 1]);
    std::memcpy(prev.data(), cur, (size_t)rb);
  }
  return px;
}

}  // namespace worldgen
