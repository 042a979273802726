#include "edbsw/imageio.hpp"

#include <png.h>
#include <unistd.h>

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "edbsw/errors.hpp"

namespace edbsw {

namespace {

std::vector<unsigned char> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failure on " + path);
    return bytes;
}

// Unique-enough sibling path for the temp-then-rename protocol. The temp
// file lives in the destination directory so std::filesystem::rename is a
// same-filesystem atomic replace.
std::string temp_sibling(const std::string& path) {
    static std::atomic<unsigned> counter{0};
    return path + ".tmp" + std::to_string(::getpid()) + "-" +
           std::to_string(counter.fetch_add(1));
}

void commit_temp(const std::string& tmp, const std::string& path) {
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move temp file into place for " + path);
    }
}

std::vector<unsigned char> quantize8(const ImageGrid& g) {
    std::vector<unsigned char> bytes(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double v = g.data[i];
        if (!(v > 0.0)) v = 0.0;  // also catches NaN
        if (v > 1.0) v = 1.0;
        bytes[i] = static_cast<unsigned char>(std::lround(255.0 * v));
    }
    return bytes;
}

bool is_pgm_space(int c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

// Reads one unsigned decimal token, skipping whitespace and '#' comments.
long pgm_token(const std::vector<unsigned char>& bytes, std::size_t& pos,
               const std::string& path) {
    for (;;) {
        while (pos < bytes.size() && is_pgm_space(bytes[pos])) ++pos;
        if (pos < bytes.size() && bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            continue;
        }
        break;
    }
    if (pos >= bytes.size() || !std::isdigit(bytes[pos]))
        throw IoError("malformed PGM header in " + path);
    long v = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
        v = v * 10 + (bytes[pos] - '0');
        if (v > 1 << 30) throw IoError("absurd PGM header value in " + path);
        ++pos;
    }
    return v;
}

}  // namespace

ImageGrid read_pgm(const std::string& path) {
    std::vector<unsigned char> bytes = slurp(path);
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
        throw IoError("not a binary PGM (P5): " + path);
    std::size_t pos = 2;
    long w = pgm_token(bytes, pos, path);
    long h = pgm_token(bytes, pos, path);
    long maxval = pgm_token(bytes, pos, path);
    if (w <= 0 || h <= 0) throw IoError("bad PGM dimensions in " + path);
    if (maxval < 1 || maxval > 65535) throw IoError("bad PGM maxval in " + path);
    // Exactly one whitespace byte separates the header from the raster.
    if (pos >= bytes.size() || !is_pgm_space(bytes[pos]))
        throw IoError("malformed PGM header in " + path);
    ++pos;
    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    const int bytes_per = maxval > 255 ? 2 : 1;
    if (bytes.size() - pos < n * bytes_per)
        throw IoError("truncated PGM payload in " + path);
    ImageGrid g(static_cast<int>(h), static_cast<int>(w));
    const double scale = 1.0 / static_cast<double>(maxval);
    for (std::size_t i = 0; i < n; ++i) {
        unsigned v = bytes[pos + i * bytes_per];
        if (bytes_per == 2) v = (v << 8) | bytes[pos + i * 2 + 1];
        g.data[i] = static_cast<double>(v) * scale;
    }
    return g;
}

void write_pgm(const ImageGrid& g, const std::string& path) {
    if (g.height <= 0 || g.width <= 0) throw DimensionError("write_pgm: empty image");
    std::vector<unsigned char> bytes = quantize8(g);
    const std::string tmp = temp_sibling(path);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot create " + tmp);
        out << "P5\n" << g.width << ' ' << g.height << "\n255\n";
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("write failure on " + tmp);
        }
    }
    commit_temp(tmp, path);
}

ImageGrid read_png(const std::string& path) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str()))
        throw IoError("cannot read PNG " + path + ": " + image.message);
    // Ask libpng for plain 8-bit RGB so the gray collapse below is ours (the
    // simplified API's own gray conversion is not the Rec.601 one).
    image.format = PNG_FORMAT_RGB;
    std::vector<unsigned char> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw IoError("cannot decode PNG " + path + ": " + msg);
    }
    ImageGrid g(static_cast<int>(image.height), static_cast<int>(image.width));
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = buffer[i * 3 + 0];
        const double gg = buffer[i * 3 + 1];
        const double b = buffer[i * 3 + 2];
        g.data[i] = (r == gg && gg == b) ? r / 255.0
                                         : (0.299 * r + 0.587 * gg + 0.114 * b) / 255.0;
    }
    return g;
}

void write_png(const ImageGrid& g, const std::string& path) {
    if (g.height <= 0 || g.width <= 0) throw DimensionError("write_png: empty image");
    std::vector<unsigned char> bytes = quantize8(g);
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(g.width);
    image.height = static_cast<png_uint_32>(g.height);
    image.format = PNG_FORMAT_GRAY;
    const std::string tmp = temp_sibling(path);
    if (!png_image_write_to_file(&image, tmp.c_str(), 0, bytes.data(), 0, nullptr)) {
        std::string msg = image.message;
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot write PNG " + path + ": " + msg);
    }
    commit_temp(tmp, path);
}

ImageGrid read_image(const std::string& path) {
    static const unsigned char kPngMagic[4] = {0x89, 'P', 'N', 'G'};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    unsigned char head[4] = {0, 0, 0, 0};
    in.read(reinterpret_cast<char*>(head), 4);
    in.close();
    if (std::memcmp(head, kPngMagic, 4) == 0) return read_png(path);
    if (head[0] == 'P' && head[1] == '5') return read_pgm(path);
    throw IoError("unsupported image format (want PNG or binary PGM): " + path);
}

}  // namespace edbsw
