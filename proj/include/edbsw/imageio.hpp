#pragma once

#include <string>

#include "edbsw/grid.hpp"

namespace edbsw {

// Raster I/O for the CLI: PNG (via libpng) and binary PGM (P5) only.
// Readers return intensities in [0,1]. Color PNGs collapse to gray with the
// Rec.601 luma weights 0.299 R + 0.587 G + 0.114 B; pixels that are already
// gray (R = G = B) pass through exactly so a gray round trip is not disturbed
// by the weight sum rounding. Alpha, when present, is ignored.
// All failures (unreadable file, bad magic, malformed header, truncated
// payload) throw IoError.
ImageGrid read_png(const std::string& path);

// P5 only; maxval in [1, 65535] (two-byte big-endian samples above 255).
// '#' comments are honored anywhere whitespace is allowed in the header.
ImageGrid read_pgm(const std::string& path);

// Dispatch on the leading magic bytes (PNG signature or "P5"); the file
// extension is not trusted.
ImageGrid read_image(const std::string& path);

// 8-bit grayscale writers: value = round(255 * clamp(v, 0, 1)). Both write
// to a temp file in the target directory and rename into place, so a reader
// can never observe a partially written image.
void write_png(const ImageGrid& g, const std::string& path);
void write_pgm(const ImageGrid& g, const std::string& path);

}  // namespace edbsw
