#pragma once

// File formats: NetPBM grayscale (P2/P5) images, plain-text label maps,
// and iteration-trace CSVs.

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nedseg/image.hpp"
#include "nedseg/mshi.hpp"
#include "nedseg/segmentation_eval.hpp"

namespace nedseg {

namespace detail {

// Next whitespace-delimited token, skipping '#' comments (PGM headers).
inline std::string next_pgm_token(std::istream& in) {
    std::string tok;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (std::isspace(ch))
            continue;
        tok.push_back(static_cast<char>(ch));
        while ((ch = in.get()) != EOF && !std::isspace(ch) && ch != '#')
            tok.push_back(static_cast<char>(ch));
        if (ch == '#')
            in.unget();
        return tok;
    }
    throw IoError("unexpected end of PGM header");
}

inline std::uint64_t parse_pgm_uint(std::istream& in, const char* what) {
    const std::string tok = next_pgm_token(in);
    std::uint64_t v = 0;
    for (char c : tok) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw IoError(std::string("malformed PGM header: bad ") + what +
                          " '" + tok + "'");
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
        if (v > 0xFFFFFFFFull)
            throw IoError(std::string("PGM ") + what + " too large");
    }
    return v;
}

inline pixel_t levels_for_maxval(std::uint64_t maxval) {
    pixel_t levels = 2;
    while (levels <= maxval)
        levels *= 2;
    return levels;
}

} // namespace detail

// Reads P2 (ASCII) or P5 (binary) grayscale NetPBM. The image's level
// count is the smallest power of two above maxval (256 for maxval 255).
inline GrayImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (in.gcount() != 2 || magic[0] != 'P')
        throw IoError("not a NetPBM file: " + path.string());
    const bool binary = magic[1] == '5';
    if (!binary && magic[1] != '2')
        throw IoError(std::string("unsupported NetPBM format P") + magic[1] +
                      " (only P2/P5 grayscale)");

    const auto width = detail::parse_pgm_uint(in, "width");
    const auto height = detail::parse_pgm_uint(in, "height");
    const auto maxval = detail::parse_pgm_uint(in, "maxval");
    if (width == 0 || height == 0)
        throw IoError("PGM dimensions must be positive");
    if (maxval == 0)
        throw IoError("PGM maxval must be positive");
    if (maxval > 65535)
        throw IoError("PGM maxval above 65535 unsupported");

    const std::size_t count = static_cast<std::size_t>(width) * height;
    std::vector<pixel_t> pixels(count);
    if (binary) {
        // Exactly one whitespace byte separates maxval from the raster.
        const bool two_byte = maxval > 255;
        std::vector<unsigned char> raw(count * (two_byte ? 2 : 1));
        in.read(reinterpret_cast<char*>(raw.data()),
                static_cast<std::streamsize>(raw.size()));
        if (static_cast<std::size_t>(in.gcount()) != raw.size())
            throw IoError("truncated PGM raster in " + path.string());
        for (std::size_t i = 0; i < count; ++i)
            pixels[i] = two_byte ? (static_cast<pixel_t>(raw[2 * i]) << 8) |
                                       raw[2 * i + 1]
                                 : raw[i];
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            try {
                pixels[i] =
                    static_cast<pixel_t>(detail::parse_pgm_uint(in, "sample"));
            } catch (const IoError&) {
                throw IoError("truncated or malformed PGM samples in " +
                              path.string());
            }
        }
    }
    for (pixel_t p : pixels)
        if (p > maxval)
            throw IoError("PGM sample exceeds maxval in " + path.string());
    return GrayImage(width, height, detail::levels_for_maxval(maxval),
                     std::move(pixels));
}

// Writes binary P5 with maxval = levels - 1. Round-trips bit-exactly.
inline void write_pgm(const GrayImage& a, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    const pixel_t maxval = a.levels() - 1;
    out << "P5\n" << a.width() << ' ' << a.height() << '\n' << maxval << '\n';
    const bool two_byte = maxval > 255;
    for (pixel_t p : a.pixels()) {
        if (two_byte)
            out.put(static_cast<char>((p >> 8) & 0xFF));
        out.put(static_cast<char>(p & 0xFF));
    }
    if (!out)
        throw IoError("write failed: " + path.string());
}

// Plain text: first line "width height", then height rows of width labels.
inline LabelMap read_labelmap(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::size_t width = 0, height = 0;
    if (!(in >> width >> height) || width == 0 || height == 0)
        throw IoError("malformed label-map header in " + path.string());
    std::vector<std::uint32_t> labels(width * height);
    for (auto& l : labels) {
        long long v;
        if (!(in >> v))
            throw IoError("truncated label map " + path.string());
        if (v < 0)
            throw IoError("negative label in " + path.string());
        l = static_cast<std::uint32_t>(v);
    }
    return LabelMap(width, height, std::move(labels)); // densifies sparse ids
}

inline void write_labelmap(const LabelMap& m,
                           const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << m.width() << ' ' << m.height() << '\n';
    for (std::size_t r = 0; r < m.height(); ++r) {
        for (std::size_t c = 0; c < m.width(); ++c) {
            if (c)
                out << ' ';
            out << m[r * m.width() + c];
        }
        out << '\n';
    }
    if (!out)
        throw IoError("write failed: " + path.string());
}

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12f", v);
    return buf;
}

inline void write_trace_csv(const IterationTrace& trace,
                            const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << "iteration,criterion,entropy\n";
    for (const auto& e : trace.entries)
        out << e.iteration << ',' << format_real(e.criterion) << ','
            << format_real(e.entropy) << '\n';
    if (!out)
        throw IoError("write failed: " + path.string());
}

// "level,count" rows for one histogram; used by the histdemo command.
inline void write_histogram_csv(const Histogram& h,
                                const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << "level,count\n";
    for (std::size_t v = 0; v < h.counts.size(); ++v)
        out << v << ',' << h.counts[v] << '\n';
    if (!out)
        throw IoError("write failed: " + path.string());
}

} // namespace nedseg
