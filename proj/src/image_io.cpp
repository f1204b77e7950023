#include "codi/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace codi {
namespace {

// Reads the next whitespace/comment-delimited token of a PNM header.
std::string pnm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    if (tok.empty()) throw FormatError("truncated PNM header");
    return tok;
}

int pnm_int(std::istream& in) {
    const std::string tok = pnm_token(in);
    try {
        return std::stoi(tok);
    } catch (const std::exception&) {
        throw FormatError("bad integer in PNM header: " + tok);
    }
}

RgbImage load_pnm(std::ifstream& in, const std::string& magic) {
    const bool color = (magic == "P3" || magic == "P6");
    const bool binary = (magic == "P5" || magic == "P6");
    const int w = pnm_int(in);
    const int h = pnm_int(in);
    const int maxval = pnm_int(in);
    if (w < 1 || h < 1) throw FormatError("bad PNM dimensions");
    if (maxval < 1 || maxval > 255) throw FormatError("only 8-bit PNM supported");

    RgbImage img(w, h);
    const size_t n = static_cast<size_t>(w) * h;
    const size_t samples = n * (color ? 3 : 1);
    std::vector<uint8_t> raw(samples);
    if (binary) {
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(samples));
        if (static_cast<size_t>(in.gcount()) != samples) throw FormatError("truncated PNM data");
    } else {
        for (size_t i = 0; i < samples; ++i) {
            const int v = pnm_int(in);
            if (v < 0 || v > maxval) throw FormatError("PNM sample out of range");
            raw[i] = static_cast<uint8_t>(v);
        }
    }
    if (color) {
        for (size_t i = 0; i < n; ++i) {
            img.r[i] = raw[3 * i];
            img.g[i] = raw[3 * i + 1];
            img.b[i] = raw[3 * i + 2];
        }
    } else {
        for (size_t i = 0; i < n; ++i) img.r[i] = img.g[i] = img.b[i] = raw[i];
    }
    return img;
}

RgbImage load_png(const std::string& path) {
    FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw IoError("cannot open " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw IoError("libpng init failed");
    }
    std::vector<png_bytep> rows;
    std::vector<uint8_t> pixels;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw FormatError("corrupt PNG stream: " + path);
    }
    png_init_io(png, fp);
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    // Normalize everything to 8-bit RGB.
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_gray_to_rgb(png);
    png_read_update_info(png, info);

    pixels.resize(static_cast<size_t>(w) * h * 3);
    rows.resize(h);
    for (png_uint_32 i = 0; i < h; ++i) rows[i] = pixels.data() + static_cast<size_t>(i) * w * 3;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);

    RgbImage img(static_cast<int>(w), static_cast<int>(h));
    const size_t n = static_cast<size_t>(w) * h;
    for (size_t i = 0; i < n; ++i) {
        img.r[i] = pixels[3 * i];
        img.g[i] = pixels[3 * i + 1];
        img.b[i] = pixels[3 * i + 2];
    }
    return img;
}

}  // namespace

RgbImage load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    char sig[8] = {};
    in.read(sig, 8);
    if (in.gcount() < 2) throw FormatError("file too short: " + path);
    static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (in.gcount() == 8 && std::memcmp(sig, png_sig, 8) == 0) {
        in.close();
        return load_png(path);
    }
    if (sig[0] == 'P' && sig[1] >= '2' && sig[1] <= '6') {
        in.clear();
        in.seekg(2);
        const std::string magic{sig[0], sig[1]};
        if (magic == "P4") throw FormatError("PBM bitmaps not supported");
        return load_pnm(in, magic);
    }
    throw FormatError("unsupported image format: " + path);
}

void save_field(const ScalarField& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "P5\n" << f.width << " " << f.height << "\n255\n";
    std::vector<uint8_t> raw(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        const double v = std::round(f.data[i]);
        raw[i] = static_cast<uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw IoError("write failed: " + path);
}

void save_ppm(const RgbImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    const size_t n = static_cast<size_t>(img.width) * img.height;
    std::vector<uint8_t> raw(n * 3);
    for (size_t i = 0; i < n; ++i) {
        raw[3 * i] = img.r[i];
        raw[3 * i + 1] = img.g[i];
        raw[3 * i + 2] = img.b[i];
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace codi
