#include "drawlab/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>

#include <jpeglib.h>
#include <png.h>

#include "drawlab/errors.hpp"

namespace drawlab::imaging {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw Error("cannot open file: " + path);
    return f;
}

// ---------------------------------------------------------------- PNG

RasterImage decode_png(std::FILE* fp, const std::string& path) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error("libpng init failed");
    }

    std::vector<std::uint8_t> data;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error("corrupt or unreadable PNG: " + path);
    }

    png_init_io(png, fp);
    png_read_info(png, info);

    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_16(png);
    png_set_gray_to_rgb(png);
    png_set_filler(png, 0xFF, PNG_FILLER_AFTER); // force RGBA so compositing is uniform
    png_read_update_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    data.resize(static_cast<std::size_t>(width) * height * 4);
    rows.resize(height);
    for (int r = 0; r < height; ++r) rows[r] = data.data() + static_cast<std::size_t>(r) * width * 4;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    RasterImage out(width, height);
    for (std::size_t i = 0, n = static_cast<std::size_t>(width) * height; i < n; ++i) {
        const std::uint8_t* src = data.data() + 4 * i;
        const unsigned a = src[3];
        for (int c = 0; c < 3; ++c) {
            out.rgb[3 * i + c] =
                static_cast<std::uint8_t>((a * src[c] + (255u - a) * 255u + 127u) / 255u);
        }
    }
    return out;
}

void write_png_bytes(int width, int height, int channels, const std::uint8_t* bytes,
                     const std::string& path) {
    FilePtr fp = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error("PNG write failed: " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, width, height, 8,
                 channels == 4 ? PNG_COLOR_TYPE_RGBA : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(height);
    for (int r = 0; r < height; ++r) {
        rows[r] = const_cast<png_bytep>(bytes + static_cast<std::size_t>(r) * width * channels);
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

// ---------------------------------------------------------------- JPEG

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
};

void jpeg_error_trampoline(j_common_ptr cinfo) {
    auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    longjmp(mgr->jump, 1);
}

RasterImage decode_jpeg(std::FILE* fp, const std::string& path) {
    jpeg_decompress_struct cinfo;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_error_trampoline;

    RasterImage out;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw Error("corrupt or unreadable JPEG: " + path);
    }

    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, fp);
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    out = RasterImage(static_cast<int>(cinfo.output_width), static_cast<int>(cinfo.output_height));
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = out.rgb.data() + static_cast<std::size_t>(cinfo.output_scanline) * out.width * 3;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return out;
}

// ---------------------------------------------------------------- resampling

Eigen::ArrayXXd resize_plane(const Eigen::ArrayXXd& src, int out_h, int out_w) {
    const int in_h = static_cast<int>(src.rows());
    const int in_w = static_cast<int>(src.cols());
    Eigen::ArrayXXd out(out_h, out_w);

    const double sy = static_cast<double>(in_h) / out_h;
    const double sx = static_cast<double>(in_w) / out_w;
    for (int r = 0; r < out_h; ++r) {
        double fy = (r + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(in_h - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, in_h - 1);
        const double wy = fy - y0;
        for (int c = 0; c < out_w; ++c) {
            double fx = (c + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(in_w - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, in_w - 1);
            const double wx = fx - x0;
            const double top = src(y0, x0) * (1.0 - wx) + src(y0, x1) * wx;
            const double bot = src(y1, x0) * (1.0 - wx) + src(y1, x1) * wx;
            out(r, c) = top * (1.0 - wy) + bot * wy;
        }
    }
    return out;
}

void check_target(int w, int h) {
    if (w < 1 || h < 1) throw Error("resize target must be at least 1x1");
}

// ---------------------------------------------------------------- colorimetry

// sRGB -> XYZ (D65). White is defined as the row sums so that (255,255,255)
// maps to exactly L=100, a=0, b=0.
constexpr double kM[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};
const double kWhite[3] = {kM[0][0] + kM[0][1] + kM[0][2], kM[1][0] + kM[1][1] + kM[1][2],
                          kM[2][0] + kM[2][1] + kM[2][2]};
constexpr double kMInv[3][3] = {
    {3.2404542, -1.5371385, -0.4985314},
    {-0.9692660, 1.8760108, 0.0415560},
    {0.0556434, -0.2040259, 1.0572252},
};

inline double srgb_linearize(double c8) {
    const double c = c8 / 255.0;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double srgb_delinearize(double lin) {
    const double c = lin <= 0.0031308 ? lin * 12.92 : 1.055 * std::pow(lin, 1.0 / 2.4) - 0.055;
    return std::clamp(c, 0.0, 1.0) * 255.0;
}

constexpr double kLabEps = (6.0 / 29.0) * (6.0 / 29.0) * (6.0 / 29.0);
constexpr double kLabKappa = 3.0 * (6.0 / 29.0) * (6.0 / 29.0);

inline double lab_f(double t) { return t > kLabEps ? std::cbrt(t) : t / kLabKappa + 4.0 / 29.0; }

inline double lab_f_inv(double ft) {
    return ft > 6.0 / 29.0 ? ft * ft * ft : kLabKappa * (ft - 4.0 / 29.0);
}

} // namespace

RasterImage decode(const std::string& path) {
    FilePtr fp = open_file(path, "rb");
    unsigned char magic[4] = {0};
    const std::size_t got = std::fread(magic, 1, sizeof(magic), fp.get());
    std::rewind(fp.get());
    if (got >= 4 && magic[0] == 0x89 && magic[1] == 'P' && magic[2] == 'N' && magic[3] == 'G') {
        return decode_png(fp.get(), path);
    }
    if (got >= 3 && magic[0] == 0xFF && magic[1] == 0xD8 && magic[2] == 0xFF) {
        return decode_jpeg(fp.get(), path);
    }
    throw Error("unsupported image format (expected PNG or JPEG): " + path);
}

void encode_png(const RasterImage& img, const std::string& path) {
    write_png_bytes(img.width, img.height, 3, img.rgb.data(), path);
}

void encode_png_rgba(int width, int height, const std::vector<std::uint8_t>& rgba,
                     const std::string& path) {
    write_png_bytes(width, height, 4, rgba.data(), path);
}

void encode_jpeg(const RasterImage& img, const std::string& path, int quality) {
    FilePtr fp = open_file(path, "wb");
    jpeg_compress_struct cinfo;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_error_trampoline;
    if (setjmp(err.jump)) {
        jpeg_destroy_compress(&cinfo);
        throw Error("JPEG write failed: " + path);
    }
    jpeg_create_compress(&cinfo);
    jpeg_stdio_dest(&cinfo, fp.get());
    cinfo.image_width = static_cast<JDIMENSION>(img.width);
    cinfo.image_height = static_cast<JDIMENSION>(img.height);
    cinfo.input_components = 3;
    cinfo.in_color_space = JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    while (cinfo.next_scanline < cinfo.image_height) {
        JSAMPROW row = const_cast<JSAMPROW>(img.rgb.data() +
                                            static_cast<std::size_t>(cinfo.next_scanline) * img.width * 3);
        jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
}

GrayImage to_grayscale(const RasterImage& img) {
    GrayImage out;
    out.values.resize(img.height, img.width);
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            const std::uint8_t* p = img.pixel(r, c);
            out.values(r, c) = (static_cast<double>(p[0]) + p[1] + p[2]) / 3.0;
        }
    }
    return out;
}

RasterImage resize(const RasterImage& img, int target_width, int target_height) {
    check_target(target_width, target_height);
    Eigen::ArrayXXd plane(img.height, img.width);
    RasterImage out(target_width, target_height);
    for (int ch = 0; ch < 3; ++ch) {
        for (int r = 0; r < img.height; ++r)
            for (int c = 0; c < img.width; ++c) plane(r, c) = img.pixel(r, c)[ch];
        Eigen::ArrayXXd res = resize_plane(plane, target_height, target_width);
        for (int r = 0; r < target_height; ++r) {
            for (int c = 0; c < target_width; ++c) {
                out.pixel(r, c)[ch] =
                    static_cast<std::uint8_t>(std::clamp(std::lround(res(r, c)), 0L, 255L));
            }
        }
    }
    return out;
}

GrayImage resize(const GrayImage& img, int target_width, int target_height) {
    check_target(target_width, target_height);
    return GrayImage{resize_plane(img.values, target_height, target_width)};
}

LabImage resize(const LabImage& img, int target_width, int target_height) {
    check_target(target_width, target_height);
    return LabImage{resize_plane(img.L, target_height, target_width),
                    resize_plane(img.a, target_height, target_width),
                    resize_plane(img.b, target_height, target_width)};
}

GrayImage resize_to_height(const GrayImage& img, int target_height) {
    check_target(1, target_height);
    const double ratio = static_cast<double>(target_height) / img.height();
    const int target_width = std::max(1, static_cast<int>(std::lround(img.width() * ratio)));
    return resize(img, target_width, target_height);
}

Lab srgb_to_lab(double r, double g, double b) {
    const double lin[3] = {srgb_linearize(r), srgb_linearize(g), srgb_linearize(b)};
    double xyz[3];
    for (int i = 0; i < 3; ++i) {
        xyz[i] = kM[i][0] * lin[0] + kM[i][1] * lin[1] + kM[i][2] * lin[2];
    }
    const double fx = lab_f(xyz[0] / kWhite[0]);
    const double fy = lab_f(xyz[1] / kWhite[1]);
    const double fz = lab_f(xyz[2] / kWhite[2]);
    return Lab(116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz));
}

Eigen::Vector3d lab_to_srgb(const Lab& lab) {
    const double fy = (lab.x() + 16.0) / 116.0;
    const double fx = fy + lab.y() / 500.0;
    const double fz = fy - lab.z() / 200.0;
    const double xyz[3] = {kWhite[0] * lab_f_inv(fx), kWhite[1] * lab_f_inv(fy),
                           kWhite[2] * lab_f_inv(fz)};
    Eigen::Vector3d out;
    for (int i = 0; i < 3; ++i) {
        const double lin = kMInv[i][0] * xyz[0] + kMInv[i][1] * xyz[1] + kMInv[i][2] * xyz[2];
        out[i] = srgb_delinearize(lin);
    }
    return out;
}

LabImage srgb_to_lab(const RasterImage& img) {
    LabImage out;
    out.L.resize(img.height, img.width);
    out.a.resize(img.height, img.width);
    out.b.resize(img.height, img.width);
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            const std::uint8_t* p = img.pixel(r, c);
            const Lab lab = srgb_to_lab(p[0], p[1], p[2]);
            out.L(r, c) = lab.x();
            out.a(r, c) = lab.y();
            out.b(r, c) = lab.z();
        }
    }
    return out;
}

RasterImage lab_to_srgb(const LabImage& img) {
    RasterImage out(img.width(), img.height());
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            const Eigen::Vector3d rgb = lab_to_srgb(img.at(r, c));
            for (int ch = 0; ch < 3; ++ch) {
                out.pixel(r, c)[ch] =
                    static_cast<std::uint8_t>(std::clamp(std::lround(rgb[ch]), 0L, 255L));
            }
        }
    }
    return out;
}

} // namespace drawlab::imaging
