#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vmoser/grid_field.hpp"

namespace vmoser {

static_assert(std::endian::native == std::endian::little,
              "VMF1 I/O assumes a little-endian host");

/// Shortest round-trip-exact decimal form (17 significant digits).
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ======================================================================
// VMF1: magic "VMF1\0\0\0\0"; u32 nx, ny, components, flags (bit0 = mask
// present); f64 origin_x, origin_y, h, mask_radius; then nx*ny*components
// f64 samples, row-major (i fastest inside row j), components interleaved.
// All integers and floats little-endian.
// ======================================================================

inline constexpr char vmf_magic[8] = {'V', 'M', 'F', '1', 0, 0, 0, 0};

inline void write_vmf(const std::filesystem::path& path, const GridField2D& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(vmf_magic, 8);
    std::uint32_t head[4] = {static_cast<std::uint32_t>(f.nx()), static_cast<std::uint32_t>(f.ny()),
                             static_cast<std::uint32_t>(f.components()), f.masked() ? 1u : 0u};
    out.write(reinterpret_cast<const char*>(head), sizeof head);
    double geo[4] = {f.spec().origin.x, f.spec().origin.y, f.h(), f.masked() ? f.mask_radius() : 0.0};
    out.write(reinterpret_cast<const char*>(geo), sizeof geo);
    out.write(reinterpret_cast<const char*>(f.data().data()),
              static_cast<std::streamsize>(f.data().size() * sizeof(double)));
    if (!out) throw std::runtime_error("short write: " + path.string());
}

inline GridField2D read_vmf(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, vmf_magic, 8) != 0)
        throw std::runtime_error("not a VMF1 file: " + path.string());
    std::uint32_t head[4];
    double geo[4];
    if (!in.read(reinterpret_cast<char*>(head), sizeof head) ||
        !in.read(reinterpret_cast<char*>(geo), sizeof geo))
        throw std::runtime_error("malformed VMF1 header: " + path.string());
    if (head[0] < 2 || head[1] < 2 || head[0] > 1u << 20 || head[1] > 1u << 20)
        throw std::runtime_error("malformed VMF1 header: " + path.string());
    if (head[2] != 1 && head[2] != 2)
        throw std::runtime_error("malformed VMF1 header: bad component count in " + path.string());
    std::size_t n = static_cast<std::size_t>(head[0]) * head[1] * head[2];
    std::vector<double> data(n);
    if (!in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(n * sizeof(double))))
        throw std::runtime_error("malformed VMF1 payload: " + path.string());
    GridSpec spec{{geo[0], geo[1]}, geo[2], static_cast<int>(head[0]), static_cast<int>(head[1])};
    double mask = (head[3] & 1u) ? geo[3] : 0.0;
    return GridField2D(spec, static_cast<int>(head[2]), std::move(data), mask);
}

// ======================================================================
// Space-time manifests: a text file with one cylinder header line and one
// "t=<float> file=<relative path>" line per slice, in time order.
// ======================================================================

inline std::string scaling_name(Cylinder::Scaling s) {
    return s == Cylinder::Scaling::euler ? "euler" : "parabolic";
}

inline Cylinder::Scaling scaling_from_name(const std::string& s) {
    if (s == "euler") return Cylinder::Scaling::euler;
    if (s == "parabolic") return Cylinder::Scaling::parabolic;
    throw std::runtime_error("unknown cylinder scaling: " + s);
}

/// Writes <base>_NNN.vmf slices plus <base>.manifest into dir; returns the
/// manifest path.
inline std::filesystem::path write_space_time(const std::filesystem::path& dir, const std::string& base,
                                              const SpaceTimeField& F) {
    std::filesystem::create_directories(dir);
    std::filesystem::path manifest = dir / (base + ".manifest");
    std::ofstream out(manifest);
    if (!out) throw std::runtime_error("cannot open for writing: " + manifest.string());
    const Cylinder& c = F.cylinder();
    out << "# space-time field slices\n";
    out << "cylinder cx=" << fmt17(c.center.x) << " cy=" << fmt17(c.center.y)
        << " r=" << fmt17(c.radius) << " t0=" << fmt17(c.t0) << " t1=" << fmt17(c.t1)
        << " scaling=" << scaling_name(c.scaling) << "\n";
    for (std::size_t k = 0; k < F.slice_count(); ++k) {
        char name[64];
        std::snprintf(name, sizeof name, "%s_%03zu.vmf", base.c_str(), k);
        write_vmf(dir / name, F.slice(k));
        out << "t=" << fmt17(F.time(k)) << " file=" << name << "\n";
    }
    if (!out) throw std::runtime_error("short write: " + manifest.string());
    return manifest;
}

namespace detail {

inline std::map<std::string, std::string> parse_kv(const std::string& line) {
    std::map<std::string, std::string> kv;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

inline double kv_num(const std::map<std::string, std::string>& kv, const std::string& key,
                     const std::string& where) {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::runtime_error("manifest missing " + key + " in " + where);
    return std::stod(it->second);
}

}  // namespace detail

inline SpaceTimeField read_space_time(const std::filesystem::path& manifest) {
    std::ifstream in(manifest);
    if (!in) throw std::runtime_error("cannot open: " + manifest.string());
    std::filesystem::path dir = manifest.parent_path();

    bool have_cyl = false;
    Cylinder cyl{};
    std::vector<double> times;
    std::vector<GridField2D> slices;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("cylinder", 0) == 0) {
            auto kv = detail::parse_kv(line.substr(8));
            cyl.center = {detail::kv_num(kv, "cx", manifest.string()), detail::kv_num(kv, "cy", manifest.string())};
            cyl.radius = detail::kv_num(kv, "r", manifest.string());
            cyl.t0 = detail::kv_num(kv, "t0", manifest.string());
            cyl.t1 = detail::kv_num(kv, "t1", manifest.string());
            auto it = kv.find("scaling");
            cyl.scaling = it == kv.end() ? Cylinder::Scaling::euler : scaling_from_name(it->second);
            cyl.validate();
            have_cyl = true;
            continue;
        }
        auto kv = detail::parse_kv(line);
        if (!kv.count("t") || !kv.count("file"))
            throw std::runtime_error("malformed manifest line in " + manifest.string() + ": " + line);
        times.push_back(std::stod(kv["t"]));
        std::filesystem::path p = kv["file"];
        slices.push_back(read_vmf(p.is_absolute() ? p : dir / p));
    }
    if (!have_cyl) throw std::runtime_error("manifest has no cylinder line: " + manifest.string());
    if (times.empty()) throw std::runtime_error("manifest lists no slices: " + manifest.string());
    return SpaceTimeField(cyl, std::move(times), std::move(slices));
}

}  // namespace vmoser
