#include "gcm/io.hpp"

#include <bit>
#include <fstream>
#include <iterator>

namespace gcm {

namespace {

class Writer {
public:
    void bytes(const char* p, std::size_t n) { out_.append(p, n); }
    void u16(std::uint16_t v) {
        for (int b = 0; b < 2; ++b) out_.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
    }
    void u32(std::uint32_t v) {
        for (int b = 0; b < 4; ++b) out_.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
    }
    void f64(double d) {
        const auto v = std::bit_cast<std::uint64_t>(d);
        for (int b = 0; b < 8; ++b) out_.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
    }
    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class Reader {
public:
    Reader(const std::string& s, const char* what) : s_(s), what_(what) {}
    void need(std::size_t n) const {
        if (pos_ + n > s_.size()) throw FormatError(std::string(what_) + ": truncated file");
    }
    std::string bytes(std::size_t n) {
        need(n);
        std::string r = s_.substr(pos_, n);
        pos_ += n;
        return r;
    }
    std::uint64_t raw(int n) {
        need(n);
        std::uint64_t v = 0;
        for (int b = 0; b < n; ++b) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(s_[pos_ + b])) << (8 * b);
        pos_ += n;
        return v;
    }
    std::uint16_t u16() { return static_cast<std::uint16_t>(raw(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(raw(4)); }
    double f64() { return std::bit_cast<double>(raw(8)); }
    std::size_t remaining() const { return s_.size() - pos_; }

private:
    const std::string& s_;
    const char* what_;
    std::size_t pos_ = 0;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

void spit(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

void check_header(Reader& r, const char* magic, std::uint16_t version, const char* what) {
    if (r.bytes(4) != magic) throw FormatError(std::string(what) + ": bad magic");
    const std::uint16_t v = r.u16();
    if (v != version) throw FormatError(std::string(what) + ": unsupported version " + std::to_string(v));
}

}  // namespace

std::string encode_cube(const TimeSeriesCube& c) {
    Writer w;
    w.bytes("GCMC", 4);
    w.u16(kCubeFormatVersion);
    w.u32(static_cast<std::uint32_t>(c.nxd()));
    w.u32(static_cast<std::uint32_t>(c.nyd()));
    w.u32(static_cast<std::uint32_t>(c.nt()));
    for (double d : {c.dt(), c.dx(), c.dy(), c.plane_z(), c.t0(), c.x0(), c.y0()}) w.f64(d);
    for (double d : c.data()) w.f64(d);
    return w.take();
}

TimeSeriesCube decode_cube(const std::string& bytes) {
    Reader r(bytes, "cube");
    check_header(r, "GCMC", kCubeFormatVersion, "cube");
    const std::uint32_t nx = r.u32(), ny = r.u32(), nt = r.u32();
    const double dt = r.f64(), dx = r.f64(), dy = r.f64(), pz = r.f64(), t0 = r.f64(), x0 = r.f64(), y0 = r.f64();
    const std::size_t n = static_cast<std::size_t>(nx) * ny * nt;
    if (r.remaining() < 8 * n) throw FormatError("cube: truncated file");
    if (r.remaining() > 8 * n) throw FormatError("cube: trailing bytes after payload");
    if (nx == 0 || ny == 0 || nt == 0 || !(dt > 0)) throw FormatError("cube: invalid header");
    TimeSeriesCube c(static_cast<int>(nx), static_cast<int>(ny), static_cast<int>(nt), dt, dx, dy, pz, t0, x0, y0);
    for (double& d : c.data()) d = r.f64();
    return c;
}

std::string encode_field(const ScalarField& f) {
    const Grid3D& g = f.grid();
    Writer w;
    w.bytes("GCMF", 4);
    w.u16(kFieldFormatVersion);
    for (int a = 0; a < 3; ++a) w.u32(static_cast<std::uint32_t>(g.count(a)));
    for (double d : {g.dx(), g.dy(), g.dz(), g.origin().x, g.origin().y, g.origin().z}) w.f64(d);
    for (double d : f.data()) w.f64(d);
    return w.take();
}

ScalarField decode_field(const std::string& bytes) {
    Reader r(bytes, "field");
    check_header(r, "GCMF", kFieldFormatVersion, "field");
    const std::uint32_t nx = r.u32(), ny = r.u32(), nz = r.u32();
    double v[6];
    for (double& d : v) d = r.f64();
    const std::size_t n = static_cast<std::size_t>(nx) * ny * nz;
    if (r.remaining() < 8 * n) throw FormatError("field: truncated file");
    if (r.remaining() > 8 * n) throw FormatError("field: trailing bytes after payload");
    if (nx < 2 || ny < 2 || nz < 2 || !(v[0] > 0 && v[1] > 0 && v[2] > 0)) throw FormatError("field: invalid header");
    Grid3D g(static_cast<int>(nx), static_cast<int>(ny), static_cast<int>(nz), v[0], v[1], v[2], {v[3], v[4], v[5]});
    std::vector<double> vals(n);
    for (double& d : vals) d = r.f64();
    return ScalarField(g, std::move(vals));
}

void write_cube(const std::string& path, const TimeSeriesCube& cube) { spit(path, encode_cube(cube)); }
TimeSeriesCube read_cube(const std::string& path) { return decode_cube(slurp(path)); }
void write_field(const std::string& path, const ScalarField& field) { spit(path, encode_field(field)); }
ScalarField read_field(const std::string& path) { return decode_field(slurp(path)); }

}  // namespace gcm
