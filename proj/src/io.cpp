#include "potwell/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace potwell {

namespace {

constexpr char kMagic[4] = {'C', 'H', 'Q', 'H'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, 8);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

struct Reader {
    const std::string& buf;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > buf.size())
            throw CheckpointError(CheckpointError::Kind::Truncated,
                                  "checkpoint: truncated payload");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
        pos += 4;
        return v;
    }
    double f64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
        pos += 8;
        double x;
        std::memcpy(&x, &v, 8);
        return x;
    }
};

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_checkpoint(const Field& u, double t, double mu, const std::string& path) {
    std::string out;
    out.reserve(32 + 8 * u.values.size());
    out.append(kMagic, 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(u.domain.M));
    put_f64(out, u.domain.L);
    put_f64(out, mu);
    put_f64(out, t);
    for (double v : u.values) put_f64(out, v);

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw CheckpointError(CheckpointError::Kind::Io, "checkpoint: cannot open " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw CheckpointError(CheckpointError::Kind::Io, "checkpoint: write failed " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw CheckpointError(CheckpointError::Kind::Io, "checkpoint: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    const std::string buf = ss.str();

    Reader r{buf};
    r.need(4);
    if (std::memcmp(buf.data(), kMagic, 4) != 0)
        throw CheckpointError(CheckpointError::Kind::BadMagic, "checkpoint: bad magic");
    r.pos = 4;
    const std::uint32_t version = r.u32();
    if (version != kVersion)
        throw CheckpointError(CheckpointError::Kind::VersionMismatch,
                              "checkpoint: unsupported version " + std::to_string(version));
    const std::uint32_t m = r.u32();
    const double L = r.f64();
    Checkpoint ck;
    ck.mu = r.f64();
    ck.t = r.f64();

    BoxDomain d(L, static_cast<int>(m));
    r.need(8 * d.size());
    ck.u = Field(d);
    for (double& v : ck.u.values) v = r.f64();
    return ck;
}

void write_timeseries(const std::vector<TrajectoryRecord>& records, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("timeseries: cannot open " + path);
    f << "t,a,b,j,i,l2,linf,dt,dissipation,klass\n";
    for (const TrajectoryRecord& r : records) {
        f << format_double(r.t) << ',' << format_double(r.a) << ',' << format_double(r.b)
          << ',' << format_double(r.j) << ',' << format_double(r.i) << ','
          << format_double(r.l2) << ',' << format_double(r.linf) << ','
          << format_double(r.dt) << ',' << format_double(r.dissipation) << ','
          << well_class_letter(r.klass) << '\n';
    }
    if (!f) throw std::runtime_error("timeseries: write failed " + path);
}

std::vector<TrajectoryRecord> read_timeseries(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("timeseries: cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("timeseries: empty file " + path);
    if (line != "t,a,b,j,i,l2,linf,dt,dissipation,klass")
        throw std::runtime_error("timeseries: unexpected header " + line);

    std::vector<TrajectoryRecord> out;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 10)
            throw std::runtime_error("timeseries: malformed row " + line);
        TrajectoryRecord r;
        r.t = std::stod(cells[0]);
        r.a = std::stod(cells[1]);
        r.b = std::stod(cells[2]);
        r.j = std::stod(cells[3]);
        r.i = std::stod(cells[4]);
        r.l2 = std::stod(cells[5]);
        r.linf = std::stod(cells[6]);
        r.dt = std::stod(cells[7]);
        r.dissipation = std::stod(cells[8]);
        switch (cells[9].empty() ? '?' : cells[9][0]) {
            case 'W': r.klass = WellClass::InW; break;
            case 'V': r.klass = WellClass::InV; break;
            case 'N': r.klass = WellClass::Neither; break;
            case 'Z': r.klass = WellClass::Zero; break;
            default: throw std::runtime_error("timeseries: bad class " + cells[9]);
        }
        out.push_back(r);
    }
    return out;
}

}  // namespace potwell
