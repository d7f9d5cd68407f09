#pragma once

#include <string>
#include <vector>

#include "potwell/evolution.hpp"
#include "potwell/grid.hpp"

namespace potwell {

struct CheckpointError : std::runtime_error {
    enum class Kind { BadMagic, VersionMismatch, Truncated, Io };
    Kind kind;
    CheckpointError(Kind k, const std::string& what)
        : std::runtime_error(what), kind(k) {}
};

struct Checkpoint {
    Field u;
    double t = 0.0;
    double mu = 0.0;
};

/// Binary layout (all little-endian): magic "CHQH", u32 version, u32 M,
/// f64 L, f64 mu, f64 t, then M^3 f64 samples in x-fastest order.
/// Round trip is bit-exact.
void write_checkpoint(const Field& u, double t, double mu, const std::string& path);
Checkpoint read_checkpoint(const std::string& path);

/// CSV `t,a,b,j,i,l2,linf,dt,dissipation,klass`, floats at 17 significant
/// digits, klass one of W|V|N|Z.
void write_timeseries(const std::vector<TrajectoryRecord>& records, const std::string& path);
std::vector<TrajectoryRecord> read_timeseries(const std::string& path);

std::string format_double(double x);  // %.17g

}  // namespace potwell
