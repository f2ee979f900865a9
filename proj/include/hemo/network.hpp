#pragma once

#include "hemo/boundary.hpp"
#include "hemo/junction.hpp"
#include "hemo/kinetic.hpp"
#include "hemo/vessel.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace hemo {

struct network_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AbsorbingEnd {
    double a_ref = 0.0;  ///< 0 means "use the segment's a0"
    double v_ref = 0.0;
};

struct EndRef {
    std::string segment;
    SegmentEnd end = SegmentEnd::start;
};

struct BoundaryAttachment {
    EndRef at;
    std::variant<InflowWaveform, AbsorbingEnd, TerminalResistance, RCR> model;
};

enum class JunctionKind { bifurcation, confluence, one_to_one };

/// Parents connect through their end cell, children through their start cell.
struct JunctionSpec {
    JunctionKind kind = JunctionKind::one_to_one;
    std::vector<std::string> parents;
    std::vector<std::string> children;
};

struct Probe {
    std::string segment;
    double frac = 0.0;        ///< sampled cell = floor(frac * last), unless index >= 0
    std::int64_t index = -1;  ///< explicit cell index override
    std::string label;
};

struct ProbeSeries {
    std::string label;
    std::vector<double> t, a, v, q, p;
};

struct Network {
    std::vector<VesselSegment> segments;
    std::vector<JunctionSpec> junctions;
    std::vector<BoundaryAttachment> boundaries;
    std::vector<Probe> probes;

    VesselSegment& segment(const std::string& id);
    const VesselSegment& segment(const std::string& id) const;

    /// Checks ids, arity, orientation, and that every segment end is claimed
    /// exactly once; throws network_error naming the offender.
    void validate() const;
};

struct SimOptions {
    double duration = 0.0;
    double dt_cap = std::numeric_limits<double>::infinity();
    double cfl_safety = 0.9;
};

struct SimResult {
    std::vector<ProbeSeries> probes;
    std::size_t steps = 0;
    double elapsed = 0.0;  ///< simulated time, s
};

SimResult simulate(Network& net, const SimOptions& opt);

struct CycleMeans {
    double a = 0.0, v = 0.0, q = 0.0, p = 0.0;
};

/// Arithmetic means over the trailing window of one period.
CycleMeans cycle_mean(const ProbeSeries& series, double period);

}  // namespace hemo
