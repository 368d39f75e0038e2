#ifndef RRD_INSTANCE_IO_HPP
#define RRD_INSTANCE_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rrd/classical.hpp"
#include "rrd/prob.hpp"

namespace rrd {

// Parsed instance document: the problem plus presentation/solver extras.
struct InstanceDoc {
  ProblemInstance instance;
  std::vector<std::string> source_labels;
  std::vector<std::string> repro_labels;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  bool has_tol = false;
  bool has_seed = false;
};

// Reads the key/value + matrix-block instance grammar. Throws ParseError
// with the offending 1-based line number.
InstanceDoc parse_instance(std::istream& in);
InstanceDoc parse_instance_file(const std::string& path);

// Canonical text form (radius in nats); reparses to an identical instance.
void dump_instance(std::ostream& out, const InstanceDoc& doc);

// Header: D,rate_nats,slope_s,lambda,kl_achieved,worst_distortion.
// Rows must already be sorted by distortion; non-finite multipliers are
// written as 0 (degenerate-ball rows).
void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& points);

}  // namespace rrd

#endif  // RRD_INSTANCE_IO_HPP
