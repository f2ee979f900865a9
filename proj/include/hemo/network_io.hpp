#pragma once

#include "hemo/network.hpp"

#include <iosfwd>
#include <string>

namespace hemo {

/*! @brief Line-oriented network description.
 *
 * One directive per line, key=value arguments, '#' comments:
 *
 *   segment   id=<name> length=<cm> dx=<cm> law=artery|vein beta=<val>
 *             a0=<cm^2> [p0=] [rho=] [mu=] [kf=] [g=]
 *   junction  kind=bifurcation|confluence|one_to_one parents=<id[,id]>
 *             children=<id[,id]>
 *   boundary  kind=inflow segment=<id> end=start|end ps= ed= period= [vti=]
 *   boundary  kind=absorbing segment=<id> end=start|end [a=] [v=]
 *   boundary  kind=terminal segment=<id> end=start|end r= [pout=]
 *   boundary  kind=rcr segment=<id> end=start|end rp= rd= c= [pout=]
 *   probe     segment=<id> frac=<0..1> [label=<name>]
 */
Network parse_network(std::istream& in);
Network parse_network_file(const std::string& path);

/// One CSV per probe: t,A,v,Q,p.
void write_probe_csv(const ProbeSeries& series, std::ostream& out);

}  // namespace hemo
