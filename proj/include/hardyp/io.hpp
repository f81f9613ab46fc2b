#pragma once

#include <span>
#include <string>
#include <utility>

#include "json.hpp"

#include "hardyp/profile.hpp"

namespace hardyp {

// CSV with the exact header `r,u,du_dr,flux,w`, one row per radius, shortest
// round-trip number formatting, UNIX newlines.  Byte-for-byte deterministic
// for identical inputs.  The w column is taken from the trace when supplied,
// otherwise left as 0 for rows without one.
void emit_profile(const RadialProfile& prof,
                  std::span<const std::pair<double, double>> w_trace,
                  const std::string& path);

// JSON summary; absent fields must have been omitted by the caller already.
void emit_summary(const nlohmann::json& summary, const std::string& path);

// Shortest representation of x that parses back to exactly x.
std::string format_double(double x);

// Parses a CSV produced by emit_profile (w column ignored).
RadialProfile read_profile(const std::string& path);

} // namespace hardyp
