#include "hardyp/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace hardyp {

std::string format_double(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    if (res.ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, res.ptr);
}

void emit_profile(const RadialProfile& prof,
                  std::span<const std::pair<double, double>> w_trace,
                  const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("emit_profile: cannot open " + path);
    os << "r,u,du_dr,flux,w\n";
    std::size_t wi = 0;
    for (std::size_t i = 0; i < prof.r.size(); ++i) {
        double w = 0.0;
        while (wi < w_trace.size() && w_trace[wi].first < prof.r[i]) ++wi;
        if (wi < w_trace.size() && w_trace[wi].first == prof.r[i]) w = w_trace[wi].second;
        os << format_double(prof.r[i]) << ',' << format_double(prof.u[i]) << ','
           << format_double(prof.du_dr[i]) << ',' << format_double(prof.flux[i]) << ','
           << format_double(w) << '\n';
    }
    if (!os) throw std::runtime_error("emit_profile: write failed for " + path);
}

void emit_summary(const nlohmann::json& summary, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("emit_summary: cannot open " + path);
    os << summary.dump(2) << '\n';
    if (!os) throw std::runtime_error("emit_summary: write failed for " + path);
}

RadialProfile read_profile(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_profile: cannot open " + path);
    std::string line;
    if (!std::getline(is, line) || line.rfind("r,u,du_dr,flux", 0) != 0)
        throw std::runtime_error("read_profile: bad header in " + path);
    RadialProfile prof;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        double vals[4];
        for (double& v : vals) {
            if (!std::getline(ls, cell, ','))
                throw std::runtime_error("read_profile: short row in " + path);
            v = std::stod(cell);
        }
        prof.r.push_back(vals[0]);
        prof.u.push_back(vals[1]);
        prof.du_dr.push_back(vals[2]);
        prof.flux.push_back(vals[3]);
    }
    return prof;
}

} // namespace hardyp
