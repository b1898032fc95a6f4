#pragma once

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fracspace/grid.hpp"

namespace fracspace {

static_assert(std::endian::native == std::endian::little,
              "GFN payload is little-endian; big-endian hosts are unsupported");

// GFN format: one JSON header line terminated by '\n', then raw IEEE-754
// doubles (re/im interleaved when complex). No padding, no trailer.
inline void write_gfn(const GridFunction& f, const std::filesystem::path& path) {
    f.validate();
    nlohmann::json dims = nlohmann::json::array();
    nlohmann::json lens = nlohmann::json::array();
    for (int a = 0; a < f.grid.dim; ++a) {
        dims.push_back(f.grid.n[a]);
        lens.push_back(f.grid.length[a]);
    }
    std::ostringstream header;
    header << "{\"magic\":\"GFN1\",\"N\":" << f.grid.dim << ",\"dims\":" << dims.dump()
           << ",\"L\":" << lens.dump() << ",\"kind\":\""
           << (f.kind == Kind::real ? "real" : "complex")
           << "\",\"dtype\":\"f64le\",\"layout\":\"row-major\"}\n";

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
    const std::string h = header.str();
    out.write(h.data(), static_cast<std::streamsize>(h.size()));

    std::vector<double> payload;
    if (f.kind == Kind::real) {
        payload.resize(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) payload[i] = f.values[i].real();
    } else {
        payload.resize(2 * f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            payload[2 * i] = f.values[i].real();
            payload[2 * i + 1] = f.values[i].imag();
        }
    }
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size() * sizeof(double)));
    if (!out) throw FormatError("short write to '" + path.string() + "'");
}

inline GridFunction read_gfn(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path.string() + "'");

    std::string header;
    if (!std::getline(in, header)) throw FormatError("missing GFN header line");

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(header);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("unparsable GFN header: ") + e.what());
    }

    if (!j.contains("magic") || j["magic"] != "GFN1") throw FormatError("bad magic, expected GFN1");
    if (!j.contains("dtype") || j["dtype"] != "f64le") throw FormatError("unsupported dtype");
    if (!j.contains("layout") || j["layout"] != "row-major")
        throw FormatError("unsupported layout");

    const std::string kind_s = j.value("kind", "");
    if (kind_s != "real" && kind_s != "complex") throw FormatError("kind must be real or complex");
    const Kind kind = (kind_s == "real") ? Kind::real : Kind::complex;

    const int N = j.value("N", 0);
    if (N < 1 || N > 3) throw FormatError("N out of range");
    if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].size() != static_cast<size_t>(N))
        throw FormatError("dims must list one extent per axis");
    if (!j.contains("L") || !j["L"].is_array() || j["L"].size() != static_cast<size_t>(N))
        throw FormatError("L must list one length per axis");

    std::array<int, 3> n{1, 1, 1};
    std::array<double, 3> L{1.0, 1.0, 1.0};
    for (int a = 0; a < N; ++a) {
        n[a] = j["dims"][a].get<int>();
        L[a] = j["L"][a].get<double>();
    }

    GridSpec grid;
    try {
        grid = GridSpec::make(N, n, L);
    } catch (const MalformedInputError& e) {
        throw FormatError(std::string("invalid grid in header: ") + e.what());
    }

    const std::size_t count = grid.size() * (kind == Kind::complex ? 2 : 1);
    std::vector<double> payload(count);
    in.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != count * sizeof(double))
        throw FormatError("payload shorter than header dims promise");
    char extra;
    if (in.read(&extra, 1))
        throw FormatError("payload longer than header dims promise");

    for (double v : payload)
        if (!std::isfinite(v)) throw FormatError("non-finite value in payload");

    GridFunction f = GridFunction::zeros(grid, kind);
    if (kind == Kind::real) {
        for (std::size_t i = 0; i < grid.size(); ++i) f.values[i] = payload[i];
    } else {
        for (std::size_t i = 0; i < grid.size(); ++i)
            f.values[i] = cplx{payload[2 * i], payload[2 * i + 1]};
    }
    f.validate();
    return f;
}

} // namespace fracspace
