#include "lrs/io.hpp"

#include <charconv>
#include <limits>
#include <fstream>
#include <sstream>

#include "lrs/error.hpp"

namespace lrs {

using nlohmann::json;

std::string fmt_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io, "cannot write '" + path.string() + "'");
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt_double(row[i]);
        out << '\n';
    }
    if (!out) throw Error(Errc::io, "write failed for '" + path.string() + "'");
}

std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_csv(
    const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io, "cannot open '" + path.string() + "'");
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (header.empty()) {
            header = cells;
            continue;
        }
        std::vector<double> row;
        for (const auto& c : cells) {
            double v = 0.0;
            const auto r = std::from_chars(c.data(), c.data() + c.size(), v);
            if (r.ec != std::errc() || r.ptr != c.data() + c.size()) {
                if (c == "nan" || c == "-nan") {
                    v = std::numeric_limits<double>::quiet_NaN();
                } else {
                    throw Error(Errc::io, path.string() + ":" + std::to_string(lineno) +
                                              ": bad number '" + c + "'");
                }
            }
            row.push_back(v);
        }
        if (row.size() != header.size())
            throw Error(Errc::io, path.string() + ":" + std::to_string(lineno) + ": column count");
        rows.push_back(std::move(row));
    }
    return {header, rows};
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io, "cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io, "cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(Errc::io, "invalid JSON in '" + path.string() + "': " + e.what());
    }
}

void write_measurements(const std::filesystem::path& csv, const ModalMeasurementSet& m,
                        const json& config) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < m.values.size(); ++i)
        rows.push_back({m.grid.values[i], m.values[i].real(), m.values[i].imag()});
    write_csv(csv, {"k", "re", "im"}, rows);
    json side;
    side["grid"] = {{"values", m.grid.values}, {"rho", m.grid.rho},   {"N", m.grid.N},
                    {"k0", m.grid.k0},         {"k_end", m.grid.k_end}, {"delta_k", m.grid.delta_k}};
    side["x_meas"] = m.x_meas;
    side["N"] = m.grid.N;
    side["provenance"] = {{"kind", m.provenance.kind},
                          {"base", m.provenance.base},
                          {"sigma", m.provenance.sigma},
                          {"seed", m.provenance.seed}};
    side["config"] = config;
    auto sidecar = csv;
    write_json(sidecar.replace_extension(".json"), side);
}

LoadedMeasurements read_measurements(const std::filesystem::path& csv) {
    const auto [header, rows] = read_csv(csv);
    if (header != std::vector<std::string>{"k", "re", "im"})
        throw Error(Errc::io, csv.string() + ": expected columns k,re,im");
    auto sidecar = csv;
    const json side = read_json(sidecar.replace_extension(".json"));
    LoadedMeasurements out;
    auto& m = out.set;
    try {
        m.x_meas = side.at("x_meas").get<double>();
        const json& g = side.at("grid");
        m.grid.values = g.at("values").get<std::vector<double>>();
        m.grid.rho = g.at("rho").get<double>();
        m.grid.N = g.at("N").get<int>();
        m.grid.k0 = g.at("k0").get<double>();
        m.grid.k_end = g.at("k_end").get<double>();
        m.grid.delta_k = g.at("delta_k").get<double>();
        const json& p = side.at("provenance");
        m.provenance.kind = p.at("kind").get<std::string>();
        m.provenance.base = p.at("base").get<std::string>();
        m.provenance.sigma = p.at("sigma").get<double>();
        m.provenance.seed = p.at("seed").get<std::uint64_t>();
        out.config = side.at("config");
    } catch (const json::exception& e) {
        throw Error(Errc::io, "malformed measurement sidecar: " + std::string(e.what()));
    }
    if (rows.size() != m.grid.values.size())
        throw Error(Errc::io, "measurement CSV and sidecar disagree on the number of frequencies");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][0] != m.grid.values[i])
            throw Error(Errc::io, "measurement CSV frequency mismatch at row " + std::to_string(i));
        m.values.emplace_back(rows[i][1], rows[i][2]);
    }
    return out;
}

}  // namespace lrs
